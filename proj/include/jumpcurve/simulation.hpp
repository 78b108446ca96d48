#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "jumpcurve/curves.hpp"
#include "jumpcurve/model.hpp"
#include "jumpcurve/rng.hpp"

namespace jumpcurve {

/// Jump epochs and sizes of one compound Poisson driver on [0, horizon].
struct JumpRecord {
  std::vector<double> times;
  std::vector<double> sizes;

  std::size_t size() const { return times.size(); }
  /// Number of jumps with epoch <= t.
  std::size_t count_until(double t) const;
};

/// Exponential inter-arrivals at rate alpha, Exp(epsilon) sizes by inversion.
/// Draws alternate (arrival, size), so a longer horizon only appends jumps.
JumpRecord simulate_jumps(const GammaJumpMeasure& measure, double horizon, PhiloxStream& rng);

/// One JumpRecord per factor, factor k drawing from stream (seed, path, k).
std::vector<JumpRecord> simulate_factor_jumps(std::span<const FactorParams> factors, double horizon, std::uint64_t seed,
                                              std::uint64_t path);

/// X(t) = x0 e^{-lambda t} + sigma sum_{u_j <= t} e^{-lambda (t - u_j)} z_j.
double factor_value(const FactorParams& factor, const JumpRecord& jumps, double t);
/// Left limit X(t-): excludes a jump at exactly t.
double factor_value_before(const FactorParams& factor, const JumpRecord& jumps, double t);
std::vector<double> evolve_factor(const FactorParams& factor, const JumpRecord& jumps, std::span<const double> grid);

std::vector<double> factor_state(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t);
double short_rate(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t);

/// I_t = \int_0^t mu - sum_k x_k B_k(0,t) - sum_k sum_{u_j <= t} sigma_k B_k(u_j, t) z_j, exactly.
double integrated_rate(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t);

/// Pathwise bond price P(0,T) exp(I_t - compensator + jump sum) along a path.
double bond_path(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t, double T,
                 IntegralMethod method = IntegralMethod::ClosedForm);
/// HJM form of the forward rate along a path.
double hjm_forward_path(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t, double T,
                        IntegralMethod method = IntegralMethod::ClosedForm);

/// Time grid with points_per_year uniform points on [0, horizon] plus every jump epoch.
std::vector<double> default_grid(double horizon, std::span<const JumpRecord> jumps, std::size_t points_per_year = 252);

/// A fully materialised path: jump records plus trajectories on a grid.
struct SimulatedPath {
  std::vector<JumpRecord> jumps;
  std::vector<double> grid;
  std::vector<std::vector<double>> factors;  ///< factors[k][i] = X^k(grid[i])
  std::vector<double> short_rate;
  std::vector<double> integrated_rate;
};

SimulatedPath simulate_path(const ModelSpec& spec, std::uint64_t seed, std::uint64_t path_index,
                            std::size_t points_per_year = 252);

/// Integrated rate of a materialised path; rejects t outside its grid.
double integrated_rate(const ModelSpec& spec, const SimulatedPath& path, double t);
double bond_path(const ModelSpec& spec, const SimulatedPath& path, double t, double T);
double hjm_forward_path(const ModelSpec& spec, const SimulatedPath& path, double t, double T);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t paths = 0;
};

/// Worker count from JUMPCURVE_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) across worker_count() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sample mean and standard error; compensated sums in index order.
Estimate summarize(std::span<const double> values);

/// Evaluates sample(path) for path = 0..paths-1, possibly in parallel, and
/// reduces in path order so the result does not depend on the worker count.
Estimate monte_carlo(std::size_t paths, const std::function<double(std::uint64_t)>& sample);

/// Sample mean and standard error of exp(-I_T) over exact paths.
Estimate mc_bond_price(const ModelSpec& spec, double T, std::size_t paths, std::uint64_t seed);

/// Sample mean of the discounted pathwise bond P(t,T) e^{-I_t}; equals P(0,T) in expectation.
Estimate mc_discounted_bond(const ModelSpec& spec, double t, double T, std::size_t paths, std::uint64_t seed);

}  // namespace jumpcurve
