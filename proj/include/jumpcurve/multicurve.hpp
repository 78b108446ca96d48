#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jumpcurve/curves.hpp"
#include "jumpcurve/model.hpp"
#include "jumpcurve/simulation.hpp"

namespace jumpcurve {

/// Risk-free model plus an additive short-rate spread
/// s_t = mu*(t) + sum_{shared} X^k + sum_{spread} X^k.
///
/// States over l factors are laid out as the n base factors followed by the
/// spread factors. The last shared_factor_count base factors also enter s_t.
struct DualCurveSpec {
  ModelSpec base;
  std::vector<FactorParams> spread_factors;
  FloorFunction spread_floor;  ///< mu* >= 0
  std::size_t shared_factor_count = 0;

  std::size_t base_count() const { return base.factors.size(); }
  std::size_t total_count() const { return base.factors.size() + spread_factors.size(); }
};

ValidationReport validate(const DualCurveSpec& dual);
void require_valid(const DualCurveSpec& dual);

/// Model of r + s: floor mu + mu*, shared factors with doubled loading and
/// start value, then the spread factors. Returns the base model unchanged
/// when there is no spread at all.
ModelSpec fictitious_model(const DualCurveSpec& dual);

/// Maps a state over the l factors onto the fictitious model's state.
std::vector<double> fictitious_state(const DualCurveSpec& dual, std::span<const double> state);

/// Initial state over the l factors.
std::vector<double> dual_initial_state(const DualCurveSpec& dual);

double risk_free_bond_price(const DualCurveSpec& dual, double t, double T, std::span<const double> state);
double fictitious_bond_price(const DualCurveSpec& dual, double t, double T, std::span<const double> state);

struct BondPair {
  double fictitious = 0.0;
  double risk_free = 0.0;
  bool ordered = false;  ///< fictitious <= risk_free up to 1e-12 relative slack
};

BondPair bond_ordering_check(const DualCurveSpec& dual, double t, double T, std::span<const double> state);

/// g(t, T) = fbar(t, T) - f(t, T).
double forward_spread(const DualCurveSpec& dual, double t, double T, std::span<const double> state);
double short_rate_spread(const DualCurveSpec& dual, double t, std::span<const double> state);

/// Plain T2 - T1 in years.
double year_fraction(double T1, double T2);

double ois_forward(const DualCurveSpec& dual, double t, double T1, double T2, std::span<const double> state);
double libor_forward(const DualCurveSpec& dual, double t, double T1, double T2, std::span<const double> state);

/// Jump records for the l factors; base records coincide with the
/// single-curve records for the same seed and path.
std::vector<JumpRecord> simulate_dual_jumps(const DualCurveSpec& dual, double horizon, std::uint64_t seed,
                                            std::uint64_t path);
std::vector<double> dual_state(const DualCurveSpec& dual, std::span<const JumpRecord> jumps, double t);

/// Psi(s, z) = exp(sigma B(s, T2) z) - exp(sigma B(s, T1) z) < 0 for z > 0.
double libor_psi(const FactorParams& factor, double s, double z, double T1, double T2);
/// Sigma(s, z) = sigma (B(s, T1) - B(s, T2)) z > 0 for z > 0.
double libor_sigma(const FactorParams& factor, double s, double z, double T1, double T2);

/// Pathwise LIBOR forward from the time-0 fictitious curve, the Psi
/// compensator and the Sigma jump sum along the path up to t.
double libor_path_closed_form(const DualCurveSpec& dual, std::span<const JumpRecord> jumps, double t, double T1,
                              double T2, IntegralMethod method = IntegralMethod::ClosedForm);

/// Fictitious discounted bond Pbar(t, T) exp(-Ibar_t), averaged over paths.
Estimate mc_fictitious_discounted_bond(const DualCurveSpec& dual, double t, double T, std::size_t paths,
                                       std::uint64_t seed);

/// Sample mean of exp(-\int_0^T (r + s)) over exact paths.
Estimate mc_fictitious_bond(const DualCurveSpec& dual, double T, std::size_t paths, std::uint64_t seed);

}  // namespace jumpcurve
