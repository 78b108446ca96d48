#include "jumpcurve/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace jumpcurve {

std::size_t JumpRecord::count_until(double t) const {
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

JumpRecord simulate_jumps(const GammaJumpMeasure& measure, double horizon, PhiloxStream& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_jumps requires a positive horizon");
  JumpRecord record;
  double clock = 0.0;
  for (;;) {
    clock += rng.exponential(measure.alpha);
    const double size = measure.sample_jump(rng);
    if (!(clock <= horizon)) break;
    record.times.push_back(clock);
    record.sizes.push_back(size);
  }
  return record;
}

std::vector<JumpRecord> simulate_factor_jumps(std::span<const FactorParams> factors, double horizon, std::uint64_t seed,
                                              std::uint64_t path) {
  std::vector<JumpRecord> out;
  out.reserve(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    PhiloxStream rng(seed, path, static_cast<std::uint32_t>(k));
    out.push_back(simulate_jumps(factors[k].measure, horizon, rng));
  }
  return out;
}

namespace {

double factor_value_upto(const FactorParams& factor, const JumpRecord& jumps, double t, std::size_t count) {
  double x = factor.x0 * std::exp(-factor.lambda * t);
  for (std::size_t j = 0; j < count; ++j) {
    x += factor.sigma * std::exp(-factor.lambda * (t - jumps.times[j])) * jumps.sizes[j];
  }
  return x;
}

void check_jump_count(const ModelSpec& spec, std::span<const JumpRecord> jumps) {
  if (jumps.size() != spec.factors.size()) throw std::invalid_argument("jump records do not match factor count");
}

}  // namespace

double factor_value(const FactorParams& factor, const JumpRecord& jumps, double t) {
  return factor_value_upto(factor, jumps, t, jumps.count_until(t));
}

double factor_value_before(const FactorParams& factor, const JumpRecord& jumps, double t) {
  const auto count = static_cast<std::size_t>(std::lower_bound(jumps.times.begin(), jumps.times.end(), t) - jumps.times.begin());
  return factor_value_upto(factor, jumps, t, count);
}

std::vector<double> evolve_factor(const FactorParams& factor, const JumpRecord& jumps, std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(factor_value(factor, jumps, t));
  return out;
}

std::vector<double> factor_state(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t) {
  check_jump_count(spec, jumps);
  std::vector<double> x(spec.factors.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = factor_value(spec.factors[k], jumps[k], t);
  return x;
}

double short_rate(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t) {
  double r = spec.floor.eval(t);
  for (double x : factor_state(spec, jumps, t)) r += x;
  return r;
}

double integrated_rate(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t) {
  check_jump_count(spec, jumps);
  if (!(t >= 0.0)) throw std::invalid_argument("integrated_rate requires t >= 0");
  double value = spec.floor.integrate(0.0, t);
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& f = spec.factors[k];
    const auto& record = jumps[k];
    value -= f.x0 * std::expm1(-f.lambda * t) / f.lambda;
    const std::size_t count = record.count_until(t);
    for (std::size_t j = 0; j < count; ++j) {
      value -= f.sigma * std::expm1(-f.lambda * (t - record.times[j])) / f.lambda * record.sizes[j];
    }
  }
  return value;
}

double bond_path(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t, double T, IntegralMethod method) {
  check_time_pair(t, T, spec.horizon);
  check_jump_count(spec, jumps);
  const auto x0 = initial_state(spec);
  double exponent = log_bond_price(spec, 0.0, T, x0, method) + integrated_rate(spec, jumps, t);
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& f = spec.factors[k];
    const auto& record = jumps[k];
    exponent -= cumulant_time_integral(f, 0.0, t, T, method);
    const std::size_t count = record.count_until(t);
    for (std::size_t j = 0; j < count; ++j) {
      exponent += f.sigma * std::expm1(-f.lambda * (T - record.times[j])) / f.lambda * record.sizes[j];
    }
  }
  return std::exp(exponent);
}

double hjm_forward_path(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t, double T,
                        IntegralMethod method) {
  check_time_pair(t, T, spec.horizon);
  check_jump_count(spec, jumps);
  const auto x0 = initial_state(spec);
  double f = forward_rate(spec, 0.0, T, x0, method);
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& factor = spec.factors[k];
    const auto& record = jumps[k];
    const std::size_t count = record.count_until(t);
    for (std::size_t j = 0; j < count; ++j) {
      f += factor.sigma * record.sizes[j] * std::exp(-factor.lambda * (T - record.times[j]));
    }
    f -= forward_drift_integral(factor, 0.0, t, T, method);
  }
  return f;
}

std::vector<double> default_grid(double horizon, std::span<const JumpRecord> jumps, std::size_t points_per_year) {
  if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon * static_cast<double>(points_per_year))));
  std::vector<double> grid;
  grid.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid.push_back(horizon * static_cast<double>(i) / static_cast<double>(steps));
  for (const auto& record : jumps) grid.insert(grid.end(), record.times.begin(), record.times.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

SimulatedPath simulate_path(const ModelSpec& spec, std::uint64_t seed, std::uint64_t path_index,
                            std::size_t points_per_year) {
  require_valid(spec);
  SimulatedPath path;
  path.jumps = simulate_factor_jumps(spec.factors, spec.horizon, seed, path_index);
  path.grid = default_grid(spec.horizon, path.jumps, points_per_year);
  path.factors.resize(spec.factors.size());
  for (std::size_t k = 0; k < spec.factors.size(); ++k) path.factors[k] = evolve_factor(spec.factors[k], path.jumps[k], path.grid);
  path.short_rate.resize(path.grid.size());
  path.integrated_rate.resize(path.grid.size());
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    double r = spec.floor.eval(path.grid[i]);
    for (const auto& x : path.factors) r += x[i];
    path.short_rate[i] = r;
    path.integrated_rate[i] = integrated_rate(spec, path.jumps, path.grid[i]);
  }
  return path;
}

namespace {

void check_in_grid(const SimulatedPath& path, double t) {
  if (path.grid.empty() || t < path.grid.front() || t > path.grid.back()) {
    throw std::invalid_argument("time " + std::to_string(t) + " outside simulated grid");
  }
}

}  // namespace

double integrated_rate(const ModelSpec& spec, const SimulatedPath& path, double t) {
  check_in_grid(path, t);
  return integrated_rate(spec, path.jumps, t);
}

double bond_path(const ModelSpec& spec, const SimulatedPath& path, double t, double T) {
  check_in_grid(path, t);
  return bond_path(spec, path.jumps, t, T);
}

double hjm_forward_path(const ModelSpec& spec, const SimulatedPath& path, double t, double T) {
  check_in_grid(path, t);
  return hjm_forward_path(spec, path.jumps, t, T);
}

// Monte Carlo ---------------------------------------------------------------

std::size_t worker_count() {
  std::size_t requested = 0;
  if (const char* env = std::getenv("JUMPCURVE_THREADS")) {
    try {
      requested = static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

Estimate summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  const auto n = static_cast<double>(values.size());
  const double mean = compensated_sum(values) / n;
  CompensatedSum<double> squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  Estimate e;
  e.value = mean;
  e.paths = values.size();
  e.standard_error = values.size() > 1 ? std::sqrt(squares.value() / (n - 1.0) / n) : 0.0;
  return e;
}

Estimate monte_carlo(std::size_t paths, const std::function<double(std::uint64_t)>& sample) {
  if (paths == 0) throw std::invalid_argument("monte_carlo needs at least one path");
  std::vector<double> values(paths);
  parallel_for(paths, [&](std::size_t i) { values[i] = sample(i); });
  return summarize(values);
}

Estimate mc_bond_price(const ModelSpec& spec, double T, std::size_t paths, std::uint64_t seed) {
  require_valid(spec);
  check_time_pair(0.0, T, spec.horizon);
  if (paths < 100) throw std::invalid_argument("mc_bond_price needs at least 100 paths");
  if (T == 0.0) return {1.0, 0.0, paths};
  return monte_carlo(paths, [&](std::uint64_t path) {
    const auto jumps = simulate_factor_jumps(spec.factors, T, seed, path);
    return std::exp(-integrated_rate(spec, jumps, T));
  });
}

Estimate mc_discounted_bond(const ModelSpec& spec, double t, double T, std::size_t paths, std::uint64_t seed) {
  require_valid(spec);
  check_time_pair(t, T, spec.horizon);
  if (t == 0.0) return {bond_price(spec, 0.0, T, initial_state(spec)), 0.0, paths};
  return monte_carlo(paths, [&](std::uint64_t path) {
    const auto jumps = simulate_factor_jumps(spec.factors, t, seed, path);
    return bond_path(spec, jumps, t, T) * std::exp(-integrated_rate(spec, jumps, t));
  });
}

}  // namespace jumpcurve
