#include "jumpcurve/multicurve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jumpcurve {

namespace {

bool has_spread(const DualCurveSpec& dual) {
  return !dual.spread_factors.empty() || dual.shared_factor_count > 0 ||
         dual.spread_floor.kind() != FloorFunction::Kind::Constant || dual.spread_floor.constant_value() != 0.0;
}

std::size_t first_shared(const DualCurveSpec& dual) { return dual.base_count() - dual.shared_factor_count; }

void check_state(const DualCurveSpec& dual, std::span<const double> state) {
  if (state.size() != dual.total_count()) {
    throw std::invalid_argument("state has " + std::to_string(state.size()) + " entries, expected " +
                                std::to_string(dual.total_count()));
  }
}

void check_tenor(double t, double T1, double T2) {
  if (!(T1 < T2)) throw std::invalid_argument("forward period requires T1 < T2");
  check_time_pair(t, T1);
}

}  // namespace

ValidationReport validate(const DualCurveSpec& dual) {
  ValidationReport report = validate(dual.base);
  if (dual.shared_factor_count > dual.base_count()) {
    report.violations.push_back("shared_factor_count exceeds the number of base factors");
  }
  if (!dual.spread_floor.knots_sorted()) report.violations.push_back("spread floor knots not sorted");
  if (!(dual.spread_floor.minimum() >= 0.0)) report.violations.push_back("spread floor must be non-negative");
  for (std::size_t j = 0; j < dual.spread_factors.size(); ++j) {
    const auto& f = dual.spread_factors[j];
    const std::string where = "factor " + std::to_string(dual.base_count() + j + 1) + ": ";
    if (!(f.lambda > 0.0)) report.violations.push_back(where + "lambda must be positive");
    if (!(f.sigma > 0.0)) report.violations.push_back(where + "sigma must be positive");
    if (!(f.x0 >= 0.0)) report.violations.push_back(where + "x0 must be non-negative");
    if (!(f.measure.alpha > 0.0)) report.violations.push_back(where + "alpha must be positive");
    if (!(f.measure.epsilon > 0.0)) report.violations.push_back(where + "epsilon must be positive");
  }
  return report;
}

void require_valid(const DualCurveSpec& dual) {
  const auto report = validate(dual);
  if (!report.ok()) throw std::invalid_argument(report.violations.front());
}

ModelSpec fictitious_model(const DualCurveSpec& dual) {
  if (!has_spread(dual)) return dual.base;
  ModelSpec m;
  m.horizon = dual.base.horizon;
  m.floor = FloorFunction::sum(dual.base.floor, dual.spread_floor);
  m.factors = dual.base.factors;
  for (std::size_t k = first_shared(dual); k < dual.base_count(); ++k) {
    m.factors[k].sigma *= 2.0;
    m.factors[k].x0 *= 2.0;
  }
  m.factors.insert(m.factors.end(), dual.spread_factors.begin(), dual.spread_factors.end());
  return m;
}

std::vector<double> fictitious_state(const DualCurveSpec& dual, std::span<const double> state) {
  check_state(dual, state);
  std::vector<double> out(state.begin(), state.end());
  if (!has_spread(dual)) return out;
  for (std::size_t k = first_shared(dual); k < dual.base_count(); ++k) out[k] *= 2.0;
  return out;
}

std::vector<double> dual_initial_state(const DualCurveSpec& dual) {
  std::vector<double> x = initial_state(dual.base);
  for (const auto& f : dual.spread_factors) x.push_back(f.x0);
  return x;
}

double risk_free_bond_price(const DualCurveSpec& dual, double t, double T, std::span<const double> state) {
  check_state(dual, state);
  return bond_price(dual.base, t, T, state.first(dual.base_count()));
}

double fictitious_bond_price(const DualCurveSpec& dual, double t, double T, std::span<const double> state) {
  return bond_price(fictitious_model(dual), t, T, fictitious_state(dual, state));
}

BondPair bond_ordering_check(const DualCurveSpec& dual, double t, double T, std::span<const double> state) {
  BondPair pair;
  pair.fictitious = fictitious_bond_price(dual, t, T, state);
  pair.risk_free = risk_free_bond_price(dual, t, T, state);
  pair.ordered = pair.fictitious <= pair.risk_free * (1.0 + 1e-12);
  return pair;
}

double forward_spread(const DualCurveSpec& dual, double t, double T, std::span<const double> state) {
  check_state(dual, state);
  const double fbar = forward_rate(fictitious_model(dual), t, T, fictitious_state(dual, state));
  const double f = forward_rate(dual.base, t, T, state.first(dual.base_count()));
  return fbar - f;
}

double short_rate_spread(const DualCurveSpec& dual, double t, std::span<const double> state) {
  check_state(dual, state);
  double s = dual.spread_floor.eval(t);
  for (std::size_t k = first_shared(dual); k < state.size(); ++k) s += state[k];
  return s;
}

double year_fraction(double T1, double T2) { return T2 - T1; }

double ois_forward(const DualCurveSpec& dual, double t, double T1, double T2, std::span<const double> state) {
  check_tenor(t, T1, T2);
  const double ratio = risk_free_bond_price(dual, t, T1, state) / risk_free_bond_price(dual, t, T2, state);
  return (ratio - 1.0) / year_fraction(T1, T2);
}

double libor_forward(const DualCurveSpec& dual, double t, double T1, double T2, std::span<const double> state) {
  check_tenor(t, T1, T2);
  const double ratio = fictitious_bond_price(dual, t, T1, state) / fictitious_bond_price(dual, t, T2, state);
  return (ratio - 1.0) / year_fraction(T1, T2);
}

std::vector<JumpRecord> simulate_dual_jumps(const DualCurveSpec& dual, double horizon, std::uint64_t seed,
                                            std::uint64_t path) {
  std::vector<FactorParams> all = dual.base.factors;
  all.insert(all.end(), dual.spread_factors.begin(), dual.spread_factors.end());
  return simulate_factor_jumps(all, horizon, seed, path);
}

std::vector<double> dual_state(const DualCurveSpec& dual, std::span<const JumpRecord> jumps, double t) {
  if (jumps.size() != dual.total_count()) throw std::invalid_argument("jump records do not match factor count");
  std::vector<double> x;
  x.reserve(jumps.size());
  for (std::size_t k = 0; k < dual.base_count(); ++k) x.push_back(factor_value(dual.base.factors[k], jumps[k], t));
  for (std::size_t j = 0; j < dual.spread_factors.size(); ++j) {
    x.push_back(factor_value(dual.spread_factors[j], jumps[dual.base_count() + j], t));
  }
  return x;
}

double libor_psi(const FactorParams& factor, double s, double z, double T1, double T2) {
  return std::exp(factor.sigma * bond_B(factor, s, T2) * z) - std::exp(factor.sigma * bond_B(factor, s, T1) * z);
}

double libor_sigma(const FactorParams& factor, double s, double z, double T1, double T2) {
  return factor.sigma * (bond_B(factor, s, T1) - bond_B(factor, s, T2)) * z;
}

double libor_path_closed_form(const DualCurveSpec& dual, std::span<const JumpRecord> jumps, double t, double T1,
                              double T2, IntegralMethod method) {
  check_tenor(t, T1, T2);
  if (jumps.size() != dual.total_count()) throw std::invalid_argument("jump records do not match factor count");
  const ModelSpec m = fictitious_model(dual);
  const auto x0 = fictitious_state(dual, dual_initial_state(dual));
  double exponent = log_bond_price(m, 0.0, T1, x0, method) - log_bond_price(m, 0.0, T2, x0, method);
  for (std::size_t k = 0; k < m.factors.size(); ++k) {
    const auto& f = m.factors[k];
    exponent += cumulant_time_integral(f, 0.0, t, T2, method) - cumulant_time_integral(f, 0.0, t, T1, method);
    const auto& record = jumps[k];
    const std::size_t count = record.count_until(t);
    for (std::size_t j = 0; j < count; ++j) exponent += libor_sigma(f, record.times[j], record.sizes[j], T1, T2);
  }
  return std::expm1(exponent) / year_fraction(T1, T2);
}

Estimate mc_fictitious_discounted_bond(const DualCurveSpec& dual, double t, double T, std::size_t paths,
                                       std::uint64_t seed) {
  require_valid(dual);
  const ModelSpec m = fictitious_model(dual);
  check_time_pair(t, T, m.horizon);
  if (paths < 100) throw std::invalid_argument("mc_fictitious_discounted_bond needs at least 100 paths");
  if (t == 0.0) return {bond_price(m, 0.0, T, fictitious_state(dual, dual_initial_state(dual))), 0.0, paths};
  return monte_carlo(paths, [&](std::uint64_t path) {
    const auto jumps = simulate_dual_jumps(dual, t, seed, path);
    return bond_path(m, jumps, t, T) * std::exp(-integrated_rate(m, jumps, t));
  });
}

Estimate mc_fictitious_bond(const DualCurveSpec& dual, double T, std::size_t paths, std::uint64_t seed) {
  require_valid(dual);
  const ModelSpec m = fictitious_model(dual);
  check_time_pair(0.0, T, m.horizon);
  if (paths < 100) throw std::invalid_argument("mc_fictitious_bond needs at least 100 paths");
  if (T == 0.0) return {1.0, 0.0, paths};
  return monte_carlo(paths, [&](std::uint64_t path) {
    const auto jumps = simulate_dual_jumps(dual, T, seed, path);
    // Integrate r and s separately from the l-factor paths.
    double integral = integrated_rate(dual.base, std::span<const JumpRecord>(jumps).first(dual.base_count()), T);
    integral += dual.spread_floor.integrate(0.0, T);
    for (std::size_t k = first_shared(dual); k < dual.total_count(); ++k) {
      const auto& f = k < dual.base_count() ? dual.base.factors[k] : dual.spread_factors[k - dual.base_count()];
      integral -= f.x0 * std::expm1(-f.lambda * T) / f.lambda;
      const auto& record = jumps[k];
      const std::size_t count = record.count_until(T);
      for (std::size_t j = 0; j < count; ++j) {
        integral -= f.sigma * std::expm1(-f.lambda * (T - record.times[j])) / f.lambda * record.sizes[j];
      }
    }
    return std::exp(-integral);
  });
}

}  // namespace jumpcurve
