#include "jumpcurve/curves.hpp"

#include <cmath>
#include <sstream>

namespace jumpcurve {

namespace {

const QuadratureSettings kTimeQuadrature{1e-15, 1e-13, 2000};

// Closed forms in the variable w = exp(-lambda (T - s)), with c = sigma / lambda
// and om = 1 - exp(-lambda (T - t)):
//   \int_t^T kappa(sigma B(s,T)) ds = -alpha c tau / (eps + c) + alpha eps / (lambda (eps + c)) log(1 + c om / eps)
//   \int_t^T sigma e^{-lambda(T-s)} tilted(sigma B(s,T)) ds = alpha c om / (eps + c om)
double cumulant_tail_closed(const FactorParams& f, double tau) {
  const double alpha = f.measure.alpha;
  const double eps = f.measure.epsilon;
  const double c = f.sigma / f.lambda;
  const double om = -std::expm1(-f.lambda * tau);
  const double d = eps + c;
  return -alpha * c * tau / d + alpha * eps / (f.lambda * d) * std::log1p(c * om / eps);
}

double drift_tail_closed(const FactorParams& f, double tau) {
  const double c = f.sigma / f.lambda;
  const double om = -std::expm1(-f.lambda * tau);
  return f.measure.alpha * c * om / (f.measure.epsilon + c * om);
}

void check_window(double t1, double t2, double T) {
  if (!(t1 <= t2) || !(t2 <= T)) {
    std::ostringstream msg;
    msg << "time window requires t1 <= t2 <= T, got (" << t1 << ", " << t2 << ", " << T << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

void check_time_pair(double t, double T, double horizon) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  if (!(t <= T)) {
    std::ostringstream msg;
    msg << "maturity " << T << " precedes evaluation time " << t;
    throw std::invalid_argument(msg.str());
  }
  if (horizon > 0.0 && T > horizon * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "maturity " << T << " beyond model horizon " << horizon;
    throw std::invalid_argument(msg.str());
  }
}

double bond_B(const FactorParams& factor, double t, double T) {
  check_time_pair(t, T);
  return std::expm1(-factor.lambda * (T - t)) / factor.lambda;
}

double bond_B_dt(const FactorParams& factor, double t, double T) {
  check_time_pair(t, T);
  return std::exp(-factor.lambda * (T - t));
}

double bond_B_dT(const FactorParams& factor, double t, double T) {
  check_time_pair(t, T);
  return -std::exp(-factor.lambda * (T - t));
}

double cumulant_time_integral(const FactorParams& factor, double t1, double t2, double T, IntegralMethod method) {
  check_window(t1, t2, T);
  if (t1 == t2) return 0.0;
  if (method == IntegralMethod::ClosedForm) {
    return cumulant_tail_closed(factor, T - t1) - cumulant_tail_closed(factor, T - t2);
  }
  auto integrand = [&](double s) {
    const double b = factor.sigma * std::expm1(-factor.lambda * (T - s)) / factor.lambda;
    return factor.measure.levy_cumulant(b);
  };
  return integrate_adaptive(integrand, t1, t2, kTimeQuadrature).value;
}

double forward_drift_integral(const FactorParams& factor, double t1, double t2, double T, IntegralMethod method) {
  check_window(t1, t2, T);
  if (t1 == t2) return 0.0;
  if (method == IntegralMethod::ClosedForm) {
    return drift_tail_closed(factor, T - t1) - drift_tail_closed(factor, T - t2);
  }
  auto integrand = [&](double s) {
    const double decay = std::exp(-factor.lambda * (T - s));
    const double b = factor.sigma * std::expm1(-factor.lambda * (T - s)) / factor.lambda;
    return factor.sigma * decay * factor.measure.tilted_mean(b);
  };
  return integrate_adaptive(integrand, t1, t2, kTimeQuadrature).value;
}

double bond_A(const FactorParams& factor, const FloorFunction& floor, std::size_t factor_count, double t, double T,
              IntegralMethod method) {
  check_time_pair(t, T);
  if (t == T) return 0.0;
  return -floor.integrate(t, T) / static_cast<double>(factor_count) + cumulant_time_integral(factor, t, T, T, method);
}

double bond_A_dT(const FactorParams& factor, const FloorFunction& floor, std::size_t factor_count, double t, double T,
                 IntegralMethod method) {
  check_time_pair(t, T);
  return -floor.eval(T) / static_cast<double>(factor_count) - forward_drift_integral(factor, t, T, T, method);
}

std::vector<AffineCoefficients> affine_coefficients(const ModelSpec& spec, double t, double T, IntegralMethod method) {
  check_time_pair(t, T, spec.horizon);
  std::vector<AffineCoefficients> out;
  out.reserve(spec.factors.size());
  for (const auto& f : spec.factors) {
    out.push_back({bond_A(f, spec.floor, spec.factors.size(), t, T, method), bond_B(f, t, T)});
  }
  return out;
}

double log_bond_price(const ModelSpec& spec, double t, double T, std::span<const double> state, IntegralMethod method) {
  if (state.size() != spec.factors.size()) throw std::invalid_argument("state size does not match factor count");
  const auto coefficients = affine_coefficients(spec, t, T, method);
  double exponent = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) exponent += coefficients[k].a + coefficients[k].b * state[k];
  return exponent;
}

double bond_price(const ModelSpec& spec, double t, double T, std::span<const double> state, IntegralMethod method) {
  return std::exp(log_bond_price(spec, t, T, state, method));
}

double bond_price_bound(const ModelSpec& spec, double t, double T) {
  check_time_pair(t, T, spec.horizon);
  return std::exp(-spec.floor.integrate(t, T));
}

double forward_rate(const ModelSpec& spec, double t, double T, std::span<const double> state, IntegralMethod method) {
  check_time_pair(t, T, spec.horizon);
  if (state.size() != spec.factors.size()) throw std::invalid_argument("state size does not match factor count");
  double f = spec.floor.eval(T);
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& factor = spec.factors[k];
    f += forward_drift_integral(factor, t, T, T, method) + state[k] * std::exp(-factor.lambda * (T - t));
  }
  return f;
}

double yield_curve(const ModelSpec& spec, double t, double T, std::span<const double> state) {
  if (!(T > t)) throw std::invalid_argument("yield curve requires T > t");
  return std::log(bond_price(spec, t, T, state)) / (t - T);
}

double yield_curve_affine(const ModelSpec& spec, double t, double T, std::span<const double> state) {
  if (!(T > t)) throw std::invalid_argument("yield curve requires T > t");
  return log_bond_price(spec, t, T, state) / (t - T);
}

}  // namespace jumpcurve
