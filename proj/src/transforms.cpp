#include "jumpcurve/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace jumpcurve {

namespace {

constexpr Complex kI{0.0, 1.0};
const QuadratureSettings kExponentQuadrature{1e-14, 1e-12, 2000};

void check_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
}

}  // namespace

AffineExponent factor_exponent(const FactorParams& factor, double t, Complex u) {
  check_time(t);
  const Complex iu = kI * u;
  // Re(iu sigma w) is extremal at w = 1 or w = e^{-lambda t}; it is linear in w.
  const double re_at_one = (iu * factor.sigma).real();
  const double re_at_start = re_at_one * std::exp(-factor.lambda * t);
  if (!(std::max(re_at_one, re_at_start) < factor.measure.epsilon)) {
    std::ostringstream msg;
    msg << "factor exponent undefined: Re(iu sigma) = " << re_at_one << " >= epsilon = " << factor.measure.epsilon;
    throw DomainError(msg.str());
  }
  AffineExponent e;
  e.psi = iu * std::exp(-factor.lambda * t);
  if (t == 0.0 || u == Complex{}) return e;
  auto integrand = [&](double s) { return factor.measure.levy_cumulant(iu * factor.sigma * std::exp(-factor.lambda * (t - s))); };
  e.rho = integrate_adaptive(integrand, 0.0, t, kExponentQuadrature).value;
  return e;
}

double mgf_rho_closed_form(const FactorParams& factor, double t, double v) {
  check_time(t);
  const double eps = factor.measure.epsilon;
  const double vs = v * factor.sigma;
  if (!(vs < eps)) throw DomainError("moment generating function undefined: v >= epsilon / sigma");
  const double om = -std::expm1(-factor.lambda * t);
  return factor.measure.alpha / factor.lambda * std::log1p(vs * om / (eps - vs));
}

double mgf_bound(const ModelSpec& spec) {
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& f : spec.factors) bound = std::min(bound, f.measure.epsilon / f.sigma);
  return bound;
}

Complex short_rate_char_fn(const ModelSpec& spec, double t, double u) {
  check_time(t);
  if (spec.horizon > 0.0 && t > spec.horizon) throw std::invalid_argument("time beyond model horizon");
  Complex exponent = kI * u * spec.floor.eval(t);
  for (const auto& f : spec.factors) {
    const auto e = factor_exponent(f, t, Complex(u, 0.0));
    exponent += e.psi * f.x0 + e.rho;
  }
  return std::exp(exponent);
}

double short_rate_mgf(const ModelSpec& spec, double t, double v) {
  check_time(t);
  if (!(v < mgf_bound(spec))) {
    std::ostringstream msg;
    msg << "moment generating function undefined for v = " << v << " >= " << mgf_bound(spec);
    throw DomainError(msg.str());
  }
  double exponent = v * spec.floor.eval(t);
  for (const auto& f : spec.factors) exponent += mgf_rho_closed_form(f, t, v) + v * std::exp(-f.lambda * t) * f.x0;
  return std::exp(exponent);
}

Complex levy_char_fn(const GammaJumpMeasure& measure, double t, double u) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const Complex iu = kI * u;
  return std::exp(iu * measure.alpha * t / (measure.epsilon - iu));
}

double levy_atom(const GammaJumpMeasure& measure, double t) { return std::exp(-measure.alpha * t); }

double levy_density(const GammaJumpMeasure& measure, double t, double x, const DensitySettings& settings) {
  if (!(t > 0.0)) throw std::invalid_argument("levy_density requires t > 0");
  if (!(x > 0.0)) throw std::invalid_argument("levy_density requires x > 0");

  // Phi(-u) = e^{-alpha t} exp(w) with w = c / (eps + iu), c = alpha t eps. The
  // atom and the first two terms of exp(w) - 1 invert in closed form
  // (1 / (eps + iu)^m <-> x^{m-1} e^{-eps x} / (m-1)!); the O(|u|^-3)
  // remainder is inverted numerically over the real line.
  const double eps = measure.epsilon;
  const double c = measure.alpha * t * eps;
  const double atom = levy_atom(measure, t);

  auto remainder = [&](double u) -> Complex {
    const Complex w = c / Complex(eps, u);
    if (std::abs(w) < 0.1) {
      Complex term = w * w * w / 6.0;
      Complex sum = term;
      for (int m = 4; m < 30; ++m) {
        term *= w / static_cast<double>(m);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      }
      return sum;
    }
    return std::exp(w) - 1.0 - w - 0.5 * w * w;
  };
  auto integrand = [&](double u) { return (remainder(u) * std::exp(Complex(0.0, u * x))).real(); };

  QuadratureSettings quad{settings.abs_tol, 1e-10, 20000};
  double upper = std::max(50.0, 10.0 * eps);
  CompensatedSum<double> total;
  total.add(integrate_adaptive(integrand, 0.0, upper, quad).value);
  // Past the last band |remainder| decays monotonically, so integration by
  // parts bounds the tail by 2 |remainder(upper)| / x.
  auto tail = [&](double u) { return atom * std::abs(remainder(u)) * std::min(u, 2.0 / x) / std::numbers::pi; };
  while (tail(upper) > settings.truncation_tol && upper < settings.max_frequency) {
    total.add(integrate_adaptive(integrand, upper, 2.0 * upper, quad).value);
    upper *= 2.0;
  }

  const double series = c * std::exp(-eps * x) + 0.5 * c * c * x * std::exp(-eps * x);
  return atom * (series + total.value() / std::numbers::pi);
}

}  // namespace jumpcurve
