#include "jumpcurve/options.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace jumpcurve {

namespace {

constexpr double kRichardsonTolerance = 1e-10;

Complex dampened(double y, const OptionSpec& option) { return Complex(option.dampening, y); }

}  // namespace

void check_option(const OptionSpec& option) {
  if (!(option.strike > 0.0)) throw std::invalid_argument("option strike must be positive");
  if (!(option.option_maturity > 0.0)) throw std::invalid_argument("option maturity must be positive");
  if (!(option.option_maturity <= option.bond_maturity)) {
    throw std::invalid_argument("option maturity must not exceed bond maturity");
  }
  if (!(option.dampening > 1.0)) throw std::invalid_argument("dampening parameter must exceed 1");
}

Complex eta(const FactorParams& factor, double s, double y, const OptionSpec& option) {
  check_time_pair(s, option.option_maturity);
  const Complex z = dampened(y, option);
  const double b_bond = bond_B(factor, s, option.bond_maturity);
  const double b_option = bond_B(factor, s, option.option_maturity);
  return factor.sigma * (z * b_bond - (z - 1.0) * b_option);
}

Complex psi_bar(const FactorParams& factor, double t, double y, const OptionSpec& option, IntegralMethod method) {
  const double tau = option.option_maturity;
  check_time_pair(t, tau);
  if (t == tau) return {};

  if (method == IntegralMethod::ClosedForm) {
    // gamma(s) = c (beta w - 1) with w = e^{-lambda (tau - s)}, c = sigma / lambda.
    // Re(D - c beta w) >= epsilon along the path, so principal logs are continuous.
    const double alpha = factor.measure.alpha;
    const double eps = factor.measure.epsilon;
    const double c = factor.sigma / factor.lambda;
    const double d = eps + c;
    const Complex z = dampened(y, option);
    const Complex beta = z * std::exp(-factor.lambda * (option.bond_maturity - tau)) - (z - 1.0);
    const double w_start = std::exp(-factor.lambda * (tau - t));
    const Complex log_ratio = std::log(d - c * beta * w_start) - std::log(d - c * beta);
    return -alpha * c * (tau - t) / d + alpha * eps / (factor.lambda * d) * log_ratio;
  }

  auto integrand = [&](double s) { return factor.measure.levy_cumulant(eta(factor, s, y, option)); };
  const auto& coarse = GaussLegendre::of_order(64);
  const auto& fine = GaussLegendre::of_order(128);
  const Complex low = coarse.integrate(integrand, t, tau);
  const Complex high = fine.integrate(integrand, t, tau);
  if (std::abs(high - low) <= kRichardsonTolerance * std::max(1.0, std::abs(high))) return high;
  return integrate_adaptive(integrand, t, tau, {1e-13, 1e-12, 4000}).value;
}

Complex theta(const ModelSpec& spec, double y, const OptionSpec& option) {
  const double tau = option.option_maturity;
  const double T = option.bond_maturity;
  check_time_pair(tau, T, spec.horizon);
  const Complex z = dampened(y, option);
  double deterministic = spec.floor.integrate(0.0, tau);
  double compensator = 0.0;
  for (const auto& f : spec.factors) {
    deterministic -= f.x0 * bond_B(f, 0.0, tau);
    compensator += cumulant_time_integral(f, 0.0, tau, T);
  }
  return (z - 1.0) * deterministic - z * compensator;
}

Complex qhat(double y, const OptionSpec& option, double bond_price_0T) {
  if (!(bond_price_0T > 0.0)) throw std::invalid_argument("qhat requires a positive bond price");
  if (!(option.strike > 0.0)) throw std::invalid_argument("qhat requires a positive strike");
  if (!(option.dampening > 1.0)) throw std::invalid_argument("qhat requires dampening > 1");
  const Complex z = dampened(y, option);
  const Complex log_numerator = z * std::log(bond_price_0T) + (1.0 - z) * std::log(option.strike);
  return std::exp(log_numerator) / (2.0 * std::numbers::pi * z * (z - 1.0));
}

PathState path_state(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t) {
  PathState state;
  state.integrated_rate = integrated_rate(spec, jumps, t);
  state.jumps.reserve(jumps.size());
  for (const auto& record : jumps) {
    const std::size_t count = record.count_until(t);
    JumpRecord head;
    head.times.assign(record.times.begin(), record.times.begin() + static_cast<std::ptrdiff_t>(count));
    head.sizes.assign(record.sizes.begin(), record.sizes.begin() + static_cast<std::ptrdiff_t>(count));
    state.jumps.push_back(std::move(head));
  }
  return state;
}

namespace {

FourierResult fourier_integral(const ModelSpec& spec, const OptionSpec& option, const PathState* state, double t,
                               const FourierSettings& settings) {
  require_valid(spec);
  check_option(option);
  check_time_pair(t, option.option_maturity);
  check_time_pair(option.option_maturity, option.bond_maturity, spec.horizon);
  if (state && state->jumps.size() != spec.factors.size()) throw std::invalid_argument("path state does not match factor count");

  const double p0T = bond_price(spec, 0.0, option.bond_maturity, initial_state(spec));
  const double carried = state ? state->integrated_rate : 0.0;

  // theta and the accumulated jump term are affine in z = a + iy, so both are
  // evaluated once at y = 0 and y = 1 and interpolated.
  auto affine_part = [&](double y) {
    Complex value = carried + theta(spec, y, option);
    if (state) {
      for (std::size_t k = 0; k < spec.factors.size(); ++k) {
        const auto& record = state->jumps[k];
        for (std::size_t j = 0; j < record.size(); ++j) {
          if (record.times[j] <= t) value += eta(spec.factors[k], record.times[j], y, option) * record.sizes[j];
        }
      }
    }
    return value;
  };
  const Complex intercept = affine_part(0.0);
  const Complex slope = affine_part(1.0) - intercept;

  auto integrand = [&](double y) {
    Complex exponent = intercept + y * slope;
    for (const auto& f : spec.factors) exponent += psi_bar(f, t, y, option, settings.psi_method);
    return qhat(y, option, p0T) * std::exp(exponent);
  };

  // The tolerance is a budget for the whole half line: half for the first
  // band, then halved again for each doubling band.
  QuadratureSettings quad{0.5 * settings.quadrature_tolerance, 1e-12, 200000};
  FourierResult result;
  CompensatedSum<Complex> half_line;
  double upper = settings.initial_truncation;
  auto first = integrate_adaptive(integrand, 0.0, upper, quad);
  half_line.add(first.value);
  result.error_estimate = first.error;

  // Hermitian check on the first band: the mirrored integral must be its conjugate.
  auto mirrored = integrate_adaptive([&](double y) { return integrand(-y); }, 0.0, upper, quad);
  result.imaginary_residue = (first.value + mirrored.value).imag();

  for (;;) {
    if (upper >= settings.max_truncation) {
      std::ostringstream msg;
      msg << "Fourier integral did not converge: truncation " << upper << " reached, last band above tolerance "
          << settings.tail_tolerance;
      throw std::runtime_error(msg.str());
    }
    quad.abs_tol *= 0.5;
    auto band = integrate_adaptive(integrand, upper, 2.0 * upper, quad);
    half_line.add(band.value);
    result.error_estimate += band.error;
    upper *= 2.0;
    if (std::abs(band.value) < settings.tail_tolerance) break;
  }

  result.truncation = upper;
  result.price = 2.0 * half_line.value().real();
  if (std::abs(result.imaginary_residue) > 1e-9) {
    std::ostringstream msg;
    msg << "Fourier integrand lost Hermitian symmetry: imaginary residue " << result.imaginary_residue;
    throw std::runtime_error(msg.str());
  }
  if (result.price < -1e-9) {
    std::ostringstream msg;
    msg << "Fourier price " << result.price << " is negative beyond numerical slack";
    throw std::runtime_error(msg.str());
  }
  result.price = std::max(result.price, 0.0);
  return result;
}

}  // namespace

FourierResult fourier_call(const ModelSpec& spec, const OptionSpec& option, const FourierSettings& settings) {
  return fourier_integral(spec, option, nullptr, 0.0, settings);
}

double fourier_call_price(const ModelSpec& spec, const OptionSpec& option, const FourierSettings& settings) {
  return fourier_call(spec, option, settings).price;
}

FourierResult fourier_call_at(const ModelSpec& spec, const OptionSpec& option, const PathState& state, double t,
                              const FourierSettings& settings) {
  return fourier_integral(spec, option, &state, t, settings);
}

double fourier_call_price_at(const ModelSpec& spec, const OptionSpec& option, const PathState& state, double t,
                             const FourierSettings& settings) {
  return fourier_call_at(spec, option, state, t, settings).price;
}

std::vector<Estimate> mc_option_prices(const ModelSpec& spec, const OptionSpec& option, std::span<const double> strikes,
                                       std::size_t paths, std::uint64_t seed) {
  require_valid(spec);
  check_option(option);
  check_time_pair(option.option_maturity, option.bond_maturity, spec.horizon);
  if (paths < 100) throw std::invalid_argument("mc_option_price needs at least 100 paths");
  for (double k : strikes) {
    if (!(k >= 0.0)) throw std::invalid_argument("strikes must be non-negative");
  }

  const double tau = option.option_maturity;
  const auto coefficients = affine_coefficients(spec, tau, option.bond_maturity);
  std::vector<double> discount(paths);
  std::vector<double> bond(paths);
  parallel_for(paths, [&](std::size_t i) {
    const auto jumps = simulate_factor_jumps(spec.factors, tau, seed, i);
    double log_bond = 0.0;
    for (std::size_t k = 0; k < spec.factors.size(); ++k) {
      log_bond += coefficients[k].a + coefficients[k].b * factor_value(spec.factors[k], jumps[k], tau);
    }
    discount[i] = std::exp(-integrated_rate(spec, jumps, tau));
    bond[i] = std::exp(log_bond);
  });

  std::vector<Estimate> out;
  std::vector<double> payoff(paths);
  for (double k : strikes) {
    for (std::size_t i = 0; i < paths; ++i) payoff[i] = discount[i] * std::max(bond[i] - k, 0.0);
    out.push_back(summarize(payoff));
  }
  return out;
}

Estimate mc_option_price(const ModelSpec& spec, const OptionSpec& option, std::size_t paths, std::uint64_t seed) {
  const double strike = option.strike;
  return mc_option_prices(spec, option, std::span<const double>(&strike, 1), paths, seed).front();
}

}  // namespace jumpcurve
