#include <doctest.h>

#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jumpcurve/options.hpp"
#include "support.hpp"

using namespace jumpcurve;
using namespace jumpcurve::testing;

namespace {

OptionSpec baseline_option(double strike = 0.97) { return OptionSpec{strike, 0.5, 1.0, 1.5}; }

}  // namespace

TEST_CASE("option spec checks") {
  CHECK_NOTHROW(check_option(baseline_option()));
  CHECK_THROWS_AS(check_option(OptionSpec{0.0, 0.5, 1.0, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(check_option(OptionSpec{0.9, 1.5, 1.0, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(check_option(OptionSpec{0.9, 0.5, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("eta") {
  const auto f = factor(1.0, 1.0, 0.0, 2.0, 10.0);
  CHECK(eta(f, 1.0, 3.0, OptionSpec{0.9, 1.0, 1.0, 1.5}) == Complex{});
  const Complex g = eta(f, 0.0, 0.0, baseline_option());
  CHECK(std::abs(g - Complex(1.5 * bond_B(f, 0.0, 1.0) - 0.5 * bond_B(f, 0.0, 0.5), 0.0)) < 1e-15);
  const OptionSpec same{0.9, 1.0, 1.0, 2.0};
  for (double y : {-5.0, 0.0, 17.0}) {
    CHECK(std::abs(eta(f, 0.3, y, same) - Complex(bond_B(f, 0.3, 1.0), 0.0)) < 1e-15);
    for (double s : {0.0, 0.2, 0.5}) CHECK(eta(f, s, y, baseline_option()).real() <= 0.0);
  }
}

TEST_CASE("psi_bar: closed form, Gauss-Legendre and an independent oracle agree") {
  const auto spec = three_factor();
  const OptionSpec option{0.9, 1.5, 4.0, 1.5};
  for (const auto& f : spec.factors) {
    for (double y : {0.0, 0.3, 7.0, 150.0, 5000.0}) {
      for (double t : {0.0, 0.9}) {
        const Complex q = psi_bar(f, t, y, option);
        const Complex c = psi_bar(f, t, y, option, IntegralMethod::ClosedForm);
        CHECK(std::abs(q - c) < 1e-10 * std::max(1.0, std::abs(c)));
        const auto integrand = [&](double s) { return f.measure.levy_cumulant(eta(f, s, y, option)); };
        const double re = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double s) { return integrand(s).real(); }, t, 1.5, 20, 1e-14);
        const double im = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double s) { return integrand(s).imag(); }, t, 1.5, 20, 1e-14);
        CHECK(std::abs(q - Complex(re, im)) < 1e-10 * std::max(1.0, std::abs(q)));
      }
    }
    CHECK(psi_bar(f, 1.5, 2.0, option) == Complex{});
  }
  CHECK(std::abs(psi_bar(factor(1.0, 1.0, 0.0, 1e-13, 10.0), 0.0, 3.0, option)) < 1e-12);
}

TEST_CASE("theta and qhat") {
  const auto det = ModelSpec{{factor(1.0, 1.0, 0.02, 1e-14, 10.0)}, FloorFunction::constant(0.03), 5.0};
  const OptionSpec option{0.9, 1.0, 2.0, 1.5};
  const double y = 2.5;
  const Complex z(1.5, y);
  const Complex expected = (z - 1.0) * (0.03 - 0.02 * bond_B(det.factors[0], 0.0, 1.0));
  CHECK(std::abs(theta(det, y, option) - expected) < 1e-12);

  const auto spec = baseline();
  const auto& f = spec.factors[0];
  const double direct = 0.5 * (0.02 - 0.01 * bond_B(f, 0.0, 1.0)) - 1.5 * cumulant_time_integral(f, 0.0, 1.0, 2.0);
  const Complex th = theta(spec, 0.0, option);
  CHECK(th.imag() == 0.0);
  CHECK(th.real() == doctest::Approx(direct).epsilon(1e-14));

  const OptionSpec unit{0.8, 1.0, 2.0, 2.0};
  CHECK(std::abs(qhat(0.0, unit, 0.8) - Complex(0.8 / (4.0 * std::numbers::pi), 0.0)) < 1e-15);
  const double P = 0.9;
  const Complex q0 = qhat(0.0, option, P);
  CHECK(std::abs(q0 - Complex(std::pow(P, 1.5) / (2.0 * std::numbers::pi * 1.5 * 0.5 * std::pow(0.9, 0.5)), 0.0)) < 1e-15);
  for (double yy : {0.5, 20.0}) CHECK(std::abs(qhat(-yy, option, P) - std::conj(qhat(yy, option, P))) < 1e-15);
}

TEST_CASE("Fourier price: bounds, jump-free limit and dampening invariance") {
  const auto spec = baseline();
  const auto option = baseline_option(0.8);
  const double P0T = bond_price(spec, 0.0, 1.0, initial_state(spec));
  const auto result = fourier_call(spec, option);
  CHECK(result.price > 0.0);
  CHECK(result.price <= P0T);
  CHECK(std::abs(result.imaginary_residue) < 1e-9);

  for (double a : {1.25, 2.0, 3.0}) {
    OptionSpec other = option;
    other.dampening = a;
    CHECK(std::abs(fourier_call_price(spec, other) - result.price) < 1e-7);
  }
  FourierSettings closed;
  closed.psi_method = IntegralMethod::ClosedForm;
  CHECK(std::abs(fourier_call_price(spec, option, closed) - result.price) < 1e-9);

  // Dominated payoff: strike at the bond bound.
  const auto coeff = affine_coefficients(spec, 0.5, 1.0);
  const double bound = std::exp(coeff[0].a);
  CHECK(fourier_call_price(spec, baseline_option(bound)) <= 1e-9);

  // Jump-free model: deterministic payoff.
  const ModelSpec det{{factor(1.0, 1.0, 0.02, 1e-13, 10.0)}, FloorFunction::constant(0.03), 5.0};
  const OptionSpec dopt{0.9, 1.0, 2.0, 1.5};
  const double discount = bond_price(det, 0.0, 1.0, initial_state(det));
  const double p_tau = bond_price(det, 1.0, 2.0, std::vector<double>{0.02 * std::exp(-1.0)});
  CHECK(std::abs(fourier_call_price(det, dopt) - discount * std::max(p_tau - 0.9, 0.0)) < 1e-8);
}

TEST_CASE("Fourier price is monotone and convex in the strike") {
  const auto spec = two_factor();
  std::vector<double> prices;
  for (double K = 0.80; K < 0.98; K += 0.02) prices.push_back(fourier_call_price(spec, OptionSpec{K, 1.0, 2.0, 1.5}));
  for (std::size_t i = 1; i < prices.size(); ++i) CHECK(prices[i] <= prices[i - 1] + 1e-9);
  for (std::size_t i = 1; i + 1 < prices.size(); ++i) CHECK(prices[i - 1] - 2 * prices[i] + prices[i + 1] >= -1e-8);
}

TEST_CASE("Fourier price matches Monte Carlo") {
  const auto spec = baseline();
  const double P0T = bond_price(spec, 0.0, 1.0, initial_state(spec));
  const double P0tau = bond_price(spec, 0.0, 0.5, initial_state(spec));
  const auto option = baseline_option(0.95 * P0T / P0tau);
  const auto mc = mc_option_price(spec, option, 200000, 42);
  CHECK(std::abs(mc.value - fourier_call_price(spec, option)) < 3.0 * mc.standard_error);

  // Zero strike reduces to the bond.
  const std::vector<double> strikes{0.0};
  const auto zero = mc_option_prices(spec, option, strikes, 100000, 42);
  const auto bond = mc_bond_price(spec, 1.0, 100000, 43);
  CHECK(std::abs(zero[0].value - bond.value) <
        3.0 * std::hypot(zero[0].standard_error, bond.standard_error));

  const auto coeff = affine_coefficients(spec, 0.5, 1.0);
  const auto out = mc_option_price(spec, baseline_option(std::exp(coeff[0].a)), 1000, 1);
  CHECK(out.value == 0.0);
}

TEST_CASE("conditional Fourier price") {
  const auto spec = baseline();
  const auto option = baseline_option(0.85);
  const std::vector<JumpRecord> none(1);
  const auto initial = path_state(spec, none, 0.0);
  CHECK(fourier_call_price_at(spec, option, initial, 0.0) == fourier_call_price(spec, option));

  // At expiry the conditional price is the payoff itself.
  for (std::uint64_t p = 0; p < 5; ++p) {
    const auto jumps = simulate_factor_jumps(spec.factors, 0.5, 42, p);
    const auto state = path_state(spec, jumps, 0.5);
    const double P = bond_price(spec, 0.5, 1.0, factor_state(spec, jumps, 0.5));
    const double payoff = std::max(P - 0.85, 0.0);
    const double price = fourier_call_price_at(spec, option, state, 0.5);
    CHECK(std::abs(price - payoff) < 1e-6 * std::max(1.0, payoff));
  }

  // Tower property at an intermediate time.
  FourierSettings closed;
  closed.psi_method = IntegralMethod::ClosedForm;
  const std::size_t paths = 5000;
  const auto est = monte_carlo(paths, [&](std::uint64_t p) {
    const auto jumps = simulate_factor_jumps(spec.factors, 0.4, 42, p);
    const auto state = path_state(spec, jumps, 0.4);
    return std::exp(-state.integrated_rate) * fourier_call_price_at(spec, option, state, 0.4, closed);
  });
  CHECK(std::abs(est.value - fourier_call_price(spec, option)) < 3.0 * est.standard_error);
}
