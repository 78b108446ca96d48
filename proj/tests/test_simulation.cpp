#include <doctest.h>

#include <cstdlib>

#include "jumpcurve/simulation.hpp"
#include "support.hpp"

using namespace jumpcurve;
using namespace jumpcurve::testing;

TEST_CASE("jump records: no-jump limit and determinism") {
  PhiloxStream rng(42, 0, 0);
  CHECK(simulate_jumps(GammaJumpMeasure{1e-12, 10.0}, 1.0, rng).size() == 0);

  const auto spec = two_factor();
  const auto a = simulate_factor_jumps(spec.factors, 5.0, 9, 123);
  const auto b = simulate_factor_jumps(spec.factors, 5.0, 9, 123);
  const auto longer = simulate_factor_jumps(spec.factors, 8.0, 9, 123);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].times == b[k].times);
    CHECK(a[k].sizes == b[k].sizes);
    REQUIRE(longer[k].size() >= a[k].size());
    for (std::size_t j = 0; j < a[k].size(); ++j) {
      CHECK(longer[k].times[j] == a[k].times[j]);
      CHECK(longer[k].sizes[j] == a[k].sizes[j]);
    }
    for (std::size_t j = 1; j < a[k].size(); ++j) CHECK(a[k].times[j] > a[k].times[j - 1]);
    for (double z : a[k].sizes) CHECK(z > 0.0);
  }
  CHECK_THROWS_AS(simulate_jumps(GammaJumpMeasure{1.0, 1.0}, 0.0, rng), std::invalid_argument);
}

TEST_CASE("jump counts and sizes follow Poisson and exponential laws") {
  const GammaJumpMeasure m{2.0, 10.0};
  const std::size_t n = 100000;
  double count = 0.0;
  double count_sq = 0.0;
  double size_sum = 0.0;
  double size_n = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    PhiloxStream rng(42, p, 0);
    const auto rec = simulate_jumps(m, 1.0, rng);
    const auto c = static_cast<double>(rec.size());
    count += c;
    count_sq += c * c;
    for (double z : rec.sizes) size_sum += z;
    size_n += c;
  }
  const double mean = count / n;
  const double var = count_sq / n - mean * mean;
  CHECK(std::abs(mean - 2.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(var - 2.0) < 0.05);
  CHECK(std::abs(size_sum / size_n - 0.1) < 3.0 * 0.1 / std::sqrt(size_n));
}

TEST_CASE("factor evolution is exact") {
  const auto f = factor(1.5, 0.8, 0.02, 2.0, 10.0);
  JumpRecord none;
  for (double t : {0.0, 0.3, 2.0}) CHECK(factor_value(f, none, t) == doctest::Approx(0.02 * std::exp(-1.5 * t)).epsilon(1e-15));

  JumpRecord one{{0.5}, {0.25}};
  const double before = factor_value_before(f, one, 0.5);
  const double at = factor_value(f, one, 0.5);
  CHECK(at - before == doctest::Approx(0.8 * 0.25).epsilon(1e-14));
  for (double dt : {0.1, 1.0}) {
    CHECK(factor_value(f, one, 0.5 + dt) == doctest::Approx(at * std::exp(-1.5 * dt)).epsilon(1e-14));
  }

  const std::size_t paths = 100000;
  const auto est = monte_carlo(paths, [&](std::uint64_t p) {
    const auto jumps = simulate_factor_jumps(std::span(&f, 1), 1.0, 42, p);
    return factor_value(f, jumps[0], 1.0);
  });
  const double expected = 0.02 * std::exp(-1.5) + 0.8 * 2.0 * (1.0 - std::exp(-1.5)) / (1.5 * 10.0);
  CHECK(std::abs(est.value - expected) < 3.0 * est.standard_error);
}

TEST_CASE("simulated paths respect the floor and the exact integrated rate") {
  const auto spec = three_factor();
  for (std::uint64_t p = 0; p < 20; ++p) {
    const auto path = simulate_path(spec, 42, p);
    CHECK(path.integrated_rate.front() == 0.0);
    for (std::size_t i = 0; i < path.grid.size(); ++i) {
      CHECK(path.short_rate[i] - spec.floor.eval(path.grid[i]) >= 0.0);
    }
    for (const auto& rec : path.jumps) {
      for (double u : rec.times) CHECK(std::binary_search(path.grid.begin(), path.grid.end(), u));
    }
  }

  const auto det = deterministic(0.03);
  const ModelSpec det_x{{factor(0.5, 1.0, 0.04, 1e-12, 10.0)}, FloorFunction::constant(0.03), 10.0};
  const std::vector<JumpRecord> none(1);
  CHECK(integrated_rate(det, none, 0.0) == 0.0);
  CHECK(integrated_rate(det_x, none, 2.0) ==
        doctest::Approx(0.06 - 0.04 * std::expm1(-1.0) / 0.5).epsilon(1e-14));
}

TEST_CASE("integrated rate agrees with trapezoidal integration of the short rate") {
  const auto spec = three_factor();
  for (std::uint64_t p = 0; p < 5; ++p) {
    const auto jumps = simulate_factor_jumps(spec.factors, 3.0, 7, p);
    // Split at jump epochs so every piece is smooth, then use 10^4 trapezoid points overall.
    std::vector<double> cuts{0.0};
    for (const auto& rec : jumps) cuts.insert(cuts.end(), rec.times.begin(), rec.times.end());
    cuts.push_back(3.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      if (b <= a) continue;
      const auto steps = std::max<std::size_t>(4, static_cast<std::size_t>(10000.0 * (b - a) / 3.0));
      const double h = (b - a) / static_cast<double>(steps);
      auto rate = [&](double s, bool left_limit) {
        double r = spec.floor.eval(s);
        for (std::size_t k = 0; k < jumps.size(); ++k) {
          r += left_limit ? factor_value_before(spec.factors[k], jumps[k], s) : factor_value(spec.factors[k], jumps[k], s);
        }
        return r;
      };
      double piece = 0.5 * (rate(a, false) + rate(b, true));
      for (std::size_t j = 1; j < steps; ++j) piece += rate(a + h * static_cast<double>(j), false);
      total += piece * h;
    }
    CHECK(std::abs(total - integrated_rate(spec, jumps, 3.0)) < 1e-6);
  }
}

TEST_CASE("pathwise bond and forward identities") {
  const auto spec = two_factor();
  for (std::uint64_t p = 0; p < 200; ++p) {
    const auto path = simulate_path(spec, 11, p, 12);
    for (auto [t, T] : {std::pair{0.0, 1.0}, std::pair{0.5, 2.0}, std::pair{3.0, 3.0}, std::pair{4.0, 9.0}}) {
      const auto x = factor_state(spec, path.jumps, t);
      CHECK(rel_err(bond_path(spec, path, t, T), bond_price(spec, t, T, x)) < 1e-10);
      CHECK(std::abs(hjm_forward_path(spec, path, t, T) - forward_rate(spec, t, T, x)) < 1e-9);
      if (t < T) {
        const double R = std::log(bond_path(spec, path, t, T)) / (t - T);
        CHECK(std::abs(R - yield_curve(spec, t, T, x)) < 1e-10);
      }
    }
    CHECK(std::abs(hjm_forward_path(spec, path, 2.0, 2.0) - short_rate(spec, path.jumps, 2.0)) < 1e-9);
  }
  const auto path = simulate_path(spec, 11, 0, 12);
  CHECK(bond_path(spec, path, 0.0, 4.0) == bond_price(spec, 0.0, 4.0, initial_state(spec)));
  CHECK_THROWS_AS(bond_path(spec, path, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrated_rate(spec, path, 11.0), std::invalid_argument);
}

TEST_CASE("Monte Carlo bond prices") {
  const auto det = deterministic(0.03);
  const auto d = mc_bond_price(det, 2.0, 1000, 1);
  CHECK(std::abs(d.value - std::exp(-0.06)) < 1e-12);
  CHECK(d.standard_error < 1e-15);
  CHECK_THROWS_AS(mc_bond_price(det, 2.0, 99, 1), std::invalid_argument);

  const auto spec = baseline();
  const auto est = mc_bond_price(spec, 1.0, 100000, 42);
  CHECK(std::abs(est.value - bond_price(spec, 0.0, 1.0, initial_state(spec))) < 3.0 * est.standard_error);

  const auto half = mc_bond_price(spec, 1.0, 50000, 42);
  CHECK(est.standard_error / half.standard_error == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("estimates do not depend on the worker count") {
  const auto spec = two_factor();
  setenv("JUMPCURVE_THREADS", "1", 1);
  const auto one = mc_bond_price(spec, 2.0, 5000, 3);
  setenv("JUMPCURVE_THREADS", "4", 1);
  const auto four = mc_bond_price(spec, 2.0, 5000, 3);
  unsetenv("JUMPCURVE_THREADS");
  CHECK(one.value == four.value);
  CHECK(one.standard_error == four.standard_error);
}

TEST_CASE("martingale property of the discounted bond") {
  const auto spec = baseline();
  const double T = 2.0;
  const double P0 = bond_price(spec, 0.0, T, initial_state(spec));
  for (double t : {0.5, 1.0, 1.5}) {
    const auto est = mc_discounted_bond(spec, t, T, 100000, 42);
    CHECK(std::abs(est.value - P0) < 3.0 * est.standard_error);
  }
}

TEST_CASE("empirical moments of the short rate") {
  const auto spec = baseline();
  const std::size_t n = 100000;
  std::vector<double> r(n);
  parallel_for(n, [&](std::size_t p) { r[p] = short_rate(spec, simulate_factor_jumps(spec.factors, 1.0, 5, p), 1.0); });
  const auto mean = summarize(r);
  const auto theory = unconditional_moments(spec, 1.0);
  CHECK(std::abs(mean.value - theory.mean) < 3.0 * mean.standard_error);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : r) {
    m2 += (v - mean.value) * (v - mean.value);
    m4 += std::pow(v - mean.value, 4);
  }
  const double var = m2 / (n - 1);
  const double se = std::sqrt((m4 / n - (m2 / n) * (m2 / n)) / n);
  CHECK(std::abs(var - theory.variance) < 3.0 * se);
}
