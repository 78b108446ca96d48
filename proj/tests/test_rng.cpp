#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "jumpcurve/rng.hpp"

using namespace jumpcurve;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and disjoint") {
  PhiloxStream a(42, 7, 1);
  PhiloxStream b(42, 7, 1);
  PhiloxStream other_path(42, 8, 1);
  PhiloxStream other_factor(42, 7, 2);
  PhiloxStream other_seed(43, 7, 1);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u != other_path.uniform());
    CHECK(u != other_factor.uniform());
    CHECK(u != other_seed.uniform());
  }
  CHECK(a.draws() == 1000);
}

TEST_CASE("uniform moments and exponential mean") {
  PhiloxStream s(1, 0, 0);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    sum += u;
    sq += u * u;
    e += s.exponential(4.0);
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));
  CHECK(std::abs(e / n - 0.25) < 4.0 * 0.25 / std::sqrt(n));
}
