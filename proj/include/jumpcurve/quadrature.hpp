#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace jumpcurve {

using Complex = std::complex<double>;

/// Neumaier-compensated running sum. Order of additions still matters at the
/// last bit, so reductions that must be reproducible add in a fixed order.
template <typename T = double>
class CompensatedSum {
public:
  void add(T x) {
    T t = sum_ + x;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
      } else {
        comp_ += (x - t) + sum_;
      }
    } else {
      comp_ += compensate(sum_, x, t);
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

private:
  static T compensate(T s, T x, T t) {
    auto part = [](double a, double b, double c) {
      return std::abs(a) >= std::abs(b) ? (a - c) + b : (b - c) + a;
    };
    return T(part(s.real(), x.real(), t.real()), part(s.imag(), x.imag(), t.imag()));
  }
  T sum_{};
  T comp_{};
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum<double> acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

struct QuadratureSettings {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 4000;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// 7-point Gauss weights on the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex& z) { return std::max(std::abs(z.real()), std::abs(z.imag())); }

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename T, typename F>
Segment<T> kronrod15(F&& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(centre);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T pair = f(centre - dx) + f(centre + dx);
    kronrod += pair * kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * kGaussWeights[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of a real- or
/// complex-valued integrand over [a, b]. The interval with the largest error
/// estimate is bisected until the summed estimate meets the tolerance.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSettings& settings = {}) {
  using T = std::decay_t<decltype(f(a))>;
  QuadratureResult<T> result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::priority_queue<detail::Segment<T>> work;
  auto first = detail::kronrod15<T>(f, a, b);
  T total = first.value;
  double total_error = first.error;
  work.push(first);

  auto tolerance = [&] { return std::max(settings.abs_tol, settings.rel_tol * detail::magnitude(total)); };

  while (total_error > tolerance() && work.size() < settings.max_intervals) {
    auto worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      work.push(worst);
      break;
    }
    auto left = detail::kronrod15<T>(f, worst.a, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.b);
    total += (left.value + right.value) - worst.value;
    total_error += (left.error + right.error) - worst.error;
    work.push(left);
    work.push(right);
  }

  // Re-sum from the leaves so the running updates do not accumulate drift.
  CompensatedSum<T> value;
  double error = 0.0;
  result.intervals = work.size();
  while (!work.empty()) {
    value.add(work.top().value);
    error += work.top().error;
    work.pop();
  }
  result.value = value.value() * sign;
  result.error = error;
  result.converged = error <= std::max(settings.abs_tol, settings.rel_tol * detail::magnitude(result.value));
  return result;
}

/// Fixed-order Gauss-Legendre rule on [-1, 1]; nodes from Newton iteration on
/// the Legendre recurrence.
class GaussLegendre {
public:
  explicit GaussLegendre(std::size_t order);

  std::size_t order() const { return nodes_.size(); }

  template <typename F>
  auto integrate(F&& f, double a, double b) const {
    using T = std::decay_t<decltype(f(a))>;
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(centre + half * nodes_[i]);
    return sum * half;
  }

  static const GaussLegendre& of_order(std::size_t order);

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace jumpcurve
