#include "jumpcurve/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace jumpcurve {

GaussLegendre::GaussLegendre(std::size_t order) : nodes_(order), weights_(order) {
  if (order == 0) throw std::invalid_argument("Gauss-Legendre order must be positive");
  const std::size_t half = (order + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(order) + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      derivative = static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    derivative = order == 1 ? 1.0 : static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0.0;
}

const GaussLegendre& GaussLegendre::of_order(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendre>(order);
  return *slot;
}

}  // namespace jumpcurve
