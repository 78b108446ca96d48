#pragma once

#include <cmath>
#include <vector>

#include "jumpcurve/model.hpp"

namespace jumpcurve::testing {

inline FactorParams factor(double lambda, double sigma, double x0, double alpha, double epsilon) {
  return FactorParams{lambda, sigma, x0, GammaJumpMeasure{alpha, epsilon}};
}

/// One factor: lambda = 1, sigma = 1, alpha = 2, epsilon = 10, x = 0.01, mu = 0.02.
inline ModelSpec baseline(double horizon = 10.0) {
  return ModelSpec{{factor(1.0, 1.0, 0.01, 2.0, 10.0)}, FloorFunction::constant(0.02), horizon};
}

inline ModelSpec two_factor(double horizon = 10.0) {
  return ModelSpec{{factor(1.0, 1.0, 0.01, 2.0, 10.0), factor(0.3, 0.5, 0.005, 1.0, 25.0)},
                   FloorFunction::constant(0.01), horizon};
}

inline ModelSpec three_factor(double horizon = 10.0) {
  return ModelSpec{{factor(1.0, 1.0, 0.01, 2.0, 10.0), factor(0.3, 0.5, 0.005, 1.0, 25.0),
                    factor(2.5, 0.8, 0.0, 4.0, 40.0)},
                   FloorFunction::piecewise_linear({{0.0, -0.01}, {2.0, 0.0}, {10.0, 0.015}}), horizon};
}

/// Jump-free limit: alpha tiny enough that no jump occurs in practice.
inline ModelSpec deterministic(double rate, double horizon = 10.0) {
  return ModelSpec{{factor(1.0, 1.0, 0.0, 1e-12, 10.0)}, FloorFunction::constant(rate), horizon};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace jumpcurve::testing
