#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jumpcurve/curves.hpp"
#include "jumpcurve/model.hpp"

namespace jumpcurve {

/// Market instantaneous forward curve f^M(0, T) on a strictly increasing grid.
struct ForwardCurve {
  std::vector<double> maturities;
  std::vector<double> rates;
};

/// Throws std::invalid_argument for an empty, mismatched or unsorted curve.
void check_forward_curve(const ForwardCurve& curve);

/// Floor that makes the model's initial forward curve match the market at
/// every grid maturity. Stored as a Calibrated piecewise-linear floor.
FloorFunction calibrate_floor(std::span<const FactorParams> factors, const ForwardCurve& market,
                              IntegralMethod method = IntegralMethod::ClosedForm);

/// Model initial forward curve f(0, T) on the given maturities.
ForwardCurve model_forward_curve(const ModelSpec& spec, std::span<const double> maturities);

/// Largest |f(0, T) - f^M(0, T)| over the market grid.
double max_forward_error(const ModelSpec& spec, const ForwardCurve& market);

struct MomentObservation {
  double time = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

struct MomentFitSettings {
  std::size_t max_iterations = 10000;
  double relative_tolerance = 1e-10;
  /// Fits whose final residual exceeds this are flagged as not converged.
  double residual_threshold = 1e-8;
};

struct MomentFit {
  ModelSpec spec;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Sum of squared relative errors between observed and model moments of r_t.
double moment_residual(const ModelSpec& spec, std::span<const MomentObservation> observations);

/// Fits lambda, alpha and epsilon of every factor plus a constant floor level
/// to observed unconditional moments of r_t by derivative-free coordinate
/// descent from the initial guess. sigma and x0 are held at their initial
/// values: the first two moments only see sigma through sigma / epsilon, and
/// x0 is the observed initial state.
MomentFit match_moments(std::span<const MomentObservation> observations, const ModelSpec& initial_guess,
                        const MomentFitSettings& settings = {});

}  // namespace jumpcurve
