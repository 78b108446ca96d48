#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jumpcurve/quadrature.hpp"

namespace jumpcurve {

/// Raised when an exponential moment or cumulant is requested outside the
/// region where it converges.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class PhiloxStream;

/// Levy measure of a compound Poisson subordinator with Exp(epsilon) jump
/// sizes and intensity alpha: density alpha * epsilon * exp(-epsilon z) on (0, inf).
///
/// Every exponential-moment formula of the model reduces to levy_cumulant or
/// tilted_mean of this measure. Exponential moments exist for Re(b) < epsilon,
/// so epsilon is the effective integrability bound.
struct GammaJumpMeasure {
  double alpha = 0.0;    ///< jump intensity (jumps per year)
  double epsilon = 0.0;  ///< exponential rate; 1/epsilon is the mean jump size

  /// \int z dnu = alpha / epsilon.
  double mean_jump() const { return alpha / epsilon; }
  /// \int z^2 dnu = 2 alpha / epsilon^2.
  double second_moment() const { return 2.0 * alpha / (epsilon * epsilon); }
  /// Mean size of a single jump.
  double jump_size_mean() const { return 1.0 / epsilon; }

  /// \int (e^{bz} - 1) dnu = alpha b / (epsilon - b). Throws DomainError for Re(b) >= epsilon.
  Complex levy_cumulant(Complex b) const;
  double levy_cumulant(double b) const;

  /// \int z e^{bz} dnu = alpha epsilon / (epsilon - b)^2 for real b < epsilon.
  double tilted_mean(double b) const;

  /// One Exp(epsilon) jump size by inversion.
  double sample_jump(PhiloxStream& rng) const;
};

struct FactorParams {
  double lambda = 0.0;  ///< mean-reversion speed
  double sigma = 0.0;   ///< jump loading
  double x0 = 0.0;      ///< initial factor value
  GammaJumpMeasure measure;
};

/// Deterministic lower bound mu(t) of the short rate.
///
/// Piecewise-linear floors extrapolate flat outside their knot range, so
/// eval and integrate are defined on the whole half-line and integrate is
/// exact.
class FloorFunction {
public:
  struct Knot {
    double time;
    double value;
  };

  enum class Kind { Constant, PiecewiseLinear, Calibrated, Sum };

  /// mu(t) = 0.
  FloorFunction() = default;

  static FloorFunction constant(double value);
  static FloorFunction piecewise_linear(std::vector<Knot> knots);
  static FloorFunction calibrated(std::vector<Knot> knots);
  /// Pointwise sum; used for mu + mu* in the dual-curve setting.
  static FloorFunction sum(const FloorFunction& lhs, const FloorFunction& rhs);

  Kind kind() const { return kind_; }
  double eval(double t) const;
  /// \int_{t1}^{t2} mu(s) ds; antisymmetric in its arguments.
  double integrate(double t1, double t2) const;

  /// Knots of a piecewise-linear or calibrated floor; empty for other kinds.
  std::span<const Knot> knots() const { return knots_; }
  /// Constant level; only meaningful for Kind::Constant.
  double constant_value() const { return constant_; }
  bool knots_sorted() const;
  /// Lower bound of mu over all t.
  double minimum() const;

private:
  double antiderivative(double t) const;

  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  std::vector<Knot> knots_;
  std::vector<double> cumulative_;  // \int_{knots_[0].time}^{knots_[i].time} mu
  std::shared_ptr<const std::pair<FloorFunction, FloorFunction>> terms_;
};

struct ModelSpec {
  std::vector<FactorParams> factors;
  FloorFunction floor;
  double horizon = 0.0;

  std::size_t factor_count() const { return factors.size(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every violated parameter constraint. Factor indices in messages are 1-based.
ValidationReport validate(const ModelSpec& spec);

/// Throws std::invalid_argument carrying the first violation when the spec is invalid.
void require_valid(const ModelSpec& spec);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of r_t given the factor values at time u <= t.
Moments conditional_moments(const ModelSpec& spec, double u, double t, std::span<const double> state);
/// Unconditional moments of r_t (u = 0, state = initial values).
Moments unconditional_moments(const ModelSpec& spec, double t);
/// Limits of the unconditional moments as t -> infinity for a floor tending to floor_limit.
Moments stationary_moments(const ModelSpec& spec, double floor_limit);

std::vector<double> initial_state(const ModelSpec& spec);

}  // namespace jumpcurve
