#include "jumpcurve/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jumpcurve/rng.hpp"

namespace jumpcurve {

Complex GammaJumpMeasure::levy_cumulant(Complex b) const {
  if (!(b.real() < epsilon)) {
    std::ostringstream msg;
    msg << "levy cumulant diverges: Re(b) = " << b.real() << " >= epsilon = " << epsilon;
    throw DomainError(msg.str());
  }
  return alpha * b / (epsilon - b);
}

double GammaJumpMeasure::levy_cumulant(double b) const {
  if (!(b < epsilon)) {
    std::ostringstream msg;
    msg << "levy cumulant diverges: b = " << b << " >= epsilon = " << epsilon;
    throw DomainError(msg.str());
  }
  return alpha * b / (epsilon - b);
}

double GammaJumpMeasure::tilted_mean(double b) const {
  if (!(b < epsilon)) {
    std::ostringstream msg;
    msg << "tilted mean diverges: b = " << b << " >= epsilon = " << epsilon;
    throw DomainError(msg.str());
  }
  const double gap = epsilon - b;
  return alpha * epsilon / (gap * gap);
}

double GammaJumpMeasure::sample_jump(PhiloxStream& rng) const { return rng.exponential(epsilon); }

// FloorFunction ------------------------------------------------------------

FloorFunction FloorFunction::constant(double value) {
  FloorFunction f;
  f.constant_ = value;
  return f;
}

FloorFunction FloorFunction::piecewise_linear(std::vector<Knot> knots) {
  if (knots.empty()) throw std::invalid_argument("piecewise-linear floor needs at least one knot");
  FloorFunction f;
  f.kind_ = Kind::PiecewiseLinear;
  f.knots_ = std::move(knots);
  f.cumulative_.assign(f.knots_.size(), 0.0);
  for (std::size_t i = 1; i < f.knots_.size(); ++i) {
    const auto& a = f.knots_[i - 1];
    const auto& b = f.knots_[i];
    f.cumulative_[i] = f.cumulative_[i - 1] + 0.5 * (a.value + b.value) * (b.time - a.time);
  }
  return f;
}

FloorFunction FloorFunction::calibrated(std::vector<Knot> knots) {
  FloorFunction f = piecewise_linear(std::move(knots));
  f.kind_ = Kind::Calibrated;
  return f;
}

FloorFunction FloorFunction::sum(const FloorFunction& lhs, const FloorFunction& rhs) {
  FloorFunction f;
  f.kind_ = Kind::Sum;
  f.terms_ = std::make_shared<const std::pair<FloorFunction, FloorFunction>>(lhs, rhs);
  return f;
}

bool FloorFunction::knots_sorted() const {
  if (kind_ == Kind::Sum) return terms_->first.knots_sorted() && terms_->second.knots_sorted();
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1].time < knots_[i].time)) return false;
  }
  return true;
}

double FloorFunction::eval(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::Sum:
      return terms_->first.eval(t) + terms_->second.eval(t);
    case Kind::PiecewiseLinear:
    case Kind::Calibrated:
      break;
  }
  if (t <= knots_.front().time) return knots_.front().value;
  if (t >= knots_.back().time) return knots_.back().value;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const Knot& k) { return x < k.time; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.time) / (b.time - a.time);
  return a.value + w * (b.value - a.value);
}

// Antiderivative anchored at the first knot.
double FloorFunction::antiderivative(double t) const {
  const auto& first = knots_.front();
  const auto& last = knots_.back();
  if (t <= first.time) return first.value * (t - first.time);
  if (t >= last.time) return cumulative_.back() + last.value * (t - last.time);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const Knot& k) { return x < k.time; });
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const auto& a = knots_[i];
  const double value_t = eval(t);
  return cumulative_[i] + 0.5 * (a.value + value_t) * (t - a.time);
}

double FloorFunction::integrate(double t1, double t2) const {
  if (t1 == t2) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return constant_ * (t2 - t1);
    case Kind::Sum:
      return terms_->first.integrate(t1, t2) + terms_->second.integrate(t1, t2);
    case Kind::PiecewiseLinear:
    case Kind::Calibrated:
      break;
  }
  return antiderivative(t2) - antiderivative(t1);
}

double FloorFunction::minimum() const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::Sum:
      // Not tight for sums, but a valid lower bound.
      return terms_->first.minimum() + terms_->second.minimum();
    case Kind::PiecewiseLinear:
    case Kind::Calibrated:
      break;
  }
  double m = knots_.front().value;
  for (const auto& k : knots_) m = std::min(m, k.value);
  return m;
}

// Model ---------------------------------------------------------------------

ValidationReport validate(const ModelSpec& spec) {
  ValidationReport report;
  auto fail = [&](const std::string& what) { report.violations.push_back(what); };
  if (spec.factors.empty()) fail("model needs at least one factor");
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& f = spec.factors[k];
    const std::string where = "factor " + std::to_string(k + 1) + ": ";
    if (!(f.lambda > 0.0)) fail(where + "lambda must be positive");
    if (!(f.sigma > 0.0)) fail(where + "sigma must be positive");
    if (!(f.x0 >= 0.0)) fail(where + "x0 must be non-negative");
    if (!(f.measure.alpha > 0.0)) fail(where + "alpha must be positive");
    if (!(f.measure.epsilon > 0.0)) fail(where + "epsilon must be positive");
  }
  if (!spec.floor.knots_sorted()) fail("floor knots not sorted");
  if (!(spec.horizon > 0.0)) fail("horizon must be positive");
  return report;
}

void require_valid(const ModelSpec& spec) {
  const auto report = validate(spec);
  if (!report.ok()) throw std::invalid_argument("invalid model: " + report.violations.front());
}

std::vector<double> initial_state(const ModelSpec& spec) {
  std::vector<double> x;
  x.reserve(spec.factors.size());
  for (const auto& f : spec.factors) x.push_back(f.x0);
  return x;
}

Moments conditional_moments(const ModelSpec& spec, double u, double t, std::span<const double> state) {
  if (u > t) throw std::invalid_argument("conditional_moments: u must not exceed t");
  if (u < 0.0) throw std::invalid_argument("conditional_moments: u must be non-negative");
  if (state.size() != spec.factors.size()) throw std::invalid_argument("conditional_moments: state size mismatch");
  Moments m;
  m.mean = spec.floor.eval(t);
  const double dt = t - u;
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& f = spec.factors[k];
    const double decay = std::exp(-f.lambda * dt);
    m.mean += state[k] * decay - f.sigma * std::expm1(-f.lambda * dt) / f.lambda * f.measure.mean_jump();
    m.variance += -f.sigma * f.sigma * std::expm1(-2.0 * f.lambda * dt) / (2.0 * f.lambda) * f.measure.second_moment();
  }
  return m;
}

Moments unconditional_moments(const ModelSpec& spec, double t) {
  const auto x = initial_state(spec);
  return conditional_moments(spec, 0.0, t, x);
}

Moments stationary_moments(const ModelSpec& spec, double floor_limit) {
  Moments m{floor_limit, 0.0};
  for (const auto& f : spec.factors) {
    m.mean += f.sigma / f.lambda * f.measure.mean_jump();
    m.variance += f.sigma * f.sigma / (2.0 * f.lambda) * f.measure.second_moment();
  }
  return m;
}

}  // namespace jumpcurve
