#include "jumpcurve/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace jumpcurve {

void check_forward_curve(const ForwardCurve& curve) {
  if (curve.maturities.empty()) throw std::invalid_argument("market forward curve is empty");
  if (curve.maturities.size() != curve.rates.size()) throw std::invalid_argument("market forward curve size mismatch");
  for (std::size_t i = 0; i < curve.maturities.size(); ++i) {
    if (!std::isfinite(curve.maturities[i]) || !std::isfinite(curve.rates[i])) {
      throw std::invalid_argument("market forward curve has non-finite entries");
    }
    if (curve.maturities[i] < 0.0) throw std::invalid_argument("market maturities must be non-negative");
    if (i > 0 && !(curve.maturities[i - 1] < curve.maturities[i])) {
      throw std::invalid_argument("market maturities must be strictly increasing");
    }
  }
}

FloorFunction calibrate_floor(std::span<const FactorParams> factors, const ForwardCurve& market, IntegralMethod method) {
  check_forward_curve(market);
  std::vector<FloorFunction::Knot> knots;
  knots.reserve(market.maturities.size());
  for (std::size_t i = 0; i < market.maturities.size(); ++i) {
    const double T = market.maturities[i];
    double correction = 0.0;
    for (const auto& f : factors) {
      correction += f.x0 * std::exp(-f.lambda * T) + forward_drift_integral(f, 0.0, T, T, method);
    }
    knots.push_back({T, market.rates[i] - correction});
  }
  return FloorFunction::calibrated(std::move(knots));
}

ForwardCurve model_forward_curve(const ModelSpec& spec, std::span<const double> maturities) {
  ForwardCurve curve;
  const auto x = initial_state(spec);
  for (double T : maturities) {
    curve.maturities.push_back(T);
    curve.rates.push_back(forward_rate(spec, 0.0, T, x));
  }
  return curve;
}

double max_forward_error(const ModelSpec& spec, const ForwardCurve& market) {
  const auto model = model_forward_curve(spec, market.maturities);
  double worst = 0.0;
  for (std::size_t i = 0; i < market.rates.size(); ++i) worst = std::max(worst, std::abs(model.rates[i] - market.rates[i]));
  return worst;
}

double moment_residual(const ModelSpec& spec, std::span<const MomentObservation> observations) {
  double total = 0.0;
  for (const auto& obs : observations) {
    const auto m = unconditional_moments(spec, obs.time);
    const double em = (m.mean - obs.mean) / std::max(std::abs(obs.mean), 1e-12);
    const double ev = (m.variance - obs.variance) / std::max(std::abs(obs.variance), 1e-300);
    total += em * em + ev * ev;
  }
  return total;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section minimisation of phi on [lo, hi]; returns the argmin.
double golden_section(const std::function<double(double)>& phi, double lo, double hi, double tol) {
  double a = lo;
  double b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = phi(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Parameters per factor: log lambda, log alpha, log epsilon; then the floor level.
std::vector<double> pack(const ModelSpec& spec, double floor_level) {
  std::vector<double> p;
  for (const auto& f : spec.factors) {
    p.push_back(std::log(f.lambda));
    p.push_back(std::log(f.measure.alpha));
    p.push_back(std::log(f.measure.epsilon));
  }
  p.push_back(floor_level);
  return p;
}

ModelSpec unpack(const ModelSpec& guess, const std::vector<double>& p) {
  ModelSpec spec = guess;
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    spec.factors[k].lambda = std::exp(p[3 * k]);
    spec.factors[k].measure.alpha = std::exp(p[3 * k + 1]);
    spec.factors[k].measure.epsilon = std::exp(p[3 * k + 2]);
  }
  spec.floor = FloorFunction::constant(p.back());
  return spec;
}

}  // namespace

MomentFit match_moments(std::span<const MomentObservation> observations, const ModelSpec& initial_guess,
                        const MomentFitSettings& settings) {
  require_valid(initial_guess);
  const std::size_t n = initial_guess.factors.size();
  if (observations.size() < 8 * n) {
    throw std::invalid_argument("match_moments needs at least " + std::to_string(8 * n) + " observations");
  }

  const double floor_level = initial_guess.floor.kind() == FloorFunction::Kind::Constant
                                 ? initial_guess.floor.constant_value()
                                 : initial_guess.floor.eval(0.0);
  std::vector<double> p = pack(initial_guess, floor_level);
  const std::size_t dim = p.size();

  auto objective = [&](const std::vector<double>& q) {
    const double value = moment_residual(unpack(initial_guess, q), observations);
    return std::isfinite(value) ? value : std::numeric_limits<double>::max();
  };

  std::vector<double> step(dim, 0.25);
  step.back() = std::max(0.01, 0.25 * std::abs(floor_level));

  double best = objective(p);
  MomentFit fit;
  std::size_t sweep = 0;
  while (sweep < settings.max_iterations && best > 0.0) {
    ++sweep;
    const double start_value = best;
    const std::vector<double> start = p;

    for (std::size_t i = 0; i < dim; ++i) {
      auto phi = [&](double h) {
        auto q = p;
        q[i] += h;
        return objective(q);
      };
      const double h = golden_section(phi, -step[i], step[i], 1e-12 * std::max(1.0, step[i]));
      const double value = phi(h);
      if (value < best) {
        p[i] += h;
        best = value;
        // Interior minimum: tighten; boundary minimum: widen the bracket.
        step[i] = std::abs(h) > 0.9 * step[i] ? 2.0 * step[i] : std::max(2.0 * std::abs(h), 1e-9);
      } else {
        step[i] = std::max(0.5 * step[i], 1e-9);
      }
    }

    // Pattern move along the sweep displacement.
    std::vector<double> direction(dim);
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      direction[i] = p[i] - start[i];
      norm += direction[i] * direction[i];
    }
    if (norm > 0.0) {
      auto phi = [&](double h) {
        auto q = p;
        for (std::size_t i = 0; i < dim; ++i) q[i] += h * direction[i];
        return objective(q);
      };
      const double h = golden_section(phi, 0.0, 4.0, 1e-10);
      const double value = phi(h);
      if (value < best) {
        for (std::size_t i = 0; i < dim; ++i) p[i] += h * direction[i];
        best = value;
      }
    }

    const double improvement = start_value - best;
    const double largest_step = *std::max_element(step.begin(), step.end());
    if (improvement <= settings.relative_tolerance * start_value && largest_step < 1e-8) break;
  }

  fit.spec = unpack(initial_guess, p);
  fit.residual = best;
  fit.iterations = sweep;
  fit.converged = best <= settings.residual_threshold;
  return fit;
}

}  // namespace jumpcurve
