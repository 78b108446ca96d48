#pragma once

#include "jumpcurve/model.hpp"

namespace jumpcurve {

/// Exponent of the factor characteristic function:
/// E[exp(iu X_t)] = exp(psi * x0 + rho).
struct AffineExponent {
  Complex psi;
  Complex rho;
};

/// psi = iu e^{-lambda t}; rho = \int_0^t kappa(iu sigma e^{-lambda (t - s)}) ds by
/// adaptive quadrature. u may be complex as long as every cumulant argument
/// stays in Re(b) < epsilon; DomainError otherwise.
AffineExponent factor_exponent(const FactorParams& factor, double t, Complex u);

/// rho(t, -iv) for real v < epsilon / sigma in closed form:
/// (alpha / lambda) log|(eps - v sigma e^{-lambda t}) / (eps - v sigma)|.
double mgf_rho_closed_form(const FactorParams& factor, double t, double v);

/// E[exp(iu r_t)].
Complex short_rate_char_fn(const ModelSpec& spec, double t, double u);

/// E[exp(v r_t)] for v < min_k epsilon_k / sigma_k.
double short_rate_mgf(const ModelSpec& spec, double t, double v);
/// Upper end of the admissible v range of short_rate_mgf.
double mgf_bound(const ModelSpec& spec);

/// E[exp(iu L_t)] = exp(iu alpha t / (epsilon - iu)).
Complex levy_char_fn(const GammaJumpMeasure& measure, double t, double u);

/// Q(L_t = 0) = exp(-alpha t); the atom that the density excludes.
double levy_atom(const GammaJumpMeasure& measure, double t);

struct DensitySettings {
  double abs_tol = 1e-11;
  /// Truncate the frequency range once the bound on the neglected tail falls below this.
  double truncation_tol = 1e-10;
  double max_frequency = 1e7;
};

/// Absolutely continuous part of the law of L_t at x > 0, by Fourier
/// inversion of the characteristic function with the atom removed.
double levy_density(const GammaJumpMeasure& measure, double t, double x, const DensitySettings& settings = {});

}  // namespace jumpcurve
