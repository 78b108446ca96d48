#pragma once

#include <span>
#include <vector>

#include "jumpcurve/model.hpp"

namespace jumpcurve {

/// Selects how the s-integrals of the cumulant are evaluated. Both routes
/// are kept: the closed forms are fast, quadrature is their standing oracle.
enum class IntegralMethod { ClosedForm, Quadrature };

struct AffineCoefficients {
  double a = 0.0;
  double b = 0.0;
};

/// B(t, T) = (exp(-lambda (T - t)) - 1) / lambda <= 0.
double bond_B(const FactorParams& factor, double t, double T);
/// d/dt B(t, T) = exp(-lambda (T - t)).
double bond_B_dt(const FactorParams& factor, double t, double T);
/// d/dT B(t, T) = -exp(-lambda (T - t)).
double bond_B_dT(const FactorParams& factor, double t, double T);

/// \int_{t1}^{t2} \int (e^{sigma B(s,T) z} - 1) dnu ds for t1 <= t2 <= T.
/// This is the jump part of A(t1, T) when t2 = T, and the bond compensator
/// on [0, t] when (t1, t2) = (0, t).
double cumulant_time_integral(const FactorParams& factor, double t1, double t2, double T,
                              IntegralMethod method = IntegralMethod::ClosedForm);

/// \int_{t1}^{t2} sigma e^{-lambda (T - s)} \int z e^{sigma B(s,T) z} dnu ds.
/// Drift of the forward rate; with (t1, t2) = (t, T) it is -d/dT of the
/// jump part of A(t, T).
double forward_drift_integral(const FactorParams& factor, double t1, double t2, double T,
                              IntegralMethod method = IntegralMethod::ClosedForm);

/// A_k(t, T) with the floor split evenly across factor_count factors.
double bond_A(const FactorParams& factor, const FloorFunction& floor, std::size_t factor_count, double t, double T,
              IntegralMethod method = IntegralMethod::ClosedForm);
double bond_A_dT(const FactorParams& factor, const FloorFunction& floor, std::size_t factor_count, double t, double T,
                 IntegralMethod method = IntegralMethod::ClosedForm);

std::vector<AffineCoefficients> affine_coefficients(const ModelSpec& spec, double t, double T,
                                                    IntegralMethod method = IntegralMethod::ClosedForm);

/// log P(t, T) = sum_k A_k + B_k X_t^k.
double log_bond_price(const ModelSpec& spec, double t, double T, std::span<const double> state,
                      IntegralMethod method = IntegralMethod::ClosedForm);
double bond_price(const ModelSpec& spec, double t, double T, std::span<const double> state,
                  IntegralMethod method = IntegralMethod::ClosedForm);
/// exp(-\int_t^T mu): upper bound on P(t, T) for non-negative factor states.
double bond_price_bound(const ModelSpec& spec, double t, double T);

double forward_rate(const ModelSpec& spec, double t, double T, std::span<const double> state,
                    IntegralMethod method = IntegralMethod::ClosedForm);

/// Continuously compounded spot rate log P(t, T) / (t - T); requires t < T.
double yield_curve(const ModelSpec& spec, double t, double T, std::span<const double> state);
/// The same rate from the affine exponent directly.
double yield_curve_affine(const ModelSpec& spec, double t, double T, std::span<const double> state);

/// Throws std::invalid_argument unless 0 <= t <= T (and T <= horizon when horizon > 0).
void check_time_pair(double t, double T, double horizon = 0.0);

}  // namespace jumpcurve
