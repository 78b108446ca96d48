#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jumpcurve/curves.hpp"
#include "jumpcurve/model.hpp"
#include "jumpcurve/simulation.hpp"

namespace jumpcurve {

/// European call on the zero-coupon bond P(tau, T), struck at K, exercised at tau.
struct OptionSpec {
  double strike = 0.0;
  double option_maturity = 0.0;  ///< tau
  double bond_maturity = 0.0;    ///< T >= tau
  double dampening = 1.5;        ///< a > 1; the price does not depend on it
};

/// Throws std::invalid_argument unless K > 0, 0 < tau <= T and a > 1.
void check_option(const OptionSpec& option);

/// z-coefficient gamma(s, y) of eta_k(s, z, y) = gamma z:
/// sigma [(a + iy) B(s, T) - (a + iy - 1) B(s, tau)]. Re(gamma) <= 0.
Complex eta(const FactorParams& factor, double s, double y, const OptionSpec& option);

/// \int_t^tau kappa(gamma(s, y)) ds.
Complex psi_bar(const FactorParams& factor, double t, double y, const OptionSpec& option,
                IntegralMethod method = IntegralMethod::Quadrature);

/// Deterministic part of the transformed log-payoff exponent.
Complex theta(const ModelSpec& spec, double y, const OptionSpec& option);

/// Fourier transform of the dampened payoff e^{-au} (P0T e^u - K)^+.
Complex qhat(double y, const OptionSpec& option, double bond_price_0T);

struct FourierSettings {
  double initial_truncation = 200.0;
  double max_truncation = 1e8;
  /// Stop doubling the truncation once the last added band contributes less.
  double tail_tolerance = 1e-10;
  /// Absolute tolerance of the adaptive y-quadrature over the whole half line.
  double quadrature_tolerance = 1e-10;
  IntegralMethod psi_method = IntegralMethod::Quadrature;
};

struct FourierResult {
  double price = 0.0;
  double truncation = 0.0;
  double error_estimate = 0.0;
  /// Imaginary part of the full-line integral; zero by Hermitian symmetry.
  double imaginary_residue = 0.0;
};

/// Price at time 0 of the call by Fourier inversion.
FourierResult fourier_call(const ModelSpec& spec, const OptionSpec& option, const FourierSettings& settings = {});
double fourier_call_price(const ModelSpec& spec, const OptionSpec& option, const FourierSettings& settings = {});

/// Information at time t needed by the conditional pricer: I_t and each
/// factor's jumps up to t.
struct PathState {
  double integrated_rate = 0.0;
  std::vector<JumpRecord> jumps;
};

PathState path_state(const ModelSpec& spec, std::span<const JumpRecord> jumps, double t);

/// Price at time t <= tau given the path up to t.
FourierResult fourier_call_at(const ModelSpec& spec, const OptionSpec& option, const PathState& state, double t,
                              const FourierSettings& settings = {});
double fourier_call_price_at(const ModelSpec& spec, const OptionSpec& option, const PathState& state, double t,
                             const FourierSettings& settings = {});

/// Sample mean and standard error of e^{-I_tau} (P(tau, T) - K)^+ over exact paths.
Estimate mc_option_price(const ModelSpec& spec, const OptionSpec& option, std::size_t paths, std::uint64_t seed);

/// The same estimator for several strikes sharing one set of paths.
std::vector<Estimate> mc_option_prices(const ModelSpec& spec, const OptionSpec& option, std::span<const double> strikes,
                                       std::size_t paths, std::uint64_t seed);

}  // namespace jumpcurve
