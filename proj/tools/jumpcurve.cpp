#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jumpcurve/calibration.hpp"
#include "jumpcurve/curves.hpp"
#include "jumpcurve/io.hpp"
#include "jumpcurve/multicurve.hpp"
#include "jumpcurve/options.hpp"
#include "jumpcurve/simulation.hpp"

namespace fs = std::filesystem;
using namespace jumpcurve;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInputError = 2;

struct GlobalOptions {
  std::string config;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
};

struct PriceOptions {
  std::string instrument;
  double maturity = 0.0;
  std::optional<double> expiry;
  std::optional<double> strike;
  double dampening = 1.5;
};

RunConfig load(const GlobalOptions& opts) {
  RunConfig cfg = load_config(opts.config);
  if (opts.output) cfg.output = *opts.output;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.paths) cfg.paths = *opts.paths;
  return cfg;
}

fs::path output_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) throw OutputError("cannot create output directory " + cfg.output.string() + ": " + ec.message());
  return cfg.output;
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw std::invalid_argument("a seed is required: set 'seed' in the config or pass --seed");
  return *cfg.seed;
}

std::string fmt(double v) { return format_double(v); }

int cmd_validate(const RunConfig& cfg) {
  ValidationReport report = cfg.dual ? validate(*cfg.dual) : validate(cfg.model);
  if (!(cfg.model.horizon > 0.0) && report.ok()) report.violations.push_back("horizon must be positive");
  if (report.ok()) {
    std::cout << "OK\n";
    return kOk;
  }
  for (const auto& v : report.violations) std::cout << "error: " << v << '\n';
  return kFailure;
}

int cmd_curve(const RunConfig& cfg) {
  require_valid(cfg.model);
  if (cfg.dual) require_valid(*cfg.dual);
  const auto dir = output_dir(cfg);
  const auto x0 = initial_state(cfg.model);

  CsvWriter curve(dir / "curve.csv", "maturity,P,f,R");
  for (double T : cfg.grid) {
    try {
      const double P = bond_price(cfg.model, 0.0, T, x0);
      const double f = forward_rate(cfg.model, 0.0, T, x0);
      const double R = T > 0.0 ? yield_curve(cfg.model, 0.0, T, x0) : f;
      curve << T << P << f << R;
      curve.end_row();
    } catch (const std::exception& e) {
      throw std::runtime_error("maturity " + fmt(T) + ": " + e.what());
    }
  }
  curve.close();

  if (cfg.dual) {
    const auto& dual = *cfg.dual;
    if (!(cfg.tenor > 0.0)) throw std::invalid_argument("tenor must be positive");
    const auto state = dual_initial_state(dual);
    const ModelSpec fict = fictitious_model(dual);
    const auto fict_state = fictitious_state(dual, state);
    CsvWriter out(dir / "dual_curve.csv", "maturity,P,P_bar,f,f_bar,g,F_ois,L_libor");
    for (double T : cfg.grid) {
      try {
        const double P = risk_free_bond_price(dual, 0.0, T, state);
        const double Pbar = fictitious_bond_price(dual, 0.0, T, state);
        const double f = forward_rate(dual.base, 0.0, T, x0);
        const double fbar = forward_rate(fict, 0.0, T, fict_state);
        const double g = forward_spread(dual, 0.0, T, state);
        const double T1 = std::max(0.0, T - cfg.tenor);
        // At T = 0 the simple forwards reduce to their instantaneous limits.
        const double F = T > 0.0 ? ois_forward(dual, 0.0, T1, T, state) : f;
        const double L = T > 0.0 ? libor_forward(dual, 0.0, T1, T, state) : fbar;
        out << T << P << Pbar << f << fbar << g << F << L;
        out.end_row();
      } catch (const std::exception& e) {
        throw std::runtime_error("maturity " + fmt(T) + ": " + e.what());
      }
    }
    out.close();
  }
  std::cout << "wrote " << (dir / "curve.csv").string() << '\n';
  if (cfg.dual) std::cout << "wrote " << (dir / "dual_curve.csv").string() << '\n';
  return kOk;
}

int cmd_calibrate(const RunConfig& cfg, const std::string& market_path) {
  require_valid(cfg.model);
  const ForwardCurve market = read_forward_curve(market_path);
  for (std::size_t i = 0; i < market.maturities.size(); ++i) {
    const double T = market.maturities[i];
    if (!(T >= 0.0) || T > cfg.model.horizon) {
      throw CsvError("row " + std::to_string(i + 2) + ": maturity " + fmt(T) + " outside [0, horizon]", i + 2);
    }
  }
  ModelSpec fitted = cfg.model;
  fitted.floor = calibrate_floor(cfg.model.factors, market);
  const double error = max_forward_error(fitted, market);

  const auto dir = output_dir(cfg);
  CsvWriter out(dir / "floor.csv", "maturity,mu");
  for (const auto& knot : fitted.floor.knots()) {
    out << knot.time << knot.value;
    out.end_row();
  }
  out.close();
  std::cout << "wrote " << (dir / "floor.csv").string() << '\n';
  std::cout << "max refit error: " << fmt(error) << '\n';
  if (!(error < 1e-8)) {
    std::cerr << "error: refit error " << fmt(error) << " is not below 1e-8\n";
    return kFailure;
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
  require_valid(cfg.model);
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.paths == 0) throw std::invalid_argument("paths must be positive");
  const auto dir = output_dir(cfg);
  const ModelSpec& spec = cfg.model;

  CsvWriter paths(dir / "paths.csv", "path_id,time,factor_index,X,short_rate,integrated_rate");
  CsvWriter jumps(dir / "jumps.csv", "path_id,factor_index,jump_time,jump_size");
  std::vector<double> terminal;
  terminal.reserve(cfg.paths);
  for (std::uint64_t p = 0; p < cfg.paths; ++p) {
    const SimulatedPath path = simulate_path(spec, seed, p, cfg.points_per_year);
    for (std::size_t i = 0; i < path.grid.size(); ++i) {
      for (std::size_t k = 0; k < spec.factors.size(); ++k) {
        paths << p << path.grid[i] << static_cast<std::uint64_t>(k + 1) << path.factors[k][i] << path.short_rate[i]
              << path.integrated_rate[i];
        paths.end_row();
      }
    }
    for (std::size_t k = 0; k < spec.factors.size(); ++k) {
      for (std::size_t j = 0; j < path.jumps[k].size(); ++j) {
        jumps << p << static_cast<std::uint64_t>(k + 1) << path.jumps[k].times[j] << path.jumps[k].sizes[j];
        jumps.end_row();
      }
    }
    terminal.push_back(path.short_rate.back());
  }
  paths.close();
  jumps.close();
  std::cout << "wrote " << (dir / "paths.csv").string() << " and " << (dir / "jumps.csv").string() << '\n';

  const auto theory = unconditional_moments(spec, spec.horizon);
  const Estimate mean = summarize(terminal);
  if (terminal.size() < 2) {
    std::cout << "r(horizon): sample " << fmt(mean.value) << ", theory mean " << fmt(theory.mean) << " variance "
              << fmt(theory.variance) << '\n';
    return kOk;
  }
  const auto n = static_cast<double>(terminal.size());
  double m2 = 0.0;
  double m4 = 0.0;
  for (double r : terminal) {
    const double d = r - mean.value;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double variance = m2 / (n - 1.0);
  const double variance_se = std::sqrt(std::max(m4 / n - (m2 / n) * (m2 / n), 0.0) / n);
  const double z_mean = mean.standard_error > 0.0 ? std::abs(mean.value - theory.mean) / mean.standard_error : 0.0;
  const double z_var = variance_se > 0.0 ? std::abs(variance - theory.variance) / variance_se : 0.0;
  std::cout << "r(horizon) mean: sample " << fmt(mean.value) << " theory " << fmt(theory.mean) << " z " << fmt(z_mean)
            << '\n';
  std::cout << "r(horizon) variance: sample " << fmt(variance) << " theory " << fmt(theory.variance) << " z "
            << fmt(z_var) << '\n';
  if (z_mean > 5.0 || z_var > 5.0) std::cerr << "warning: simulated moments deviate by more than 5 standard errors\n";
  return kOk;
}

void report_price(double analytic, const Estimate& mc) {
  const double diff = std::abs(analytic - mc.value);
  double z = 0.0;
  if (mc.standard_error > 0.0) {
    z = diff / mc.standard_error;
  } else if (diff > 1e-9) {
    z = std::numeric_limits<double>::infinity();
  }
  std::cout << "analytic: " << fmt(analytic) << '\n';
  std::cout << "monte carlo: " << fmt(mc.value) << " +- " << fmt(mc.standard_error) << " (" << mc.paths << " paths)\n";
  std::cout << "z-score: " << fmt(z) << '\n';
}

int cmd_price(const RunConfig& cfg, const PriceOptions& opts) {
  require_valid(cfg.model);
  const std::uint64_t seed = require_seed(cfg);
  const ModelSpec& spec = cfg.model;
  if (opts.instrument == "bond") {
    check_time_pair(0.0, opts.maturity, spec.horizon);
    const double analytic = bond_price(spec, 0.0, opts.maturity, initial_state(spec));
    report_price(analytic, mc_bond_price(spec, opts.maturity, cfg.paths, seed));
    return kOk;
  }
  if (!opts.expiry || !opts.strike) throw std::invalid_argument("option pricing needs --expiry and --strike");
  OptionSpec option{*opts.strike, *opts.expiry, opts.maturity, opts.dampening};
  check_option(option);
  check_time_pair(option.option_maturity, option.bond_maturity, spec.horizon);
  const double analytic = fourier_call_price(spec, option);
  report_price(analytic, mc_option_price(spec, option, cfg.paths, seed));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jump-driven short-rate model: curves, calibration, simulation and pricing"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config, "Model configuration (JSON)")->required();
  app.add_option("--output", global.output, "Output directory");
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--paths", global.paths, "Number of Monte Carlo paths");

  auto* validate_cmd = app.add_subcommand("validate", "Check model parameters");
  auto* curve_cmd = app.add_subcommand("curve", "Write the initial term structure");
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit the floor to a market forward curve");
  std::string market;
  calibrate_cmd->add_option("--market", market, "CSV with maturity,forward_rate")->required();
  auto* simulate_cmd = app.add_subcommand("simulate", "Write simulated paths and jumps");
  auto* price_cmd = app.add_subcommand("price", "Analytic and Monte Carlo prices");
  PriceOptions price;
  price_cmd->add_option("instrument", price.instrument, "bond or option")
      ->required()
      ->check(CLI::IsMember({"bond", "option"}));
  price_cmd->add_option("--maturity", price.maturity, "Bond maturity T")->required();
  price_cmd->add_option("--expiry", price.expiry, "Option expiry tau");
  price_cmd->add_option("--strike", price.strike, "Strike K");
  price_cmd->add_option("--dampening", price.dampening, "Dampening parameter a > 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    const RunConfig cfg = load(global);
    if (*validate_cmd) return cmd_validate(cfg);
    if (*curve_cmd) return cmd_curve(cfg);
    if (*calibrate_cmd) return cmd_calibrate(cfg, market);
    if (*simulate_cmd) return cmd_simulate(cfg);
    if (*price_cmd) return cmd_price(cfg, price);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
