#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "jumpcurve/calibration.hpp"
#include "jumpcurve/curves.hpp"
#include "jumpcurve/io.hpp"
#include "jumpcurve/model.hpp"
#include "jumpcurve/multicurve.hpp"
#include "jumpcurve/options.hpp"
#include "jumpcurve/simulation.hpp"
#include "jumpcurve/transforms.hpp"

namespace py = pybind11;
using namespace jumpcurve;
using State = std::vector<double>;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jump-driven multi-factor short-rate model";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::enum_<IntegralMethod>(m, "IntegralMethod")
      .value("ClosedForm", IntegralMethod::ClosedForm)
      .value("Quadrature", IntegralMethod::Quadrature);

  py::class_<GammaJumpMeasure>(m, "GammaJumpMeasure")
      .def(py::init([](double alpha, double epsilon) { return GammaJumpMeasure{alpha, epsilon}; }), py::arg("alpha"),
           py::arg("epsilon"))
      .def_readwrite("alpha", &GammaJumpMeasure::alpha)
      .def_readwrite("epsilon", &GammaJumpMeasure::epsilon)
      .def("levy_cumulant", py::overload_cast<double>(&GammaJumpMeasure::levy_cumulant, py::const_));

  py::class_<FactorParams>(m, "FactorParams")
      .def(py::init([](double lambda, double sigma, double x0, double alpha, double epsilon) {
             return FactorParams{lambda, sigma, x0, {alpha, epsilon}};
           }),
           py::arg("lambda_"), py::arg("sigma"), py::arg("x0"), py::arg("alpha"), py::arg("epsilon"))
      .def_readwrite("lambda_", &FactorParams::lambda)
      .def_readwrite("sigma", &FactorParams::sigma)
      .def_readwrite("x0", &FactorParams::x0)
      .def_readwrite("measure", &FactorParams::measure);

  py::class_<FloorFunction>(m, "FloorFunction")
      .def(py::init<>())
      .def_static("constant", &FloorFunction::constant)
      .def_static("piecewise_linear",
                  [](const std::vector<std::pair<double, double>>& knots) {
                    std::vector<FloorFunction::Knot> k;
                    for (const auto& [t, v] : knots) k.push_back({t, v});
                    return FloorFunction::piecewise_linear(std::move(k));
                  })
      .def("__call__", &FloorFunction::eval)
      .def("integrate", &FloorFunction::integrate)
      .def("knots", [](const FloorFunction& f) {
        std::vector<std::pair<double, double>> out;
        for (const auto& k : f.knots()) out.emplace_back(k.time, k.value);
        return out;
      });

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](std::vector<FactorParams> factors, FloorFunction floor, double horizon) {
             return ModelSpec{std::move(factors), std::move(floor), horizon};
           }),
           py::arg("factors"), py::arg("floor"), py::arg("horizon"))
      .def_readwrite("factors", &ModelSpec::factors)
      .def_readwrite("floor", &ModelSpec::floor)
      .def_readwrite("horizon", &ModelSpec::horizon);

  py::class_<Moments>(m, "Moments").def_readonly("mean", &Moments::mean).def_readonly("variance", &Moments::variance);
  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("standard_error", &Estimate::standard_error)
      .def_readonly("paths", &Estimate::paths);

  m.def("validate", [](const ModelSpec& s) { return validate(s).violations; });
  m.def("initial_state", &initial_state);
  m.def("unconditional_moments", &unconditional_moments);
  m.def(
      "bond_price",
      [](const ModelSpec& s, double t, double T, const State& x, IntegralMethod method) {
        return bond_price(s, t, T, x, method);
      },
      py::arg("spec"), py::arg("t"), py::arg("T"), py::arg("state"), py::arg("method") = IntegralMethod::ClosedForm);
  m.def(
      "forward_rate",
      [](const ModelSpec& s, double t, double T, const State& x, IntegralMethod method) {
        return forward_rate(s, t, T, x, method);
      },
      py::arg("spec"), py::arg("t"), py::arg("T"), py::arg("state"), py::arg("method") = IntegralMethod::ClosedForm);
  m.def("yield_curve", [](const ModelSpec& s, double t, double T, const State& x) { return yield_curve(s, t, T, x); },
        py::arg("spec"), py::arg("t"), py::arg("T"), py::arg("state"));
  m.def("calibrate_floor",
        [](const std::vector<FactorParams>& factors, std::vector<double> maturities, std::vector<double> rates) {
          return calibrate_floor(factors, ForwardCurve{std::move(maturities), std::move(rates)});
        });
  m.def("short_rate_mgf", &short_rate_mgf);
  m.def("short_rate_char_fn", &short_rate_char_fn);
  m.def("levy_density", [](const GammaJumpMeasure& measure, double t, double x) { return levy_density(measure, t, x); });

  py::class_<SimulatedPath>(m, "SimulatedPath")
      .def_readonly("grid", &SimulatedPath::grid)
      .def_readonly("factors", &SimulatedPath::factors)
      .def_readonly("short_rate", &SimulatedPath::short_rate)
      .def_readonly("integrated_rate", &SimulatedPath::integrated_rate)
      .def_property_readonly("jump_times",
                             [](const SimulatedPath& p) {
                               std::vector<std::vector<double>> out;
                               for (const auto& r : p.jumps) out.push_back(r.times);
                               return out;
                             })
      .def_property_readonly("jump_sizes", [](const SimulatedPath& p) {
        std::vector<std::vector<double>> out;
        for (const auto& r : p.jumps) out.push_back(r.sizes);
        return out;
      });
  m.def("simulate_path", &simulate_path, py::arg("spec"), py::arg("seed"), py::arg("path_index"),
        py::arg("points_per_year") = 252);
  m.def("mc_bond_price", &mc_bond_price, py::call_guard<py::gil_scoped_release>());

  py::class_<OptionSpec>(m, "OptionSpec")
      .def(py::init([](double strike, double tau, double T, double a) { return OptionSpec{strike, tau, T, a}; }),
           py::arg("strike"), py::arg("option_maturity"), py::arg("bond_maturity"), py::arg("dampening") = 1.5);
  m.def("fourier_call_price", [](const ModelSpec& s, const OptionSpec& o) { return fourier_call_price(s, o); },
        py::call_guard<py::gil_scoped_release>());
  m.def("mc_option_price", &mc_option_price, py::call_guard<py::gil_scoped_release>());

  py::class_<DualCurveSpec>(m, "DualCurveSpec")
      .def(py::init([](ModelSpec base, std::vector<FactorParams> spread, FloorFunction spread_floor, std::size_t shared) {
             return DualCurveSpec{std::move(base), std::move(spread), std::move(spread_floor), shared};
           }),
           py::arg("base"), py::arg("spread_factors"), py::arg("spread_floor"), py::arg("shared_factor_count") = 0);
  m.def("dual_initial_state", &dual_initial_state);
  m.def("fictitious_bond_price",
        [](const DualCurveSpec& d, double t, double T, const State& x) { return fictitious_bond_price(d, t, T, x); });
  m.def("ois_forward", [](const DualCurveSpec& d, double t, double T1, double T2, const State& x) {
    return ois_forward(d, t, T1, T2, x);
  });
  m.def("libor_forward", [](const DualCurveSpec& d, double t, double T1, double T2, const State& x) {
    return libor_forward(d, t, T1, T2, x);
  });
  m.def("forward_spread",
        [](const DualCurveSpec& d, double t, double T, const State& x) { return forward_spread(d, t, T, x); });

  m.def("load_model", [](const std::filesystem::path& path) { return load_config(path).model; });
}
