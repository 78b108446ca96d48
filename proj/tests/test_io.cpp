#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "jumpcurve/io.hpp"

using namespace jumpcurve;

namespace {

const char* kBaseline = R"({
  "version": 1,
  "horizon": 10,
  "floor": {"type": "constant", "value": 0.02},
  "factors": [{"lambda": 1, "sigma": 1, "x0": 0.01, "alpha": 2, "epsilon": 10}],
  "seed": 42,
  "paths": 500
})";

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "jumpcurve_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::filesystem::path write_file(const std::string& name, const std::string& contents) {
  const auto path = scratch(name);
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(kBaseline);
  CHECK(cfg.model.horizon == 10.0);
  REQUIRE(cfg.model.factors.size() == 1);
  CHECK(cfg.model.factors[0].lambda == 1.0);
  CHECK(cfg.model.factors[0].measure.epsilon == 10.0);
  CHECK(cfg.model.floor.eval(3.0) == 0.02);
  CHECK(cfg.seed == 42u);
  CHECK(cfg.paths == 500);
  CHECK_FALSE(cfg.dual.has_value());
  REQUIRE(cfg.grid.size() == 41);
  CHECK(cfg.grid.front() == 0.0);
  CHECK(cfg.grid.back() == 10.0);

  const auto dual = parse_config(R"({"version": 1, "horizon": 5,
    "floor": {"type": "piecewise_linear", "knots": [[0, 0.01], [5, 0.03]]},
    "factors": [{"lambda": 1, "sigma": 1, "x0": 0, "alpha": 2, "epsilon": 10}],
    "spread_floor": {"type": "constant", "value": 0.002},
    "shared_factor_count": 1, "tenor": 0.5, "grid": [0, 1, 2]})");
  REQUIRE(dual.dual.has_value());
  CHECK(dual.dual->shared_factor_count == 1);
  CHECK(dual.dual->spread_factors.empty());
  CHECK(dual.model.floor.eval(2.5) == doctest::Approx(0.02));
  CHECK(dual.tenor == 0.5);
  CHECK(dual.grid == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("{not json"), ParseError);
  CHECK_THROWS_AS(parse_config("[]"), ParseError);
  CHECK_THROWS_AS(parse_config(R"({"version": 2, "horizon": 1, "floor": {"type": "constant", "value": 0}, "factors": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"version": 1, "floor": {"type": "constant", "value": 0}, "factors": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"version": 1, "horizon": 1, "floor": {"type": "cubic"}, "factors": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"version": 1, "horizon": 1, "floor": {"type": "constant", "value": 0},
    "factors": [{"lambda": "fast", "sigma": 1, "x0": 0, "alpha": 1, "epsilon": 2}]})"),
                  ParseError);
  CHECK_THROWS_AS(load_config(scratch("missing.json")), ParseError);

  // Out-of-range values parse; validation reports them.
  const auto cfg = parse_config(R"({"version": 1, "horizon": 1, "floor": {"type": "constant", "value": 0},
    "factors": [{"lambda": 0, "sigma": 1, "x0": 0, "alpha": 1, "epsilon": 2}]})");
  CHECK_FALSE(validate(cfg.model).ok());
}

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.0) == "-2");
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("forward curve CSV") {
  const auto good = write_file("good.csv", "maturity,forward_rate\r\n0.5,0.01\r\n\r\n1,0.012\n");
  const auto curve = read_forward_curve(good);
  CHECK(curve.maturities == std::vector<double>{0.5, 1.0});
  CHECK(curve.rates == std::vector<double>{0.01, 0.012});

  CHECK_THROWS_AS(read_forward_curve(scratch("absent.csv")), ParseError);
  try {
    read_forward_curve(write_file("empty.csv", ""));
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row() == 0);
  }
  try {
    read_forward_curve(write_file("bad.csv", "maturity,forward_rate\n0.5,0.01\n1;0.02\n"));
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row() == 3);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  CHECK_THROWS_AS(read_forward_curve(write_file("header.csv", "T,f\n1,0.01\n")), CsvError);
}

TEST_CASE("CSV writer") {
  const auto path = scratch("out.csv");
  CsvWriter out(path, "a,b,c");
  out << 0.1 << std::uint64_t{7} << std::string_view("x");
  out.end_row();
  out.close();
  CHECK(read_file(path) == "a,b,c\n0.10000000000000001,7,x\n");
  CHECK_THROWS_AS(CsvWriter(scratch("no_such_dir") / "out.csv", "a"), OutputError);
}
