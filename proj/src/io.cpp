#include "jumpcurve/io.hpp"

#include <charconv>
#include <locale>
#include <sstream>

#include <json.hpp>

namespace jumpcurve {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

FloorFunction parse_floor(const json& node, const std::string& where) {
  if (!node.is_object()) throw ParseError(where + ": expected an object");
  const auto& type = require(node, "type", where);
  if (!type.is_string()) throw ParseError(where + ".type: expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "constant") return FloorFunction::constant(number(require(node, "value", where), where + ".value"));
  if (kind == "piecewise_linear") {
    const auto& knots = require(node, "knots", where);
    if (!knots.is_array() || knots.empty()) throw ParseError(where + ".knots: expected a non-empty array");
    std::vector<FloorFunction::Knot> out;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const std::string at = where + ".knots[" + std::to_string(i) + "]";
      const auto& knot = knots[i];
      if (!knot.is_array() || knot.size() != 2) throw ParseError(at + ": expected [time, value]");
      out.push_back({number(knot[0], at), number(knot[1], at)});
    }
    return FloorFunction::piecewise_linear(std::move(out));
  }
  throw ParseError(where + ".type: unknown floor type '" + kind + "'");
}

std::vector<FactorParams> parse_factors(const json& node, const std::string& where) {
  if (!node.is_array()) throw ParseError(where + ": expected an array");
  std::vector<FactorParams> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const auto& f = node[i];
    if (!f.is_object()) throw ParseError(at + ": expected an object");
    FactorParams p;
    p.lambda = number(require(f, "lambda", at), at + ".lambda");
    p.sigma = number(require(f, "sigma", at), at + ".sigma");
    p.x0 = number(require(f, "x0", at), at + ".x0");
    p.measure.alpha = number(require(f, "alpha", at), at + ".alpha");
    p.measure.epsilon = number(require(f, "epsilon", at), at + ".epsilon");
    out.push_back(p);
  }
  return out;
}

std::size_t count(const json& value, const std::string& where) {
  if (!value.is_number_unsigned()) throw ParseError(where + ": expected a non-negative integer");
  return value.get<std::size_t>();
}

std::vector<double> parse_grid(const json& node, double horizon) {
  std::vector<double> grid;
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) grid.push_back(number(node[i], "grid[" + std::to_string(i) + "]"));
    return grid;
  }
  if (!node.is_object()) throw ParseError("grid: expected an array or an object");
  const double start = node.contains("start") ? number(node["start"], "grid.start") : 0.0;
  const double end = node.contains("end") ? number(node["end"], "grid.end") : horizon;
  const std::size_t points = node.contains("points") ? count(node["points"], "grid.points") : 41;
  if (points < 2) throw ParseError("grid.points: need at least 2 points");
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(start + (end - start) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config: expected a JSON object");

  RunConfig cfg;
  const auto& version = require(doc, "version", "config");
  if (!version.is_number_integer() || version.get<int>() != 1) throw ParseError("config: unsupported version");
  cfg.version = 1;
  cfg.model.horizon = number(require(doc, "horizon", "config"), "horizon");
  cfg.model.floor = parse_floor(require(doc, "floor", "config"), "floor");
  cfg.model.factors = parse_factors(require(doc, "factors", "config"), "factors");

  const bool dual = doc.contains("spread_floor") || doc.contains("spread_factors") || doc.contains("shared_factor_count");
  if (dual) {
    DualCurveSpec d;
    d.base = cfg.model;
    if (doc.contains("spread_floor")) d.spread_floor = parse_floor(doc["spread_floor"], "spread_floor");
    if (doc.contains("spread_factors")) d.spread_factors = parse_factors(doc["spread_factors"], "spread_factors");
    if (doc.contains("shared_factor_count")) d.shared_factor_count = count(doc["shared_factor_count"], "shared_factor_count");
    cfg.dual = std::move(d);
  }
  if (doc.contains("tenor")) cfg.tenor = number(doc["tenor"], "tenor");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ParseError("seed: expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("paths")) cfg.paths = count(doc["paths"], "paths");
  if (doc.contains("points_per_year")) cfg.points_per_year = count(doc["points_per_year"], "points_per_year");
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ParseError("output: expected a string");
    cfg.output = doc["output"].get<std::string>();
  }
  cfg.grid = doc.contains("grid") ? parse_grid(doc["grid"], cfg.model.horizon) : parse_grid(json::object(), cfg.model.horizon);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

ForwardCurve read_forward_curve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read market file " + path.string());
  ForwardCurve curve;
  std::string line;
  std::size_t row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "maturity,forward_rate") throw CsvError("row 1: expected header 'maturity,forward_rate'", row);
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    auto parse = [&](std::string_view field, double& out) {
      const auto* end = field.data() + field.size();
      const auto r = std::from_chars(field.data(), end, out);
      return r.ec == std::errc() && r.ptr == end;
    };
    double maturity = 0.0;
    double rate = 0.0;
    const std::string_view view(line);
    if (comma == std::string::npos || !parse(view.substr(0, comma), maturity) || !parse(view.substr(comma + 1), rate)) {
      throw CsvError("row " + std::to_string(row) + ": malformed line '" + line + "'", row);
    }
    curve.maturities.push_back(maturity);
    curve.rates.push_back(rate);
  }
  if (!header || curve.maturities.empty()) throw CsvError("market curve is empty", 0);
  return curve;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw OutputError("cannot write " + path.string());
  out_.imbue(std::locale::classic());
  out_ << header << '\n';
}

void CsvWriter::separate() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::operator<<(double value) {
  separate();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::uint64_t value) {
  separate();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view value) {
  separate();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw OutputError("failed writing " + path_.string());
}

}  // namespace jumpcurve
