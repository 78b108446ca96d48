#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jumpcurve/calibration.hpp"
#include "jumpcurve/model.hpp"
#include "jumpcurve/multicurve.hpp"

namespace jumpcurve {

/// Unreadable or malformed input: missing file, bad JSON, wrong schema.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An output file that cannot be created or written.
class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A well-formed CSV whose contents are unusable, e.g. a malformed row.
class CsvError : public std::runtime_error {
public:
  CsvError(const std::string& what, std::size_t row) : std::runtime_error(what), row_(row) {}
  /// 1-based line number in the file; 0 when not tied to a row.
  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

struct RunConfig {
  int version = 1;
  ModelSpec model;
  std::optional<DualCurveSpec> dual;
  double tenor = 0.25;
  std::optional<std::uint64_t> seed;
  std::size_t paths = 1000;
  std::vector<double> grid;  ///< maturities for curves; defaults to 41 points on [0, horizon]
  std::size_t points_per_year = 12;
  std::filesystem::path output = ".";
};

/// Parses a JSON config document. Throws ParseError on syntax or schema errors;
/// parameter values are not validated here.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Shortest-of-17-significant-digits, locale-independent.
std::string format_double(double value);

/// Reads `maturity,forward_rate` rows. Throws ParseError when unreadable and
/// CsvError for empty files or malformed rows.
ForwardCurve read_forward_curve(const std::filesystem::path& path);

/// Comma-separated output with '\n' line endings and 17-digit doubles.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::string_view header);
  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(std::uint64_t value);
  CsvWriter& operator<<(std::string_view value);
  void end_row();
  void close();

private:
  void separate();
  std::ofstream out_;
  std::filesystem::path path_;
  bool row_started_ = false;
};

}  // namespace jumpcurve
