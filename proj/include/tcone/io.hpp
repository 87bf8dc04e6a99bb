#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcone/gh.hpp"

namespace tcone {

using Json = nlohmann::json;

/// Malformed or unknown configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Overlays `user` on `defaults`. Every user key must exist in `defaults` with a
/// compatible type (any number for a number); objects merge recursively.
Json merge_config(const Json& defaults, const Json& user, const std::string& where = "");
Json load_json_file(const std::filesystem::path& path);

/// Axis specifications: "lo:hi:n" (linear), "log:lo:hi:n" (log-spaced),
/// "tlog:lo:hi:n" (exp of linear nodes) or a comma separated list of values.
std::vector<double> parse_axis_spec(const std::string& spec);
/// Applies "axis=spec" to cfg["grid"][axis]; the axis must already exist.
void apply_grid_override(Json& cfg, const std::string& assignment);

/// Shortest round-trip decimal form.
std::string format_double(double v);
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// CSV with "# key: value" metadata lines before the header row.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_meta(std::string key, std::string value);
  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> values);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
};

/// One header line "N=<n>,digest=<fnv1a64 of the provenance>" followed by N rows.
void write_distance_matrix(const std::filesystem::path& path, const FiniteMetricSpace& space);
/// Reads and validates a matrix written by write_distance_matrix.
FiniteMetricSpace read_distance_matrix(const std::filesystem::path& path);

struct PlotSpec {
  std::string csv;                 // file name relative to the script
  std::string x;
  std::vector<std::string> y;
  std::string title;
  bool log_x = false;
  bool zero_line = false;
};

/// Matplotlib script plotting `y` against `x` from the CSV next to it.
std::string plot_script(const PlotSpec& spec);
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace tcone
