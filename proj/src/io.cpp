#include "tcone/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tcone/curvature.hpp"

namespace tcone {

namespace {

bool compatible(const Json& def, const Json& val) {
  if (def.is_number()) return val.is_number();
  return def.type() == val.type();
}

double parse_number(const std::string& s, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("axis spec '" + spec + "': '" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("axis spec '" + spec + "': '" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

Json merge_config(const Json& defaults, const Json& user, const std::string& where) {
  if (!user.is_object()) throw ConfigError("config" + where + ": expected an object");
  Json out = defaults;
  for (const auto& [key, val] : user.items()) {
    const std::string path = where + "." + key;
    if (!defaults.contains(key)) throw ConfigError("unknown config key '" + path.substr(1) + "'");
    const Json& def = defaults.at(key);
    if (def.is_object()) {
      out[key] = merge_config(def, val, path);
    } else if (!compatible(def, val)) {
      throw ConfigError("config key '" + path.substr(1) + "' has type " + val.type_name() + ", expected " +
                        def.type_name());
    } else {
      out[key] = val;
    }
  }
  return out;
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

std::vector<double> parse_axis_spec(const std::string& spec) {
  if (spec.empty()) throw ConfigError("empty axis spec");
  if (spec.find(':') == std::string::npos) {
    std::vector<double> v;
    for (const auto& part : split(spec, ',')) v.push_back(parse_number(part, spec));
    return v;
  }
  auto parts = split(spec, ':');
  std::string kind = "lin";
  if (parts.size() == 4) {
    kind = parts.front();
    parts.erase(parts.begin());
  }
  if (parts.size() != 3 || (kind != "lin" && kind != "log" && kind != "tlog"))
    throw ConfigError("axis spec '" + spec + "': expected [lin|log|tlog:]lo:hi:n");
  const double lo = parse_number(parts[0], spec), hi = parse_number(parts[1], spec);
  const double n = parse_number(parts[2], spec);
  if (n < 1 || n != std::floor(n) || n > 1e7) throw ConfigError("axis spec '" + spec + "': bad node count");
  if (n > 1 && !(hi > lo)) throw ConfigError("axis spec '" + spec + "': need lo < hi");
  const int count = static_cast<int>(n);
  if (kind == "lin") return count == 1 ? std::vector<double>{lo} : linspace(lo, hi, count);
  if (kind == "log") {
    if (!(lo > 0.0)) throw ConfigError("axis spec '" + spec + "': log axis needs lo > 0");
    return count == 1 ? std::vector<double>{lo} : logspace(lo, hi, count);
  }
  std::vector<double> v = count == 1 ? std::vector<double>{lo} : linspace(lo, hi, count);
  for (double& x : v) x = std::exp(x);
  return v;
}

void apply_grid_override(Json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--grid expects axis=spec, got '" + assignment + "'");
  const std::string axis = assignment.substr(0, eq), spec = assignment.substr(eq + 1);
  if (!cfg.contains("grid") || !cfg["grid"].contains(axis))
    throw ConfigError("unknown grid axis '" + axis + "'");
  parse_axis_spec(spec);
  cfg["grid"][axis] = spec;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void CsvTable::add_meta(std::string key, std::string value) {
  for (char& c : value)
    if (c == '\n') c = ' ';
  meta.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> r;
  for (double v : values) r.push_back(format_double(v));
  add_row(std::move(r));
}

void CsvTable::add_row(std::vector<std::string> values) {
  if (values.size() != columns.size()) throw DomainError("CsvTable: row width does not match the header");
  rows.push_back(std::move(values));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_distance_matrix(const std::filesystem::path& path, const FiniteMetricSpace& space) {
  std::ostringstream os;
  const int n = space.size();
  os << "N=" << n << ",digest=" << hex64(fnv1a64(space.provenance)) << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) os << (j ? "," : "") << format_double(space.D(i, j));
    os << '\n';
  }
  write_text(path, os.str());
}

FiniteMetricSpace read_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read distance matrix " + path.string());
  std::string header;
  std::getline(in, header);
  int n = 0;
  char digest[17] = {};
  if (std::sscanf(header.c_str(), "N=%d,digest=%16[0-9a-f]", &n, digest) != 2 || n < 1)
    throw ConfigError("distance matrix " + path.string() + ": malformed header");
  Eigen::MatrixXd D(n, n);
  std::string line;
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ConfigError("distance matrix " + path.string() + ": too few rows");
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != n)
      throw ConfigError("distance matrix " + path.string() + ": row " + std::to_string(i) + " has wrong width");
    for (int j = 0; j < n; ++j) D(i, j) = parse_number(cells[j], path.string());
  }
  while (std::getline(in, line))
    if (!line.empty()) throw ConfigError("distance matrix " + path.string() + ": trailing rows");
  try {
    FiniteMetricSpace s = FiniteMetricSpace::from_matrix(std::move(D), std::string("digest:") + digest);
    return s;
  } catch (const DomainError& e) {
    throw ConfigError("distance matrix " + path.string() + ": " + e.what());
  }
}

std::string plot_script(const PlotSpec& spec) {
  std::ostringstream os;
  os << "import os\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n"
        "import pandas as pd\n\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n"
        "path = os.path.join(here, '"
     << spec.csv
     << "')\n"
        "data = pd.read_csv(path, comment='#')\n"
        "fig, ax = plt.subplots(figsize=(7, 4))\n";
  for (const auto& y : spec.y) os << "ax.plot(data['" << spec.x << "'], data['" << y << "'], '.-', label='" << y << "')\n";
  if (spec.log_x) os << "ax.set_xscale('log')\n";
  if (spec.zero_line) os << "ax.axhline(0.0, color='k', lw=0.5)\n";
  os << "ax.set_xlabel('" << spec.x << "')\n"
     << "ax.set_title('" << spec.title << "')\n"
     << "ax.legend()\n"
        "fig.tight_layout()\n"
        "fig.savefig(os.path.splitext(path)[0] + '.png', dpi=120)\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tcone
