#include "commands.hpp"

#include <functional>
#include <map>
#include <ostream>

#include "commands_internal.hpp"

namespace tcone::cli {

namespace {

struct Entry {
  std::function<Json()> defaults;
  std::function<int(const Context&)> run;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"lemma-verify", {lemma_verify_defaults, run_lemma_verify}},
      {"lemma-search", {lemma_search_defaults, run_lemma_search}},
      {"example1", {example1_defaults, run_example1}},
      {"example2", {example2_defaults, run_example2}},
      {"cobordism", {cobordism_defaults, run_cobordism}},
      {"gh", {gh_defaults, run_gh}},
      {"oracle-crosscheck", {crosscheck_defaults, run_crosscheck}},
  };
  return r;
}

const Entry& entry(const std::string& command) {
  const auto it = registry().find(command);
  if (it == registry().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"lemma-verify", "lemma-search", "example1", "example2",
                                              "cobordism",    "gh",           "oracle-crosscheck"};
  return names;
}

Json default_config(const std::string& command) {
  Json cfg = entry(command).defaults();
  cfg["command"] = command;
  if (!cfg.contains("seed")) cfg["seed"] = std::uint64_t{1};
  return cfg;
}

Json resolve_config(const std::string& command, const std::optional<std::filesystem::path>& config_file,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& grid_overrides) {
  Json cfg = default_config(command);
  if (config_file) cfg = merge_config(cfg, load_json_file(*config_file));
  if (cfg.at("command") != command)
    throw ConfigError("config was written for '" + cfg.at("command").get<std::string>() + "', not '" + command + "'");
  const Json& s = cfg.at("seed");
  if (!(s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0)))
    throw ConfigError("seed must be a non-negative integer");
  if (seed) cfg["seed"] = *seed;
  for (const auto& g : grid_overrides) apply_grid_override(cfg, g);
  if (cfg.contains("grid"))
    for (const auto& [axis, spec] : cfg["grid"].items()) parse_axis_spec(spec.get<std::string>());
  return cfg;
}

int run(const std::string& command, const Json& config, const std::filesystem::path& out, std::ostream& log) {
  const Entry& e = entry(command);
  const std::string echo = config.dump();
  write_text(out / "config.json", config.dump(2) + "\n");
  log << "# config: " << echo << "\n";
  Context ctx{command, config, out, log};
  const int code = e.run(ctx);
  log << "# exit: " << code << "\n";
  return code;
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

CsvTable Context::table(std::vector<std::string> columns) const {
  CsvTable t;
  t.add_meta("command", command);
  t.add_meta("config", cfg.dump());
  t.columns = std::move(columns);
  return t;
}

void Context::save(const std::string& name, const CsvTable& t) const { t.write(out / name); }

void Context::plot(const std::string& name, const PlotSpec& spec) const { write_text(out / name, plot_script(spec)); }

double Context::num(const std::string& key) const {
  const Json& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int Context::integer(const std::string& key) const {
  const Json& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string Context::text(const std::string& key) const {
  const Json& v = cfg.at(key);
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> Context::axis(const std::string& name) const {
  return parse_axis_spec(cfg.at("grid").at(name).get<std::string>());
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

}  // namespace tcone::cli
