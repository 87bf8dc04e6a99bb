#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

#include "commands.hpp"
#include "tcone/warp.hpp"

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> grid;
};

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d{
      {"lemma-verify", "Directional Ricci grid of the cone construction for one parameter set"},
      {"lemma-search", "Sweep (E, F, r0) until the directional Ricci grid is positive"},
      {"example1", "Boundary limits, volumes, path and family hypotheses of the suspension family"},
      {"example2", "Glued Berger metrics of the bubble/football construction"},
      {"cobordism", "Closability of the 5-d cobordism pieces"},
      {"gh", "Gromov-Hausdorff bounds: tangent cone experiment or two stored matrices"},
      {"oracle-crosscheck", "Analytic Berger and 5-d Ricci versus the finite-difference oracle"},
  };
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tcone;
  CLI::App app{"Ricci-positive cone constructions and their tangent cones"};
  app.require_subcommand(1);
  std::map<std::string, Options> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : cli::command_names()) {
    Options& o = opts[name];
    o.out = "tcone-out/" + name;
    CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
    sub->add_option("--config", o.config, "JSON config; unknown keys are rejected")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Random seed (overrides the config)");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--grid", o.grid, "Grid axis override axis=spec, spec = [lin|log|tlog:]lo:hi:n or v1,v2,...");
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }
  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    const Options& o = opts[name];
    try {
      std::optional<std::filesystem::path> cfg_file;
      if (!o.config.empty()) cfg_file = o.config;
      std::optional<std::uint64_t> seed;
      if (sub->count("--seed")) seed = o.seed;
      const Json cfg = cli::resolve_config(name, cfg_file, seed, o.grid);
      return cli::run(name, cfg, o.out, std::cout);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return cli::kConfigError;
    } catch (const DomainError& e) {
      std::cerr << "invalid parameters: " << e.what() << "\n";
      return cli::kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return cli::kCheckFailed;
    }
  }
  return cli::kConfigError;
}
