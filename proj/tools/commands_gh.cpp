#include <ostream>

#include "commands_internal.hpp"
#include "tcone/gh.hpp"

namespace tcone::cli {

Json gh_defaults() {
  return Json{{"mode", "experiment"},
              {"x", ""},
              {"y", ""},
              {"stages", 48},
              {"sigma", 0.05},
              {"points", 300},
              {"degree", 10},
              {"oversample", 16},
              {"iterations", 4},
              {"own_threshold", 0.05},
              {"other_threshold", 0.1},
              {"grid", {{"tolerance", "0.2,0.1,0.05,0.03"}}}};
}

namespace {

int run_matrices(const Context& ctx) {
  if (ctx.text("x").empty() || ctx.text("y").empty()) throw ConfigError("mode 'matrices' needs both x and y paths");
  const FiniteMetricSpace X = read_distance_matrix(ctx.text("x"));
  const FiniteMetricSpace Y = read_distance_matrix(ctx.text("y"));
  const GHBoundPair b = gh_bounds(X, Y, ctx.integer("iterations"));
  CsvTable t = ctx.table({"nx", "ny", "lower", "upper", "exact", "lower_method", "upper_method"});
  t.add_meta("x_provenance", X.provenance);
  t.add_meta("y_provenance", Y.provenance);
  t.add_row(std::vector<std::string>{std::to_string(X.size()), std::to_string(Y.size()), format_double(b.lower),
                                     format_double(b.upper), b.exact ? "1" : "0", b.lower_method, b.upper_method});
  ctx.save("gh_bounds.csv", t);
  CsvTable w = ctx.table({"x", "y"});
  for (const auto& [i, j] : b.witness) w.add_row(std::vector<std::string>{std::to_string(i), std::to_string(j)});
  ctx.save("gh_witness.csv", w);
  ctx.log << "gh: bounds [" << format_double(b.lower) << ", " << format_double(b.upper) << "]"
          << (b.exact ? " (exact upper)" : "") << "\n";
  return kOk;
}

int run_experiment(const Context& ctx) {
  ConeExperimentSpec spec;
  spec.stages = ctx.integer("stages");
  spec.sigma = ctx.num("sigma");
  spec.sampling.points = ctx.integer("points");
  spec.sampling.degree = ctx.integer("degree");
  spec.sampling.oversample = ctx.integer("oversample");
  spec.sampling.seed = ctx.cfg.at("seed").get<std::uint64_t>();
  spec.iterations = ctx.integer("iterations");
  spec.own_threshold = ctx.num("own_threshold");
  spec.other_threshold = ctx.num("other_threshold");
  spec.tolerances = ctx.axis("tolerance");
  const ConeExperimentReport rep = tangent_cone_experiment(spec);

  const std::size_t nt = spec.targets.size();
  CsvTable targets = ctx.table({"index", "label", "u", "diameter", "final_own_upper", "final_other_lower"});
  for (std::size_t k = 0; k < nt; ++k)
    targets.add_row(std::vector<std::string>{std::to_string(k), spec.targets[k].label, format_double(spec.targets[k].u),
                                             format_double(rep.target_diameters[k]),
                                             format_double(rep.final_own_upper[k]),
                                             format_double(rep.final_other_lower[k])});
  targets.add_meta("own_threshold", format_double(spec.own_threshold));
  targets.add_meta("other_threshold", format_double(spec.other_threshold));
  targets.add_meta("demonstrated", rep.demonstrated ? "1" : "0");
  ctx.save("gh_targets.csv", targets);

  std::vector<std::string> cols{"target", "tolerance", "path_time", "loglogL", "u", "h", "closeness"};
  for (std::size_t j = 0; j < nt; ++j) {
    cols.push_back("lower_" + std::to_string(j));
    cols.push_back("upper_" + std::to_string(j));
  }
  CsvTable rows = ctx.table(cols);
  for (const auto& r : rep.rows) {
    std::vector<double> v{static_cast<double>(r.target), r.tolerance, r.path_time, r.loglogL, r.u, r.h, r.closeness};
    for (const auto& b : r.bounds) {
      v.push_back(b.lower);
      v.push_back(b.upper);
    }
    rows.add_row(v);
  }
  ctx.save("gh_experiment.csv", rows);
  ctx.plot("plot_gh.py", {"gh_experiment.csv", "tolerance", {"upper_0", "lower_1", "upper_1", "lower_0"},
                          "GH bounds along the scale sequences", true, false});

  for (std::size_t k = 0; k < nt; ++k)
    write_distance_matrix(ctx.out / ("target_" + std::to_string(k) + ".csv"), rep.targets[k]);

  ctx.log << "gh: own upper";
  for (double v : rep.final_own_upper) ctx.log << " " << format_double(v);
  ctx.log << ", other lower";
  for (double v : rep.final_other_lower) ctx.log << " " << format_double(v);
  ctx.log << (rep.demonstrated ? " (distinct limits demonstrated)" : " (NOT demonstrated)") << "\n";
  return rep.demonstrated ? kOk : kCheckFailed;
}

}  // namespace

int run_gh(const Context& ctx) {
  const std::string mode = ctx.text("mode");
  if (mode == "matrices") return run_matrices(ctx);
  if (mode == "experiment") return run_experiment(ctx);
  throw ConfigError("mode must be 'experiment' or 'matrices'");
}

}  // namespace tcone::cli
