#include <ostream>

#include "commands_internal.hpp"
#include "tcone/cone_family.hpp"
#include "tcone/suspension.hpp"

namespace tcone::cli {

namespace {

Json lemma_common() {
  return Json{
      {"family", "example1-loop"},
      {"n", 3},
      {"stages", 12},
      {"sigma", 0.05},
      {"samples", 50},
      {"cover_per_segment", 2},
      {"grid", {{"lnL", "tlog:1:4:200"}, {"delta", "0:1:101"}}},
  };
}

struct LemmaSetup {
  int n = 3;
  CrossSectionFamily family;
  DirectionalOptions grid;
};

LemmaSetup lemma_setup(const Context& ctx) {
  LemmaSetup s;
  s.n = ctx.integer("n");
  if (s.n < 3) throw ConfigError("n must be at least 3");
  const std::string family = ctx.text("family");
  std::vector<double> extra;
  if (family == "stationary-round") {
    s.family = round_sphere_family(s.n - 1, 1.0);
  } else if (family == "example1-loop") {
    const Example1 ex = build_example1_family(s.n, ctx.integer("stages"), ctx.num("sigma"));
    s.family = ex.family;
    extra = path_cover_times(ex.path, ctx.integer("cover_per_segment"));
  } else {
    throw ConfigError("family must be 'stationary-round' or 'example1-loop'");
  }
  s.grid.lnL_nodes = ctx.axis("lnL");
  s.grid.delta_nodes = ctx.axis("delta");
  for (double d : s.grid.delta_nodes)
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("delta nodes must lie in [0, 1]");
  for (double l : s.grid.lnL_nodes)
    if (!(l > 1.0)) throw ConfigError("lnL nodes must exceed 1");
  s.grid.x_samples = box_samples(s.family.box_lo, s.family.box_hi, ctx.integer("samples"));
  s.grid.extra_s = std::move(extra);
  return s;
}

void write_report(const Context& ctx, const std::string& stem, const LemmaParams& p, const DirectionalReport& rep,
                  const std::vector<std::pair<std::string, std::string>>& extra_meta) {
  CsvTable profile = ctx.table({"lnL", "grid_min", "exact_min"});
  profile.add_meta("E", format_double(p.E));
  profile.add_meta("F", format_double(p.F));
  profile.add_meta("r0", format_double(p.r0));
  profile.add_meta("D", format_double(p.D));
  profile.add_meta("h_inf", format_double(p.h_inf));
  for (const auto& [k, v] : extra_meta) profile.add_meta(k, v);
  const auto& nodes = rep.grid.axes.at(0).nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    profile.add_row({nodes[i], rep.grid.first_axis_minima.at(i), rep.exact.first_axis_minima.at(i)});
  ctx.save(stem + "_profile.csv", profile);

  CsvTable summary = ctx.table({"quantity", "value"});
  auto row = [&](const std::string& k, double v) { summary.add_row(std::vector<std::string>{k, format_double(v)}); };
  row("grid_minimum", rep.grid.minimum);
  row("grid_slack", rep.grid.slack);
  row("grid_lower", rep.grid.lower());
  row("grid_argmin_lnL", rep.grid.argmin.at(0));
  row("grid_argmin_delta", rep.grid.argmin.at(1));
  row("exact_minimum", rep.exact.minimum);
  row("exact_lower", rep.exact.lower());
  row("raw_minimum", rep.raw_minimum);
  row("case_tangential_min", rep.case_tangential_min);
  row("case_radial_min", rep.case_radial_min);
  row("d_estimate", rep.d_estimate);
  row("case_condition", p.case_condition() ? 1.0 : 0.0);
  row("positive", rep.positive() ? 1.0 : 0.0);
  ctx.save(stem + "_summary.csv", summary);

  ctx.plot("plot_" + stem + ".py", {stem + "_profile.csv", "lnL", {"grid_min", "exact_min"},
                                    "normalized directional Ricci minimum", true, true});
}

LemmaParams resolve_params(const Context& ctx, int n) {
  LemmaParams p = LemmaParams::defaults(n);
  const Json& j = ctx.cfg.at("params");
  auto take = [&](const char* key, double& field) {
    const double v = j.at(key).get<double>();
    if (v >= 0.0) field = v;
  };
  take("E", p.E);
  take("F", p.F);
  take("r0", p.r0);
  take("h_inf", p.h_inf);
  take("D", p.D);
  p.n = n;
  p.validate();
  return p;
}

}  // namespace

Json lemma_verify_defaults() {
  Json j = lemma_common();
  j["params"] = {{"E", -1}, {"F", -1}, {"r0", -1}, {"h_inf", -1}, {"D", -1}};
  return j;
}

Json lemma_search_defaults() {
  Json j = lemma_common();
  j["search"] = {{"F_start", 0.5}, {"F_ratio", 0.5}, {"F_steps", 12}, {"E_ratio", 2.0},
                 {"r0_list", {1e-2, 1e-4}}, {"D", -1}, {"h_inf", 0.9}};
  return j;
}

int run_lemma_verify(const Context& ctx) {
  const LemmaSetup s = lemma_setup(ctx);
  ConeMetric cone;
  cone.params = resolve_params(ctx, s.n);
  cone.family = s.family;
  const DirectionalReport rep = directional_ricci_min(cone, s.grid);
  write_report(ctx, "lemma", cone.params, rep, {});
  ctx.log << "lemma-verify " << ctx.text("family") << ": grid min " << format_double(rep.grid.minimum)
          << " (lower " << format_double(rep.grid.lower()) << "), exact min " << format_double(rep.exact.minimum)
          << (rep.positive() ? " positive" : " NOT positive") << "\n";
  return rep.positive() ? kOk : kCheckFailed;
}

int run_lemma_search(const Context& ctx) {
  const LemmaSetup s = lemma_setup(ctx);
  const Json& j = ctx.cfg.at("search");
  SearchOptions o;
  o.F_start = j.at("F_start").get<double>();
  o.F_ratio = j.at("F_ratio").get<double>();
  if (!j.at("F_steps").is_number_integer()) throw ConfigError("search.F_steps must be an integer");
  o.F_steps = j.at("F_steps").get<int>();
  o.E_ratio = j.at("E_ratio").get<double>();
  o.r0_list.clear();
  for (const auto& v : j.at("r0_list")) {
    if (!v.is_number()) throw ConfigError("search.r0_list must hold numbers");
    o.r0_list.push_back(v.get<double>());
  }
  o.D = j.at("D").get<double>();
  o.h_inf = j.at("h_inf").get<double>();
  o.grid = s.grid;
  if (o.F_steps <= 0 || o.r0_list.empty()) {
    ctx.log << "lemma-search: empty sweep\n";
    return kConfigError;
  }
  const SearchResult res = feasibility_search(s.n, s.family, o);
  if (res.candidates == 0) {
    ctx.log << "lemma-search: sweep contains no candidate with E >= D F\n";
    return kConfigError;
  }
  write_report(ctx, "search", res.params, res.report,
               {{"feasible", res.feasible ? "1" : "0"},
                {"candidates", std::to_string(res.candidates)},
                {"most_violated", res.most_violated}});
  ctx.log << "lemma-search: " << (res.feasible ? "feasible" : "exhausted") << " after " << res.candidates
          << " candidates; E=" << format_double(res.params.E) << " F=" << format_double(res.params.F)
          << " r0=" << format_double(res.params.r0) << "\n";
  return res.feasible ? kOk : kCheckFailed;
}

}  // namespace tcone::cli
