#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "commands_internal.hpp"
#include "tcone/crosscheck.hpp"
#include "tcone/example2.hpp"
#include "tcone/suspension.hpp"

namespace tcone::cli {

// ---------------------------------------------------------------------------
// example1
// ---------------------------------------------------------------------------

Json example1_defaults() {
  return Json{{"n", 3}, {"stages", 12}, {"sigma", 0.05}, {"quadrature_nodes", 24}, {"samples", 20},
              {"cover_per_segment", 2}};
}

int run_example1(const Context& ctx) {
  const int n = ctx.integer("n");
  if (n < 3) throw ConfigError("n must be at least 3");
  const int nodes = ctx.integer("quadrature_nodes");
  if (nodes < 2) throw ConfigError("quadrature_nodes must be at least 2");
  bool ok = true;

  CsvTable limits = ctx.table({"k", "t", "product", "expected_product", "closed_form_volume", "quadrature_volume",
                               "relative_error"});
  const double expected = std::exp2(-(n - 1.0));
  for (int k = 0; k <= n - 2; ++k) {
    const SuspensionSpec s = omega_boundary_limit(n, k);
    double prod = 1.0;
    for (double t : s.t) prod *= t;
    const double closed = suspension_volume(s);
    const double quad = chart_volume(suspension_chart(s), nodes);
    const double rel = std::abs(quad - closed) / closed;
    ok = ok && std::abs(prod - expected) <= 1e-14 * expected && rel <= 1e-8;
    limits.add_row(std::vector<std::string>{std::to_string(k), join(s.t), format_double(prod), format_double(expected),
                                            format_double(closed), format_double(quad), format_double(rel)});
  }
  ctx.save("example1_limits.csv", limits);

  const Example1 ex = build_example1_family(n, ctx.integer("stages"), ctx.num("sigma"));
  CsvTable visits = ctx.table({"index", "stage", "t", "position"});
  for (const auto& v : ex.path.visits())
    visits.add_row(std::vector<std::string>{std::to_string(v.index), std::to_string(v.stage), format_double(v.t),
                                            join(std::vector<double>(ex.path.points()[v.index].data(),
                                                                     ex.path.points()[v.index].data() +
                                                                         ex.path.points()[v.index].size()))});
  ctx.save("example1_path.csv", visits);

  const std::vector<double> times = path_cover_times(ex.path, ctx.integer("cover_per_segment"));
  const FamilyCheck c = check_family(ex.family, times,
                                     box_samples(ex.family.box_lo, ex.family.box_hi, ctx.integer("samples")));
  CsvTable hyp = ctx.table({"quantity", "value"});
  auto row = [&](const std::string& k, double v) { hyp.add_row(std::vector<std::string>{k, format_double(v)}); };
  row("ricci_margin", c.ricci_margin);
  row("trace_defect", c.trace_defect);
  row("gs_norm", c.gs_norm);
  row("gss_norm", c.gss_norm);
  row("nabla_gs_norm", c.nabla_gs_norm);
  row("samples", c.samples);
  row("path_max_speed", ex.path.max_speed());
  row("path_end_time", ex.path.end_time());
  ctx.save("example1_family.csv", hyp);
  ctx.plot("plot_example1_path.py", {"example1_path.csv", "t", {"stage"}, "path visits", false, false});

  const bool family_ok = c.ricci_ok() && c.trace_ok() && c.derivatives_ok();
  ctx.log << "example1 n=" << n << ": limits " << (ok ? "ok" : "FAILED") << ", family hypotheses "
          << (family_ok ? "ok" : "FAILED") << " (ricci margin " << format_double(c.ricci_margin) << ")\n";
  return ok && family_ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// example2
// ---------------------------------------------------------------------------

Json example2_defaults() {
  return Json{{"stage", "step1"},  {"b0", 0.1},       {"ell", 0.0},
              {"delta", 0.0},      {"smoothing", 0.1}, {"r_nodes", 200},
              {"grid", {{"t", "0.1,0.25,0.5,0.75,1"}}}};
}

int run_example2(const Context& ctx) {
  ExampleIISpec spec;
  const std::string stage = ctx.text("stage");
  if (stage == "step1")
    spec.stage = Stage::Step1;
  else if (stage == "step2")
    spec.stage = Stage::Step2;
  else
    throw ConfigError("stage must be 'step1' or 'step2'");
  spec.b0 = ctx.num("b0");
  spec.ell = ctx.num("ell");
  spec.delta = ctx.num("delta");
  spec.smoothing = ctx.num("smoothing");
  spec.r_nodes = ctx.integer("r_nodes");
  spec.t_grid = ctx.axis("t");
  spec.validate();
  const StepOneConstants k = step_one_constants(spec);

  CsvTable t = ctx.table({"t", "ell", "volume", "ricci_min", "collar_ricci_min", "eta", "glue_margin_min",
                          "glue_feasible", "pieces"});
  t.add_meta("lambda1", format_double(k.lambda1));
  t.add_meta("delta", format_double(k.delta));
  t.add_meta("ell_bar", format_double(k.ell_bar));
  bool ok = true;
  for (double tv : spec.t_grid) {
    const ExampleIIMetric m = example2_family(spec, k, tv);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& g : m.glues) margin = std::min(margin, g.margin_dimless);
    std::string labels;
    for (const auto& p : m.pieces) labels += (labels.empty() ? "" : ";") + p.label;
    const bool row_ok = m.ricci_min > 0.0 && m.collar_ricci_min > 0.0 && m.glue_feasible();
    ok = ok && row_ok;
    t.add_row(std::vector<std::string>{format_double(tv), format_double(m.ell), format_double(m.volume),
                                       format_double(m.ricci_min), format_double(m.collar_ricci_min),
                                       format_double(m.eta), format_double(margin), m.glue_feasible() ? "1" : "0",
                                       labels});
  }
  ctx.save("example2.csv", t);
  ctx.plot("plot_example2.py", {"example2.csv", "t", {"eta", "glue_margin_min"}, "Example II bounds", false, true});
  ctx.log << "example2 " << stage << ": " << spec.t_grid.size() << " metrics, " << (ok ? "all positive and glued" : "FAILED")
          << "\n";
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// cobordism
// ---------------------------------------------------------------------------

Json cobordism_defaults() {
  return Json{{"s_nodes", 40}, {"r_nodes", 40}, {"grid", {{"b", "0.05,0.1,0.2"}, {"e0", "0.1,0.2,0.3,0.4"}}}};
}

int run_cobordism(const Context& ctx) {
  const int sn = ctx.integer("s_nodes"), rn = ctx.integer("r_nodes");
  if (sn < 2 || rn < 2) throw ConfigError("s_nodes and r_nodes must be at least 2");
  const CobordismSearch res = cobordism_search(ctx.axis("b"), ctx.axis("e0"), sn, rn);
  const ClosabilityCheck& c = res.best;
  CsvTable t = ctx.table({"quantity", "value"});
  t.add_meta("found", res.found ? "1" : "0");
  t.add_meta("candidates", std::to_string(res.candidates));
  t.add_meta("glue_note", c.glue_note.empty() ? "-" : c.glue_note);
  auto row = [&](const std::string& k, double v) { t.add_row(std::vector<std::string>{k, format_double(v)}); };
  row("b0", c.pieces.b0);
  row("b1", c.pieces.b1);
  row("e0", c.pieces.e0);
  row("s0", c.pieces.s0);
  row("c1_ricci_min", c.c1_grid.minimum);
  row("c2_ricci_min", c.c2_grid.minimum);
  row("c2_boundary_min_shape", c.c2_boundary.min_shape());
  row("glue_margin", c.glue ? c.glue->margin : std::numeric_limits<double>::quiet_NaN());
  row("glue_margin_dimless", c.glue ? c.glue->margin_dimless : std::numeric_limits<double>::quiet_NaN());
  row("c1_ok", c.c1_ok());
  row("c2_ok", c.c2_ok());
  row("sff_ok", c.sff_ok());
  row("glue_ok", c.glue_ok());
  ctx.save("cobordism.csv", t);
  ctx.log << "cobordism: " << res.candidates << " candidates, " << (res.found ? "closable" : "NOT closable")
          << "; best C1 min " << format_double(c.c1_grid.minimum) << ", C2 min " << format_double(c.c2_grid.minimum)
          << ", glue margin " << (c.glue ? format_double(c.glue->margin_dimless) : std::string("n/a")) << "\n";
  return res.found ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// oracle-crosscheck
// ---------------------------------------------------------------------------

Json crosscheck_defaults() { return Json{{"draws", 100}}; }

int run_crosscheck(const Context& ctx) {
  constexpr double kTolerance = 1e-5;
  const int draws = ctx.integer("draws");
  if (draws < 1) throw ConfigError("draws must be positive");
  const CrosscheckReport rep = oracle_crosscheck(draws, ctx.cfg.at("seed").get<std::uint64_t>());
  CsvTable t = ctx.table({"ansatz", "draw", "max_rel_error", "worst_component", "parameters"});
  t.add_meta("tolerance", format_double(kTolerance));
  for (const auto& r : rep.rows)
    t.add_row(std::vector<std::string>{r.ansatz, std::to_string(r.draw), format_double(r.max_rel_error),
                                       r.worst_component, join(r.parameters)});
  ctx.save("crosscheck.csv", t);
  ctx.plot("plot_crosscheck.py", {"crosscheck.csv", "draw", {"max_rel_error"}, "oracle relative error", false, false});
  ctx.log << "oracle-crosscheck: worst relative error " << format_double(rep.worst) << " over " << rep.rows.size()
          << " draws\n";
  return rep.passed(kTolerance) ? kOk : kCheckFailed;
}

}  // namespace tcone::cli
