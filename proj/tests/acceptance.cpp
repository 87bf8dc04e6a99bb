// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a
// criterion fails that is not listed in kKnownFailures (or any failure with --strict).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gh_oracle.hpp"
#include "tcone/charts.hpp"
#include "tcone/cone_family.hpp"
#include "tcone/crosscheck.hpp"
#include "tcone/example2.hpp"
#include "tcone/gh.hpp"
#include "tcone/io.hpp"
#include "tcone/suspension.hpp"

using namespace tcone;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Criteria whose failure is analysed and expected: the C¹–C² glue has a
// dimensionless margin of about -1 for every parameter choice.
const std::set<int> kKnownFailures{7};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) { return format_double(v); }

std::string join_t(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const CrosscheckReport rep = oracle_crosscheck(100, 20240101);
  const double secs = seconds_since(t0);
  int berger = 0, five = 0;
  for (const auto& r : rep.rows) (r.ansatz == "berger" ? berger : five)++;
  const bool ok = berger == 100 && five == 100 && rep.passed(1e-5) && secs < 60.0;
  return {ok, "worst rel err " + fmt(rep.worst) + " over " + std::to_string(berger) + "+" + std::to_string(five) +
                  " draws, " + fmt(secs) + " s"};
}

Outcome closed_forms() {
  const FdOptions kFd{2e-3, true};
  double worst_football = 0.0;
  const Football fb = football(1.0, 0.05);
  for (double r : linspace(fb.ansatz.r.lo, fb.ansatz.r.hi, 202)) {
    if (!fb.ansatz.r.contains(r)) continue;
    const BergerRicci ric = ricci_berger(fb.ansatz, r);
    for (double v : {ric.rr, ric.xx, ric.yy, ric.zz}) worst_football = std::max(worst_football, rel(v, 12.0));
  }
  for (double r : {0.2, 0.5, 0.8, 1.1, 1.4}) {
    Eigen::VectorXd x(4);
    x << r, kEulerTheta, kEulerPhi, kEulerPsi;
    const Eigen::MatrixXd fr = to_frame(ricci_fd_oracle(berger_chart(fb.ansatz), x, kFd), berger_frame(fb.ansatz, x));
    worst_football = std::max(worst_football, (fr - 12.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() / 12.0);
  }
  double worst_susp = 0.0;
  for (int n : {3, 4, 5})
    for (double t : {0.25, 0.5, 1.0}) {
      SuspensionSpec s;
      s.n = n;
      s.t.assign(n - 1, t);
      const MetricField chart = suspension_chart(s);
      for (double a : {0.7, 1.1, 1.9}) {
        Eigen::VectorXd x = Eigen::VectorXd::Constant(n - 1, a);
        x[n - 2] = 0.3;
        const Eigen::MatrixXd g = chart.at(x);
        const Eigen::MatrixXd ric = ricci_fd_oracle(chart, x, kFd);
        const Eigen::MatrixXd op = g.ldlt().solve(ric);
        const double expect = (n - 2) / (t * t);
        worst_susp = std::max(worst_susp, (op - expect * Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff() / expect);
      }
    }
  return {worst_football <= 1e-6 && worst_susp <= 1e-6,
          "football rel err " + fmt(worst_football) + ", suspension rel err " + fmt(worst_susp)};
}

Outcome lemma_search() {
  const auto t0 = Clock::now();
  const Example1 ex = build_example1_family(3, 12, 0.05);
  SearchOptions o;
  o.grid = DirectionalOptions::defaults(ex.family);
  o.grid.lnL_nodes = triple_log_nodes(1.0, 4.0, 200);  // 200 log-spaced radii in log log L
  o.grid.delta_nodes = linspace(0.0, 1.0, 101);
  o.grid.x_samples = box_samples(ex.family.box_lo, ex.family.box_hi, 50);
  o.grid.extra_s = path_cover_times(ex.path, 2);
  const SearchResult res = feasibility_search(3, ex.family, o);
  const double secs = seconds_since(t0);
  const bool ok = res.feasible && res.report.grid.lower() >= 0.0 && res.report.exact.lower() >= 0.0 && secs < 600.0;
  return {ok, "E=" + fmt(res.params.E) + " F=" + fmt(res.params.F) + " r0=" + fmt(res.params.r0) + ", grid min " +
                  fmt(res.report.grid.minimum) + " - slack " + fmt(res.report.grid.slack) + " = " +
                  fmt(res.report.grid.lower()) + ", " + std::to_string(res.candidates) + " candidate(s), " + fmt(secs) +
                  " s"};
}

Outcome profile_limits() {
  const LemmaParams p = LemmaParams::defaults(3);
  bool monotone = true;
  double prev_h = -1.0, prev_q = std::numeric_limits<double>::infinity();
  double last_h = 0.0, last_q = 0.0;
  int terms = 0;
  for (double q : {0.5, 0.1}) {
    prev_h = -1.0;
    prev_q = std::numeric_limits<double>::infinity();
    // r_k = q^k r_1: L grows by log(1/q) per step; dense prefix, then a sparse tail.
    const double L1 = std::exp(std::exp(1.0)) + 1.0;
    std::vector<double> ks;
    for (int k = 0; k <= 2000; ++k) ks.push_back(k);
    for (int j = 7; j <= 250; ++j) ks.push_back(std::pow(10.0, j / 2.0));
    for (double k : ks) {
      const ProfileJet pj = near_profile(L1 + k * std::log(1.0 / q), p);
      monotone = monotone && pj.h > prev_h && pj.q1 < prev_q && pj.h < 1.0 && pj.q1 > 0.0;
      prev_h = pj.h;
      prev_q = pj.q1;
      last_h = pj.h;
      last_q = pj.q1;
      ++terms;
    }
  }
  double case_min = std::numeric_limits<double>::infinity();
  for (double lnL : triple_log_nodes(1.0, 4.0, 200))
    for (double d : linspace(0.0, 1.0, 101))
      case_min = std::min({case_min, case_bound_tangential(std::exp(lnL), d, p), case_bound_radial(std::exp(lnL), d, p)});
  const bool ok = monotone && 1.0 - last_h < 1e-2 && last_q < 1e-100 && case_min >= 0.0 && p.case_condition();
  return {ok, std::to_string(terms) + " terms monotone=" + (monotone ? std::string("yes") : std::string("no")) +
                  ", final 1-h " + fmt(1.0 - last_h) + ", final r f' " + fmt(last_q) + ", case bound min " +
                  fmt(case_min) + ", E=" + fmt(p.E) + " >= D F=" + fmt(p.D * p.F)};
}

Outcome volumes() {
  double worst = 0.0;
  const std::vector<std::vector<double>> cases{{0.5, 0.5}, {1.0, 0.25}, {0.9, 0.3}, {1.0, 0.7, 0.2}, {0.8, 0.8, 0.5, 0.4}};
  for (const auto& t : cases) {
    SuspensionSpec s;
    s.n = static_cast<int>(t.size()) + 1;
    s.t = t;
    const double closed = suspension_volume(s);
    worst = std::max(worst, rel(chart_volume(suspension_chart(s), 24), closed));
  }
  double prod_err = 0.0;
  for (int n : {3, 4, 5, 6})
    for (int k = 0; k <= n - 2; ++k) {
      double prod = 1.0;
      for (double t : omega_boundary_limit(n, k).t) prod *= t;
      prod_err = std::max(prod_err, rel(prod, std::exp2(-(n - 1.0))));
    }
  const SuspensionSpec a = omega_boundary_limit(3, 0), b = omega_boundary_limit(3, 1);
  const bool limits = a.t == std::vector<double>{0.5, 0.5} && b.t == std::vector<double>{1.0, 0.25};
  return {worst <= 1e-8 && prod_err <= 1e-14 && limits,
          "quadrature rel err " + fmt(worst) + ", product rel err " + fmt(prod_err) + ", n=3 limits (" + join_t(a.t) +
              ") and (" + join_t(b.t) + ")"};
}

Outcome example_two() {
  const double b0 = 0.1;
  const double r0 = solve_r_eps(0.0, b0);
  const BergerAnsatz flat = bubble(0.0, b0);
  const SliceGeometry sl = sff_slice(flat, r0, +1);
  double sff = 0.0;
  for (double v : sl.shape) sff = std::max(sff, std::abs(v));
  const GluePiece p = boundary_piece(flat, r0, +1, "B0");
  const GluePlan two = glue_check(p, p);
  bool ok = std::abs(r0 - M_PI / 4) < 1e-12 && sff < 1e-10 && two.feasible &&
            std::abs(two.margin_dimless) <= kGlueTolerance;

  double min_margin = std::numeric_limits<double>::infinity();
  double min_ricci = std::numeric_limits<double>::infinity();
  double min_collar = std::numeric_limits<double>::infinity();
  auto sweep = [&](ExampleIISpec spec, const std::vector<double>& ts) {
    spec.t_grid = ts;
    const StepOneConstants k = step_one_constants(spec);
    for (double t : ts) {
      const ExampleIIMetric m = example2_family(spec, k, t);
      for (const auto& g : m.glues) {
        min_margin = std::min(min_margin, g.margin_dimless);
        ok = ok && g.feasible;
      }
      min_ricci = std::min(min_ricci, m.ricci_min);
      min_collar = std::min(min_collar, m.collar_ricci_min);
    }
  };
  sweep(ExampleIISpec{}, {0.1, 0.25, 0.5, 0.75, 0.9, 1.0});
  sweep(ExampleIISpec::step2(b0), {1.0, 1.25, 1.5, 1.75, 1.9});
  ok = ok && min_margin > 0.0 && min_ricci > 0.0 && min_collar > 0.0;
  return {ok, "r_0=" + fmt(r0) + ", |SFF| " + fmt(sff) + ", B0+B0 margin " + fmt(two.margin_dimless) +
                  ", min family margin " + fmt(min_margin) + ", min Ricci " + fmt(min_ricci) + ", min collar Ricci " +
                  fmt(min_collar)};
}

Outcome cobordism() {
  const CobordismSearch res = cobordism_search({0.05, 0.1, 0.2}, {0.1, 0.2, 0.3, 0.4}, 40, 40);
  const ClosabilityCheck& c = res.best;
  std::string glue = c.glue ? fmt(c.glue->margin_dimless) : "none (" + c.glue_note + ")";
  return {res.found, "b=" + fmt(c.pieces.b0) + " e0=" + fmt(c.pieces.e0) + ": C1 min " + fmt(c.c1_grid.minimum) +
                         (c.c1_ok() ? " ok" : " bad") + ", C2 min " + fmt(c.c2_grid.minimum) +
                         (c.c2_ok() ? " ok" : " bad") + ", SFF min " + fmt(c.c2_boundary.min_shape()) +
                         (c.sff_ok() ? " ok" : " bad") + ", glue margin " + glue +
                         (c.glue_ok() ? " ok" : " infeasible")};
}

Outcome gh_exactness() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto planar = [&](int n) {
    std::vector<Eigen::Vector2d> p(n);
    for (auto& v : p) v = {U(rng), U(rng)};
    Eigen::MatrixXd D(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D(i, j) = (p[i] - p[j]).norm();
    return FiniteMetricSpace::from_matrix(D);
  };
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const FiniteMetricSpace X = planar(1 + trial % 6), Y = planar(1 + (trial / 6) % 6);
    const GHBoundPair b = gh_bounds(X, Y);
    worst = std::max(worst, std::abs(b.upper - testing::clique_oracle_gh(X, Y)));
    ok = ok && b.exact && b.lower <= b.upper;
    const GHBoundPair self = gh_bounds(X, X);
    const GHBoundPair pt = gh_bounds(X, FiniteMetricSpace::point());
    ok = ok && self.upper == 0.0 && self.lower == 0.0 && pt.upper == X.diameter() / 2 && pt.lower == X.diameter() / 2;
  }
  for (int n : {20, 60}) {
    const FiniteMetricSpace X = planar(n);
    const GHBoundPair pt = gh_bounds(X, FiniteMetricSpace::point());
    ok = ok && gh_bounds(X, X).upper == 0.0 && pt.upper == X.diameter() / 2 && pt.lower == X.diameter() / 2;
  }
  return {ok && worst <= 1e-12, "200 pairs of <= 6 points, max deviation from the clique oracle " + fmt(worst)};
}

Outcome nonuniqueness() {
  const auto t0 = Clock::now();
  const ConeExperimentReport rep = tangent_cone_experiment(ConeExperimentSpec{});
  const double secs = seconds_since(t0);
  const ConeExperimentSpec spec;
  std::string d = "own upper";
  for (double v : rep.final_own_upper) d += " " + fmt(v);
  d += " (< " + fmt(spec.own_threshold) + "), other lower";
  for (double v : rep.final_other_lower) d += " " + fmt(v);
  d += " (> " + fmt(spec.other_threshold) + "), " + fmt(secs) + " s";
  return {rep.demonstrated && secs < 1800.0, d};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t na = 0, nb = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++na;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
  }
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) ++nb;
  return na == nb && na > 0;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TCONE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome replay() {
  const fs::path root = fs::temp_directory_path() / "tcone_acceptance_replay";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Run {
    std::string command;
    std::string config;  // JSON overrides
    std::string seed;
  };
  const std::vector<Run> runs{
      {"lemma-verify", R"({"family": "example1-loop"})", "3"},
      {"lemma-search", R"({"family": "stationary-round", "grid": {"lnL": "tlog:1:4:50"}})", "4"},
      {"example1", "{}", "5"},
      {"example2", R"({"stage": "step2", "grid": {"t": "1,1.5,2"}})", "6"},
      {"cobordism", R"({"s_nodes": 20, "r_nodes": 20})", "7"},
      {"gh", R"({"points": 80, "stages": 24, "grid": {"tolerance": "0.2,0.1"}})", "8"},
      {"oracle-crosscheck", R"({"draws": 20})", "9"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const fs::path cfg = root / (r.command + ".json");
    std::ofstream(cfg) << r.config;
    const fs::path a = root / (r.command + "_a"), b = root / (r.command + "_b");
    const int ca = run_cli(r.command + " --config " + cfg.string() + " --seed " + r.seed + " --out " + a.string());
    const int cb = run_cli(r.command + " --config " + (a / "config.json").string() + " --out " + b.string());
    const bool same = ca == cb && (ca == 0 || ca == 1) && same_tree(a, b);
    ok = ok && same;
    detail += r.command + (same ? " ok" : " DIFFERS") + "; ";
  }
  const fs::path m = root / "gh_matrices";
  const fs::path mcfg = root / "gh_matrices.json";
  std::ofstream(mcfg) << R"({"mode": "matrices", "x": ")" << (root / "gh_a" / "target_0.csv").string()
                      << R"(", "y": ")" << (root / "gh_a" / "target_1.csv").string() << R"("})";
  const int c1 = run_cli("gh --config " + mcfg.string() + " --out " + (m / "a").string());
  const int c2 = run_cli("gh --config " + (m / "a" / "config.json").string() + " --out " + (m / "b").string());
  const bool same = c1 == 0 && c2 == 0 && same_tree(m / "a", m / "b");
  ok = ok && same;
  detail += std::string("gh matrices") + (same ? " ok" : " DIFFERS");
  fs::remove_all(root);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"closed-form Ricci", closed_forms},
      {"lemma feasibility search", lemma_search},
      {"profile limits and case bounds", profile_limits},
      {"suspension volumes and limits", volumes},
      {"Example II gluing", example_two},
      {"cobordism closability", cobordism},
      {"GH exactness", gh_exactness},
      {"tangent cone nonuniqueness", nonuniqueness},
      {"CLI replay", replay},
  };
  int unexpected = 0, failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = kKnownFailures.count(id) > 0;
    std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str(),
                !o.pass && known ? " [known failure]" : "");
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (!known) ++unexpected;
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return (strict ? failed : unexpected) == 0 ? 0 : 1;
}
