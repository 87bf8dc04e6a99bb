#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tcone/cone_family.hpp"

using namespace tcone;

namespace {

LemmaParams params(double E, double F, double D = 10.0) {
  LemmaParams p;
  p.n = 3;
  p.E = E;
  p.F = F;
  p.D = D;
  p.r0 = 1e-3;
  return p;
}

// Closed forms of the lemma's profile derivatives, written in L = -log(r0 r).
double eps1_closed(double L, double E) { return E / (std::pow(std::log(L), 2) * L); }
double eps2_closed(double L, double E) {
  const double l = std::log(L);
  return E * (-1 + 1 / L + 2 / (l * L)) / (l * l * L);
}

DirectionalOptions small_grid(const CrossSectionFamily& fam) {
  DirectionalOptions o = DirectionalOptions::defaults(fam);
  o.lnL_nodes = triple_log_nodes(1.0, 4.0, 40);
  o.delta_nodes = linspace(0.0, 1.0, 21);
  return o;
}

}  // namespace

TEST_CASE("h takes the value 0.75 where log(-log(r0 r)) = 2") {
  const LemmaParams p = params(0.5, 0.5);
  const double r = std::exp(-std::exp(2.0)) / p.r0;
  CHECK(eval_h(r, p).v == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("profile derivatives match the closed forms and finite differences") {
  const LemmaParams p = params(0.5, 0.5);
  for (double lnL : {1.2, 2.0, 5.0, 30.0}) {
    const double L = std::exp(lnL);
    const ProfileJet j = near_profile(L, p);
    CHECK(j.e1 == doctest::Approx(eps1_closed(L, p.E)).epsilon(1e-12));
    CHECK(j.e2 == doctest::Approx(eps2_closed(L, p.E)).epsilon(1e-12));
    CHECK(j.q1 == doctest::Approx(p.F / (L * lnL)).epsilon(1e-12));
    CHECK(j.q2 == doctest::Approx(-p.F / (L * lnL) * (1 - 1 / L - 1 / (L * lnL))).epsilon(1e-12));
  }
  const double r = std::exp(-std::exp(2.0)) / p.r0;
  const Jet2 e = eval_eps(r, p);
  auto eps = [&](double x) { return eval_eps(x, p).v; };
  auto d1 = [&](double h) { return (eps(r + h) - eps(r - h)) / (2 * h); };
  const double fd = (4 * d1(5e-5) - d1(1e-4)) / 3;
  CHECK(std::abs(fd - e.d1) / std::abs(e.d1) < 1e-8);
}

TEST_CASE("f collapses to -F k at L = e^(e^k)") {
  const LemmaParams p = params(0.5, 0.3);
  for (int k = 1; k <= 4; ++k) CHECK(near_profile(std::exp(std::exp(k)), p).f == doctest::Approx(-0.3 * k));
}

TEST_CASE("h increases to 1 and r f' decreases to 0 along geometric sequences") {
  const LemmaParams p = params(0.5, 0.3);
  double prev_h = 0.0, prev_q = 1e300;
  for (int k = 0; k < 60; ++k) {
    // r_k = r_start 10^-k shifts L by k log 10
    const double L = 20.0 + k * std::log(10.0);
    const ProfileJet j = near_profile(L, p);
    CHECK(j.h > prev_h);
    CHECK(j.q1 < prev_q);
    CHECK(j.q1 > 0.0);
    prev_h = j.h;
    prev_q = j.q1;
  }
  CHECK(near_profile(std::exp(300.0), p).h > 0.99);
}

TEST_CASE("(rh)'' is negative and below the lemma bound") {
  const LemmaParams p = params(0.5, 0.1);
  for (double lnL : triple_log_nodes(1.0, 4.0, 50)) {
    const double L = std::exp(lnL);
    const ProfileJet j = near_profile(L, p);
    // (rh)''/(rh) r² = r_ddphi / h
    const double val = j.r_ddphi / j.h;
    CHECK(val < 0.0);
    CHECK(val <= -p.E / (2 * lnL * lnL * L) * (1 + 1e-12));
  }
}

TEST_CASE("lemma bounds at log(-log(r0 r)) = 2 with E = F = 1/2, D = 10") {
  const LemmaParams p = params(0.5, 0.5, 10.0);
  const double L = std::exp(2.0);
  const LemmaBounds b = lemma_bounds_scaled(L, p);
  CHECK(b.rr == doctest::Approx(0.5 / (2 * 4 * L)));
  CHECK(b.mixed == doctest::Approx(-5.0 / (2 * L)));
  CHECK(b.tangential == doctest::Approx(0.140625));
  const double r = std::exp(-L) / p.r0;
  const LemmaBounds u = lemma_bounds(r, p);
  CHECK(u.rr * r * r == doctest::Approx(b.rr));
  CHECK(u.mixed * r == doctest::Approx(b.mixed));
}

TEST_CASE("stationary round family: radial value and positivity") {
  ConeMetric cone;
  cone.params = params(0.5, 0.05);
  cone.family = round_sphere_family(2, 1.0);
  const double L = std::exp(2.5);
  const ConeRicci c = cone.ricci(L, cone.family.sample_points[0]);
  const ProfileJet j = cone.profile(L);
  CHECK(c.rr == doctest::Approx(-2 * j.r_ddphi / j.h).epsilon(1e-12));
  CHECK(c.rr > 0.0);
  const DirectionalReport rep = directional_ricci_min(cone, small_grid(cone.family));
  CHECK(rep.positive());
  CHECK(rep.grid.positive == (rep.grid.lower() >= 0.0));
}

TEST_CASE("tangential value dominates the lemma bound at delta = 0") {
  ConeMetric cone;
  cone.params = params(0.5, 0.05);
  cone.family = round_sphere_family(2, 1.0);
  for (double lnL : {1.5, 3.0, 20.0}) {
    const double L = std::exp(lnL);
    const ConeRicci c = cone.ricci(L, cone.family.sample_points[2]);
    const Eigen::MatrixXd o = c.orthonormal();
    // per unit vector r² Ric ≥ E / log L
    CHECK(o(1, 1) >= lemma_bounds_scaled(L, cone.params).tangential / (c.h * c.h) * (1 - 1e-12));
  }
}

TEST_CASE("feasibility search succeeds immediately for a stationary family") {
  SearchOptions opts;
  const CrossSectionFamily fam = round_sphere_family(2, 1.0);
  opts.grid = small_grid(fam);
  const SearchResult res = feasibility_search(3, fam, opts);
  CHECK(res.feasible);
  CHECK(res.candidates == 1);
  CHECK(res.params.case_condition());
}

TEST_CASE("a family violating the Ricci hypothesis is infeasible") {
  // Ric = (n - 2 - 0.5) g: round sphere of radius sqrt(2)
  SearchOptions opts;
  opts.F_steps = 3;
  opts.F_start = 1.0 / 48;
  const CrossSectionFamily fam = round_sphere_family(2, std::sqrt(2.0));
  opts.grid = small_grid(fam);
  const SearchResult res = feasibility_search(3, fam, opts);
  CHECK_FALSE(res.feasible);
  CHECK(res.report.grid.argmin[1] < 0.5);
  CHECK_FALSE(res.most_violated.empty());
}

TEST_CASE("empty sweep schedule is rejected") {
  SearchOptions opts;
  opts.r0_list.clear();
  CHECK_THROWS_AS(feasibility_search(3, round_sphere_family(2, 1.0), opts), DomainError);
}

TEST_CASE("case bounds are nonnegative when E >= D F") {
  const LemmaParams p = params(0.5, 0.05, 10.0);
  for (double lnL : triple_log_nodes(1.0, 4.0, 30))
    for (double d : linspace(0.0, 1.0, 11)) {
      CHECK(case_bound_tangential(std::exp(lnL), d, p) >= 0.0);
      CHECK(case_bound_radial(std::exp(lnL), d, p) >= 0.0);
    }
}

TEST_CASE("tangent cone snapshots and closeness") {
  ConeMetric cone;
  cone.params = params(0.5, 0.05);
  cone.family = round_sphere_family(2, 1.0);
  const Snapshot a = tangent_cone_at_scale(cone, 1e3), b = tangent_cone_at_scale(cone, 1e9);
  CHECK(b.h > a.h);
  CHECK(cone_closeness(cone, 1e3, 1.0, 1.0) == 0.0);
  double prev = 1e300;
  for (int k = 0; k < 10; ++k) {
    const double dev = cone_closeness(cone, 30.0 + k * std::log(10.0), 0.5, 2.0);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("far branch tends to h_inf and stays concave") {
  LemmaParams p = params(0.05, 0.005);
  p.h_inf = 0.9;
  for (double lnL : {1.5, 5.0, 40.0}) {
    const ProfileJet j = far_profile(std::exp(lnL), p);
    CHECK(j.h < 1.0);
    CHECK(j.h > p.h_inf);
    CHECK(j.r_ddphi < 0.0);
  }
  CHECK(far_profile(std::exp(600.0), p).h == doctest::Approx(0.9).epsilon(1e-4));
}

TEST_CASE("stabilized tail reaches h = 1 and keeps the radial sign") {
  LemmaParams p = params(0.5, 0.05);
  Stabilizer st{true, 2.0, 3.0};
  CHECK(near_profile(std::exp(std::exp(3.5)), p, st).h == 1.0);
  for (double lnL : linspace(1.5, 25.0, 200)) CHECK(near_profile(std::exp(lnL), p, st).r_ddphi <= 1e-300);
}
