#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tcone/suspension.hpp"

using namespace tcone;
using Vec = Eigen::VectorXd;

namespace {

SuspensionSpec spec(std::vector<double> t) {
  SuspensionSpec s;
  s.n = static_cast<int>(t.size()) + 1;
  s.t = std::move(t);
  return s;
}

double wallis_quadrature(int m) {
  // composite Simpson on [0, π], independent of the recurrence
  const int N = 20000;
  double acc = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double u = M_PI * i / N;
    const double w = (i == 0 || i == N) ? 1 : (i % 2 ? 4 : 2);
    acc += w * std::pow(std::sin(u), m);
  }
  return acc * M_PI / N / 3;
}

}  // namespace

TEST_CASE("Wallis integrals") {
  CHECK(wallis(0) == doctest::Approx(M_PI));
  CHECK(wallis(1) == doctest::Approx(2.0));
  CHECK(wallis(2) == doctest::Approx(M_PI / 2));
  for (int m = 0; m < 8; ++m) CHECK(wallis(m) == doctest::Approx(wallis_quadrature(m)).epsilon(1e-10));
}

TEST_CASE("suspension volumes") {
  CHECK(suspension_volume(spec({0.5, 0.5})) == doctest::Approx(M_PI));
  CHECK(suspension_volume(spec({1.0, 0.25})) == doctest::Approx(M_PI));
  CHECK(suspension_volume(spec({0.5, 0.5})) == doctest::Approx(4 * M_PI * 0.25));
}

TEST_CASE("closed-form volume matches quadrature of the chart") {
  const std::vector<std::vector<double>> cases{{0.5, 0.5}, {0.9, 0.3}, {1.0, 0.7, 0.2}, {0.8, 0.8, 0.5, 0.4}};
  for (const auto& t : cases) {
    const SuspensionSpec s = spec(t);
    const double q = chart_volume(suspension_chart(s), 24);
    CHECK(std::abs(q - suspension_volume(s)) / suspension_volume(s) < 1e-8);
  }
}

TEST_CASE("volume product law") {
  for (int n : {3, 4, 5}) {
    SuspensionSpec half;
    half.n = n;
    half.t.assign(n - 1, 0.5);
    const double v0 = suspension_volume(half);
    for (double a : {0.1, 0.4}) {
      Vec w = Vec::Constant(n - 2, a / (n - 2));
      const SuspensionSpec s = omega_point(n, w);
      double prod = 1.0;
      for (double t : s.t) prod *= t;
      CHECK(suspension_volume(s) / v0 == doctest::Approx(std::exp2(n - 1.0) * prod).epsilon(1e-12));
      CHECK(in_omega(s));
      CHECK(suspension_volume(s) == doctest::Approx(v0).epsilon(1e-12));
    }
  }
}

TEST_CASE("boundary limits") {
  const SuspensionSpec a = omega_boundary_limit(3, 0), b = omega_boundary_limit(3, 1);
  CHECK(a.t[0] == 0.5);
  CHECK(a.t[1] == 0.5);
  CHECK(b.t[0] == 1.0);
  CHECK(b.t[1] == 0.25);
  for (int n : {3, 4, 5, 6})
    for (int k = 0; k <= n - 2; ++k) {
      const SuspensionSpec s = omega_boundary_limit(n, k);
      double prod = 1.0;
      for (double t : s.t) prod *= t;
      CHECK(prod == doctest::Approx(std::exp2(-(n - 1.0))).epsilon(1e-14));
      for (int i = 0; i < k; ++i) CHECK(s.t[i] == 1.0);
      CHECK(s.t[k] == doctest::Approx(std::exp2(-(n - 1.0) / (n - 1.0 - k))));
    }
  CHECK_THROWS_AS(omega_boundary_limit(3, 2), DomainError);
  CHECK_FALSE(in_omega(b));  // t_1 = 1 is on the boundary
}

TEST_CASE("round suspensions have Ricci (n-2)/t^2") {
  for (int n : {3, 4, 5})
    for (double t : {0.25, 0.5, 1.0}) {
      SuspensionSpec s;
      s.n = n;
      s.t.assign(n - 1, t);
      const MetricField chart = suspension_chart(s);
      Vec x = Vec::Constant(n - 1, 1.1);
      x[n - 2] = 0.3;
      const Eigen::MatrixXd ric = ricci_fd_oracle(chart, x);
      const Eigen::MatrixXd g = chart.at(x);
      const Eigen::MatrixXd unit = g.llt().matrixL().solve(ric) * g.llt().matrixL().transpose().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
      CHECK((ric - (n - 2) / (t * t) * g).cwiseAbs().maxCoeff() / ((n - 2) / (t * t) * g.cwiseAbs().maxCoeff()) < 1e-6);
      (void)unit;
    }
}

TEST_CASE("football suspension curvature") {
  // n = 3, t = (1, t2): radial planes 1, tangential (K_inner - cos²)/sin² with K_inner = 1/t2²... of a circle
  const Interval a = sec_suspension(1.0, {1.0, 1.0}, 0.9);
  CHECK(a.lo == doctest::Approx(1.0));
  CHECK(a.hi == doctest::Approx(1.0));
}

TEST_CASE("area profile reproduces the suspension and closes smoothly") {
  const AreaProfile raw = AreaProfile::from_spec(0.5, 0.5, 0.0);
  CHECK(raw.F(Jet2::variable(0.0)).d1 == doctest::Approx(2.0));
  CHECK(raw.curvature(0.2) == doctest::Approx(4.0));
  const double t1 = std::exp2(-0.7), t2 = 0.25 / t1;
  const AreaProfile sm = AreaProfile::from_spec(t1, t2, 0.05);
  CHECK(sm.F(Jet2::variable(1e-12)).d1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sm.F(Jet2::variable(sm.Z - 1e-12)).d1 == doctest::Approx(-2.0).epsilon(1e-9));
  for (double z : linspace(0.01, sm.Z - 0.01, 50)) CHECK(sm.curvature(z) >= 1.0 / (t1 * t1) - 1e-12);
  // oracle on the area chart
  const MetricField chart = area_chart(sm);
  for (double z : {0.02, 0.04, 0.2}) {
    Vec x(2);
    x << z, 1.0;
    const Eigen::MatrixXd ric = ricci_fd_oracle(chart, x, {1e-4, true});
    CHECK(ric(0, 0) / chart.at(x)(0, 0) == doctest::Approx(sm.curvature(z)).epsilon(1e-6));
  }
}

TEST_CASE("smoothing") {
  const SmoothingReport r = smooth_suspension(spec({0.5, 0.5}), 0.05);
  CHECK_FALSE(r.smoothed);
  CHECK(r.volume_change() == 0.0);
  const SuspensionSpec near = omega_point(3, Vec::Constant(1, 0.05));
  const SmoothingReport s = smooth_suspension(near, 0.05);
  CHECK(s.smoothed);
  CHECK(s.sec_min >= 1.0);
  CHECK(s.volume_change() < 1e-12);
  CHECK_THROWS_AS(smooth_suspension(near, 0.3), DomainError);
}

TEST_CASE("Example I family hypotheses") {
  const CrossSectionFamily fam = example1_family_u(0.05);
  const FamilyCheck c = check_family(fam, linspace(0.0, 0.99, 10), fam.sample_points);
  CHECK(c.samples == 100);
  CHECK(c.ricci_ok());
  CHECK(c.ricci_margin > 0.0);
  CHECK(c.trace_ok());
  // closed-form derivatives agree with differences of the metric
  for (double u : {0.1, 0.6})
    for (const Vec& x : fam.sample_points) {
      const FamilyPoint a = fam.at(u, x), b = fam.at_fd(u, x);
      CHECK((a.gs - b.gs).cwiseAbs().maxCoeff() < 1e-6 * (1 + b.gs.cwiseAbs().maxCoeff()));
      CHECK((a.ric - b.ric).cwiseAbs().maxCoeff() < 1e-5 * (1 + b.ric.cwiseAbs().maxCoeff()));
      CHECK((a.codazzi - b.codazzi).cwiseAbs().maxCoeff() < 1e-5 * (1 + b.codazzi.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("Example I path: unit speed bounds, symmetric visits, limit boxes") {
  const Example1 ex = build_example1_family(3, 12);
  std::vector<double> ts;
  for (int i = 0; i < 1000; ++i) ts.push_back(-ex.path.end_time() + 2 * ex.path.end_time() * (i + 0.5) / 1000);
  std::vector<Vec> xs(ex.family.sample_points.begin(), ex.family.sample_points.begin() + 2);
  const FamilyCheck c = check_family(ex.family, ts, xs);
  CHECK(c.derivatives_ok());
  CHECK(c.trace_ok());
  for (double t : {0.3, 7.0, 55.5}) CHECK((ex.path.position(t) - ex.path.position(-t)).norm() == 0.0);
  for (double target : {0.0, 1.0})
    for (int m = 1; m <= 10; ++m) {
      Vec q(1);
      q << target;
      const auto v = ex.path.find_visit(q, 1.0 / m, m);
      REQUIRE(v.has_value());
      CHECK(v->t > m);
    }
}

TEST_CASE("Example I for n = 4 visits every boundary limit") {
  const Example1 ex = build_example1_family(4, 10);
  for (int k = 0; k <= 2; ++k) {
    Vec q = Vec::Zero(2);
    if (k > 0) q[k - 1] = 1.0;
    for (int m = 1; m <= 10; ++m) CHECK(ex.path.find_visit(q, 1.0 / m, m).has_value());
  }
}
