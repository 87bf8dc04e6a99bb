#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tcone/recurrent_path.hpp"
#include "tcone/warp.hpp"

using namespace tcone;
using Vec = Eigen::VectorXd;

TEST_CASE("one-point domain gives a constant path") {
  const PathSpec p = recurrent_path(0, 5, {});
  CHECK(p.position(3.7).size() == 0);
  Vec q(0);
  for (double m : {0.0, 10.0, 1e6}) {
    const auto v = p.find_visit(q, 0.1, m);
    REQUIRE(v.has_value());
    CHECK(v->t > m);
  }
}

TEST_CASE("dense schedule revisits every prefix at finer spacing") {
  std::vector<int> st;
  const auto pts = dense_schedule(1, 5, &st);
  CHECK(pts.size() == 2 + 3 + 4 + 5 + 6);
  CHECK(st.back() == 5);
  CHECK(pts[2][0] == 0.0);
}

TEST_CASE("path stops at every knot and respects the speed bound") {
  const PathBounds b{3.0, 5.0};
  const PathSpec p = recurrent_path(1, 6, b);
  for (std::size_t j = 0; j < p.knots().size(); ++j) {
    const auto jt = p.jet(p.knots()[j]);
    CHECK(std::abs(jt[0].d1) < 1e-12);
    CHECK(jt[0].v == doctest::Approx(p.points()[j][0]));
  }
  for (int i = 0; i < 2000; ++i) {
    const double t = p.end_time() * i / 2000.0;
    const auto j = p.jet(t);
    CHECK(std::abs(j[0].d1) * b.first <= 1.0 + 1e-12);
    CHECK(b.second * j[0].d1 * j[0].d1 + b.first * std::abs(j[0].d2) <= 0.5 + 1e-12);
  }
}

TEST_CASE("the first hundred visits land in their 1/m boxes") {
  const PathSpec p = recurrent_path(1, 20, {});
  int checked = 0;
  for (const auto& v : p.visits()) {
    if (checked == 100) break;
    const Vec target = p.points()[v.index];
    CHECK((p.position(v.t) - target).cwiseAbs().maxCoeff() < 1.0 / std::max(1, v.stage));
    CHECK((p.position(-v.t) - target).cwiseAbs().maxCoeff() < 1.0 / std::max(1, v.stage));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("closability curve") {
  const PathSpec p = recurrent_path(1, 6, {});
  Vec s0(1);
  s0 << 0.0;
  const ClosabilityCurve c = closability_modification(p, 5.0, s0);
  for (double t : {-5.0, -1.0, 0.0, 3.0, 40.0}) CHECK((c.position(t) - p.position(t)).norm() == 0.0);
  for (double t : {-10.0, -11.0, -100.0}) CHECK(c.position(t)[0] == 0.0);
  CHECK(c.metric_scale() == doctest::Approx(0.8));
  // continuity across the blend window edges
  CHECK((c.position(-5.0 - 1e-9) - p.position(-5.0)).norm() < 1e-6);
  CHECK(std::abs(c.position(-10.0 + 1e-9)[0]) < 1e-6);
  CHECK_THROWS_AS(closability_modification(p, 0.5, s0), DomainError);
  double prev = 1.0;
  for (double a : {2.0, 10.0, 100.0, 1e4}) {
    const double gap = 1.0 - closability_modification(p, a, s0).metric_scale();
    CHECK(gap < prev);
    prev = gap;
  }
}
