#include "tcone/crosscheck.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "tcone/charts.hpp"
#include "tcone/curvature.hpp"

namespace tcone {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Draws live on O(1) scales; a larger step keeps roundoff below the Richardson error.
const FdOptions kFd{2e-3, true};

void compare(const Eigen::MatrixXd& oracle, const Eigen::MatrixXd& analytic, const std::vector<std::string>& names,
             CrosscheckRow& row) {
  const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1.0);
  for (Eigen::Index i = 0; i < oracle.rows(); ++i)
    for (Eigen::Index j = i; j < oracle.cols(); ++j) {
      const double e = std::abs(oracle(i, j) - analytic(i, j)) / scale;
      if (e >= row.max_rel_error) {
        row.max_rel_error = e;
        row.worst_component = names[i] + names[j];
      }
    }
}

}  // namespace

CrosscheckReport oracle_crosscheck(int draws, std::uint64_t seed) {
  if (draws < 1) throw DomainError("oracle_crosscheck: draws must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  const Interval dom{0.0, 3.0};
  CrosscheckReport rep;
  auto euler = [&](Eigen::VectorXd& x, int at) {
    x[at] = 0.4 + 2.3 * unit(rng);
    x[at + 1] = 2 * M_PI * unit(rng);
    x[at + 2] = 2 * M_PI * unit(rng);
  };
  for (int k = 0; k < draws; ++k) {
    CrosscheckRow row;
    row.ansatz = "berger";
    row.draw = k;
    BergerAnsatz a;
    a.r = dom;
    for (WarpFn* w : {&a.A, &a.B}) {
      const double amp = 0.2 + unit(rng), rate = 0.3 + unit(rng);
      *w = WarpFn::cosh(dom, amp, rate);
      row.parameters.insert(row.parameters.end(), {amp, rate});
    }
    Eigen::VectorXd x(4);
    x[0] = 0.2 + 2.5 * unit(rng);
    euler(x, 1);
    row.parameters.insert(row.parameters.end(), x.data(), x.data() + x.size());
    const BergerRicci an = ricci_berger(a, x[0]);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    expect.diagonal() << an.rr, an.xx, an.yy, an.zz;
    compare(to_frame(ricci_fd_oracle(berger_chart(a), x, kFd), berger_frame(a, x)), expect, {"r", "X", "Y", "Z"}, row);
    rep.worst = std::max(rep.worst, row.max_rel_error);
    rep.rows.push_back(std::move(row));
  }
  for (int k = 0; k < draws; ++k) {
    CrosscheckRow row;
    row.ansatz = "5d";
    row.draw = k;
    DoubleAnsatz5D a;
    a.s = dom;
    a.r = dom;
    for (WarpFn* w : {&a.A, &a.B, &a.C, &a.D, &a.E}) {
      const double amp = (w == &a.A || w == &a.B ? 0.3 : 0.5) + unit(rng), rate = 0.3 + unit(rng);
      *w = WarpFn::cosh(dom, amp, rate);
      row.parameters.insert(row.parameters.end(), {amp, rate});
    }
    Eigen::VectorXd x(5);
    x[0] = 0.2 + 2.5 * unit(rng);
    x[1] = 0.2 + 2.5 * unit(rng);
    euler(x, 2);
    row.parameters.insert(row.parameters.end(), x.data(), x.data() + x.size());
    const Ricci5D an = ricci_5d(a, x[0], x[1]);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(5, 5);
    expect.diagonal() << an.ss, an.rr, an.xx, an.yy, an.zz;
    expect(0, 1) = expect(1, 0) = an.sr_unit();
    compare(to_frame(ricci_fd_oracle(double_ansatz_chart(a), x, kFd), double_ansatz_frame(a, x)), expect,
            {"s", "r", "X", "Y", "Z"}, row);
    rep.worst = std::max(rep.worst, row.max_rel_error);
    rep.rows.push_back(std::move(row));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace tcone
