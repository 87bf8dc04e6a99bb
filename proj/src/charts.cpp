#include "tcone/charts.hpp"

#include <cmath>

namespace tcone {

Eigen::Matrix3d s3_coframe(double theta, double psi) {
  // σ1 = sinψ dθ − cosψ sinθ dφ, σ2 = cosψ dθ + sinψ sinθ dφ, σ3 = dψ + cosθ dφ,
  // dσ_i = −σ_j ∧ σ_k; ω = σ/2 then gives brackets of size 2.
  Eigen::Matrix3d w;
  w << std::sin(psi), -std::cos(psi) * std::sin(theta), 0.0,
       std::cos(psi), std::sin(psi) * std::sin(theta), 0.0,
       0.0, std::cos(theta), 1.0;
  return 0.5 * w;
}

namespace {

Eigen::VectorXd filled(int n, double v) { return Eigen::VectorXd::Constant(n, v); }

Eigen::MatrixXd gram(const Eigen::MatrixXd& coframe) { return coframe.transpose() * coframe; }

void euler_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi, int offset) {
  lo[offset] = 1e-3;
  hi[offset] = M_PI - 1e-3;
  lo[offset + 1] = -10.0;
  hi[offset + 1] = 10.0;
  lo[offset + 2] = -10.0;
  hi[offset + 2] = 10.0;
}

}  // namespace

MetricField euclidean_chart(int dim) {
  MetricField m;
  m.dim = dim;
  m.chart = [dim](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(dim, dim); };
  m.box_lo = filled(dim, -1e6);
  m.box_hi = filled(dim, 1e6);
  return m;
}

MetricField s3_chart(double radius) {
  MetricField m;
  m.dim = 3;
  m.chart = [radius](const Eigen::VectorXd& x) {
    const Eigen::Matrix3d w = radius * s3_coframe(x[0], x[2]);
    return Eigen::MatrixXd(gram(w));
  };
  m.box_lo = Eigen::VectorXd(3);
  m.box_hi = Eigen::VectorXd(3);
  euler_box(m.box_lo, m.box_hi, 0);
  return m;
}

Eigen::MatrixXd berger_frame(const BergerAnsatz& an, const Eigen::VectorXd& x) {
  const double a = an.A.value(x[0]), b = an.B.value(x[0]);
  const Eigen::Matrix3d w = s3_coframe(x[1], x[3]);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(4, 4);
  W(0, 0) = 1.0;
  W.block(1, 1, 1, 3) = a * w.row(0);
  W.block(2, 1, 1, 3) = b * w.row(1);
  W.block(3, 1, 1, 3) = b * w.row(2);
  return W;
}

MetricField berger_chart(const BergerAnsatz& an) {
  MetricField m;
  m.dim = 4;
  m.chart = [an](const Eigen::VectorXd& x) { return gram(berger_frame(an, x)); };
  m.box_lo = Eigen::VectorXd(4);
  m.box_hi = Eigen::VectorXd(4);
  m.box_lo[0] = an.r.lo;
  m.box_hi[0] = an.r.hi;
  euler_box(m.box_lo, m.box_hi, 1);
  return m;
}

Eigen::MatrixXd double_ansatz_frame(const DoubleAnsatz5D& an, const Eigen::VectorXd& x) {
  const double s = x[0], r = x[1];
  const double A = an.A.value(r), B = an.B.value(r);
  const double C = an.C.value(s), D = an.D.value(s), E = an.E.value(s);
  const Eigen::Matrix3d w = s3_coframe(x[2], x[4]);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(5, 5);
  W(0, 0) = 1.0;
  W(1, 1) = C;
  W.block(2, 2, 1, 3) = D * A * w.row(0);
  W.block(3, 2, 1, 3) = E * B * w.row(1);
  W.block(4, 2, 1, 3) = E * B * w.row(2);
  return W;
}

MetricField double_ansatz_chart(const DoubleAnsatz5D& an) {
  MetricField m;
  m.dim = 5;
  m.chart = [an](const Eigen::VectorXd& x) { return gram(double_ansatz_frame(an, x)); };
  m.box_lo = Eigen::VectorXd(5);
  m.box_hi = Eigen::VectorXd(5);
  m.box_lo[0] = an.s.lo;
  m.box_hi[0] = an.s.hi;
  m.box_lo[1] = an.r.lo;
  m.box_hi[1] = an.r.hi;
  euler_box(m.box_lo, m.box_hi, 2);
  return m;
}

Eigen::MatrixXd to_frame(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& W) {
  const Eigen::MatrixXd Winv = W.inverse();
  return Winv.transpose() * ric * Winv;
}

}  // namespace tcone
