#include "tcone/cross_section.hpp"

#include <cmath>

namespace tcone {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

template <class F>
Mat richardson(F&& diff, double h) {
  return (4.0 * diff(h / 2) - diff(h)) / 3.0;
}

std::vector<Mat> christoffel_refined(const MetricField& m, const Vec& x, double h) {
  const auto coarse = christoffel_fd(m, x, h);
  const auto fine = christoffel_fd(m, x, h / 2);
  std::vector<Mat> out(coarse.size());
  for (std::size_t k = 0; k < coarse.size(); ++k) out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  return out;
}

}  // namespace

double tensor_norm(const Mat& g, const Mat& a) {
  const Mat ga = g.ldlt().solve(a);
  return std::sqrt(std::max(0.0, (ga * ga).trace()));
}

MetricField CrossSectionFamily::slice(double s) const {
  MetricField m;
  m.dim = dim;
  auto met = metric;
  m.chart = [met, s](const Vec& x) { return met(s, x); };
  m.box_lo = box_lo;
  m.box_hi = box_hi;
  m.periodic = periodic;
  return m;
}

FamilyPoint CrossSectionFamily::at(double s, const Vec& x) const {
  if (!param.contains_closed(s)) throw DomainError("CrossSectionFamily: parameter outside the family domain");
  if (exact) return exact(s, x);
  return at_fd(s, x);
}

FamilyPoint CrossSectionFamily::at_fd(double s, const Vec& x) const {
  if (!param.contains_closed(s)) throw DomainError("CrossSectionFamily: parameter outside the family domain");
  const int n = dim;
  FamilyPoint p;
  p.g = metric(s, x);
  require_metric(p.g, "CrossSectionFamily");
  if (stationary) {
    p.gs = p.gss = Mat::Zero(n, n);
    p.ric = ricci_fd_oracle(slice(s), x);
    p.codazzi = Vec::Zero(n);
    return p;
  }
  auto gs_at = [&](const Vec& y) {
    return richardson([&](double h) { return Mat((metric(s + h, y) - metric(s - h, y)) / (2 * h)); },
                      s_step);
  };
  p.gs = gs_at(x);
  p.gss = richardson(
      [&](double h) { return Mat((metric(s + h, x) - 2.0 * p.g + metric(s - h, x)) / (h * h)); }, s_step);
  const MetricField sl = slice(s);
  p.ric = ricci_fd_oracle(sl, x);

  if (n == 1) {
    p.codazzi = Vec::Zero(1);
    return p;
  }
  const Mat ginv = p.g.inverse();
  const std::vector<Mat> gam = christoffel_refined(sl, x, x_step);
  std::vector<Mat> dgs(n), dg(n);
  for (int k = 0; k < n; ++k) {
    auto shifted = [&](double h, int sign) {
      Vec y = x;
      y[k] += sign * h;
      return y;
    };
    dgs[k] = richardson([&](double h) { return Mat((gs_at(shifted(h, 1)) - gs_at(shifted(h, -1))) / (2 * h)); },
                        x_step);
    dg[k] = richardson(
        [&](double h) { return Mat((metric(s, shifted(h, 1)) - metric(s, shifted(h, -1))) / (2 * h)); }, x_step);
  }
  // ∇_a (g_s)_bc
  std::vector<Mat> nab(n, Mat::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = dgs[a](b, c);
        for (int d = 0; d < n; ++d) v -= gam[d](a, b) * p.gs(d, c) + gam[d](a, c) * p.gs(b, d);
        nab[a](b, c) = v;
      }
  p.codazzi = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    double div = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) div += ginv(a, b) * nab[a](b, i);
    const double dtr = (-ginv * dg[i] * ginv * p.gs + ginv * dgs[i]).trace();
    p.codazzi[i] = div - dtr;
  }
  double nn = 0.0;
  for (int a = 0; a < n; ++a)
    for (int a2 = 0; a2 < n; ++a2) {
      const Mat t = ginv * nab[a] * ginv * nab[a2].transpose();
      nn += ginv(a, a2) * t.trace();
    }
  p.nabla_gs_norm = std::sqrt(std::max(0.0, nn));
  return p;
}

CrossSectionFamily CrossSectionFamily::reparametrized(std::function<Jet2(double)> path, Interval domain,
                                                      std::string new_label) const {
  CrossSectionFamily out = *this;
  out.param = domain;
  out.label = std::move(new_label);
  const CrossSectionFamily base = *this;
  out.metric = [base, path](double t, const Vec& x) { return base.metric(path(t).v, x); };
  out.exact = [base, path](double t, const Vec& x) {
    const Jet2 c = path(t);
    FamilyPoint p = base.at(c.v, x);
    p.gss = c.d2 * p.gs + c.d1 * c.d1 * p.gss;
    p.gs = c.d1 * p.gs;
    p.codazzi *= c.d1;
    p.nabla_gs_norm *= std::abs(c.d1);
    return p;
  };
  return out;
}

FamilyCheck check_family(const CrossSectionFamily& fam, const std::vector<double>& s_samples,
                         const std::vector<Vec>& x_samples) {
  FamilyCheck c;
  c.ricci_margin = 1e300;
  const int n = fam.dim + 1;
  for (double s : s_samples)
    for (const Vec& x : x_samples) {
      const FamilyPoint p = fam.at(s, x);
      const Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(p.ric, p.g);
      c.ricci_margin = std::min(c.ricci_margin, es.eigenvalues().minCoeff() - (n - 2));
      c.trace_defect = std::max(c.trace_defect, std::abs(p.g.ldlt().solve(p.gs).trace()));
      c.gs_norm = std::max(c.gs_norm, tensor_norm(p.g, p.gs));
      c.gss_norm = std::max(c.gss_norm, tensor_norm(p.g, p.gss));
      const double nab = std::isnan(p.nabla_gs_norm) ? fam.at_fd(s, x).nabla_gs_norm : p.nabla_gs_norm;
      c.nabla_gs_norm = std::max(c.nabla_gs_norm, nab);
      ++c.samples;
    }
  return c;
}

CrossSectionFamily round_sphere_family(int m, double a) {
  if (m < 1 || !(a > 0.0)) throw DomainError("round_sphere_family: need m >= 1 and a > 0");
  CrossSectionFamily f;
  f.dim = m;
  f.stationary = true;
  f.volume_normalized = true;
  f.label = "round-sphere";
  auto coeff = [m, a](const Vec& x) {
    Mat g = Mat::Zero(m, m);
    double w = a * a;
    for (int i = 0; i < m; ++i) {
      g(i, i) = w;
      if (i < m - 1) w *= std::pow(std::sin(x[i]), 2);
    }
    return g;
  };
  f.metric = [coeff](double, const Vec& x) { return coeff(x); };
  f.exact = [coeff, m, a](double, const Vec& x) {
    FamilyPoint p;
    p.g = coeff(x);
    p.gs = p.gss = Mat::Zero(m, m);
    p.ric = (m - 1) / (a * a) * p.g;
    p.codazzi = Vec::Zero(m);
    return p;
  };
  f.box_lo = Vec::Zero(m);
  f.box_hi = Vec::Constant(m, M_PI);
  f.box_hi[m - 1] = 2 * M_PI;
  f.periodic.assign(m, false);
  f.periodic[m - 1] = true;
  for (int k = 0; k < 10; ++k) f.sample_points.push_back(sphere_chart_point(m, 0.15 * (k - 4.5)));
  return f;
}

Vec sphere_chart_point(int m, double spread) {
  Vec x(m);
  for (int i = 0; i < m - 1; ++i) x[i] = 0.5 * M_PI + spread * (0.37 * (i + 1) - 0.5);
  x[m - 1] = 1.0 + spread;
  return x;
}

RadialJet radial_jet(const WarpFn& h, const WarpFn& f, double r) {
  if (!h.domain().contains(r) || !f.domain().contains(r)) throw DomainError("radial_jet: radius outside domain");
  const Jet2 hj = h.jet(r), fj = f.jet(r);
  RadialJet j;
  j.r = r;
  j.s = fj.v;
  j.h = hj.v;
  j.dphi = hj.v + r * hj.d1;
  j.r_ddphi = r * (2 * hj.d1 + r * hj.d2);
  j.q1 = r * fj.d1;
  j.q2 = r * r * fj.d2;
  if (!(j.h > 0.0)) throw DomainError("radial_jet: h must be positive");
  return j;
}

ConeRicci cone_ricci_scaled(const RadialJet& J, const FamilyPoint& fp, int n, bool substitute) {
  const int m = n - 1;
  if (fp.g.rows() != m) throw DomainError("cone_ricci_scaled: family dimension must be n-1");
  const Mat& g = fp.g;
  const double h = J.h;
  const Mat P0 = h * h * g;
  const Mat P1 = 2 * h * J.dphi * g + h * h * J.q1 * fp.gs;
  const Mat P2 = (2 * J.dphi * J.dphi + 2 * h * J.r_ddphi) * g + 4 * h * J.dphi * J.q1 * fp.gs +
                 h * h * (J.q2 * fp.gs + J.q1 * J.q1 * fp.gss);
  const auto ldlt = P0.ldlt();
  const Mat A1 = ldlt.solve(P1);
  ConeRicci c;
  c.g = g;
  c.h = h;
  if (substitute) {
    const Mat u = g.ldlt().solve(fp.gs);
    c.rr = -m * J.r_ddphi / h - 0.25 * (u * u).trace() * J.q1 * J.q1;
  } else {
    c.rr = -0.5 * ldlt.solve(P2).trace() + 0.25 * (A1 * A1).trace();
  }
  c.ri = 0.5 * J.q1 * fp.codazzi;
  c.ij = fp.ric - 0.5 * P2 + 0.5 * P1 * A1 - 0.25 * A1.trace() * P1;
  c.ij = 0.5 * (c.ij + c.ij.transpose()).eval();
  return c;
}

double ConeRicci::directional(double delta, const Vec& w) const {
  const double c = std::sqrt(std::max(0.0, 1.0 - delta * delta));
  return delta * delta * rr + 2 * delta * c / h * ri.dot(w) + c * c / (h * h) * w.dot(ij * w);
}

Mat ConeRicci::orthonormal() const {
  const int m = static_cast<int>(g.rows());
  const Eigen::LLT<Mat> llt(g);
  const Mat E = llt.matrixU().solve(Mat::Identity(m, m));  // columns g-orthonormal
  Mat out(m + 1, m + 1);
  out(0, 0) = rr;
  const Vec v = E.transpose() * ri / h;
  out.block(0, 1, 1, m) = v.transpose();
  out.block(1, 0, m, 1) = v;
  out.block(1, 1, m, m) = E.transpose() * ij * E / (h * h);
  return out;
}

double ConeRicci::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Mat>(orthonormal()).eigenvalues().minCoeff();
}

ConeRicci ricci_cone_analytic(int n, const WarpFn& h, const WarpFn& f, const CrossSectionFamily& family,
                              double r, const Vec& x) {
  const RadialJet J = radial_jet(h, f, r);
  const FamilyPoint fp = family.at(J.s, x);
  return cone_ricci_scaled(J, fp, n, family.volume_normalized);
}

MetricField cone_chart(const WarpFn& h, const WarpFn& f, const CrossSectionFamily& family, Interval r_range) {
  const int m = family.dim;
  MetricField out;
  out.dim = m + 1;
  out.chart = [h, f, family, m](const Vec& x) {
    const double r = x[0];
    const double phi = r * h.value(r);
    Mat g = Mat::Zero(m + 1, m + 1);
    g(0, 0) = 1.0;
    g.block(1, 1, m, m) = phi * phi * family.metric(f.value(r), x.tail(m));
    return g;
  };
  out.box_lo = Vec(m + 1);
  out.box_hi = Vec(m + 1);
  out.box_lo[0] = r_range.lo;
  out.box_hi[0] = r_range.hi;
  out.box_lo.tail(m) = family.box_lo;
  out.box_hi.tail(m) = family.box_hi;
  out.periodic.assign(m + 1, false);
  for (int i = 0; i < m && i < static_cast<int>(family.periodic.size()); ++i) out.periodic[i + 1] = family.periodic[i];
  return out;
}

std::vector<Eigen::VectorXd> box_samples(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int count,
                                         double margin) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int dim = static_cast<int>(lo.size());
  if (dim < 1 || dim > 8 || hi.size() != lo.size()) throw DomainError("box_samples: unsupported box");
  if (count < 1) throw DomainError("box_samples: count must be positive");
  if (!(margin >= 0.0 && margin < 0.5)) throw DomainError("box_samples: margin must lie in [0, 1/2)");
  std::vector<Eigen::VectorXd> out;
  for (int k = 1; k <= count; ++k) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) {
      double v = 0.0, f = 1.0;
      for (int q = k; q > 0; q /= kPrimes[i]) {
        f /= kPrimes[i];
        v += f * (q % kPrimes[i]);
      }
      const double w = hi[i] - lo[i];
      x[i] = lo[i] + w * (margin + (1.0 - 2.0 * margin) * v);
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace tcone
