#include "tcone/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace tcone {

// ---------------------------------------------------------------------------
// WarpFn / MetricField plumbing
// ---------------------------------------------------------------------------

WarpFn WarpFn::scaled(double c) const {
  Expr inner = expr_;
  return WarpFn(domain_, [inner, c](Jet2 x) { return c * inner(x); }, positive_ && c > 0.0,
                label_.empty() ? label_ : std::to_string(c) + "*" + label_);
}

WarpFn WarpFn::constant(Interval domain, double c) {
  return WarpFn(domain, [c](Jet2) { return Jet2::constant(c); }, c > 0.0, "const");
}

WarpFn WarpFn::identity(Interval domain) {
  return WarpFn(domain, [](Jet2 x) { return x; }, domain.lo >= 0.0, "id");
}

WarpFn WarpFn::sine(Interval domain, double amplitude, double frequency) {
  return WarpFn(domain, [amplitude, frequency](Jet2 x) { return amplitude * sin(frequency * x); },
                false, "sin");
}

WarpFn WarpFn::cosh(Interval domain, double amplitude, double rate) {
  return WarpFn(domain, [amplitude, rate](Jet2 x) { return amplitude * tcone::cosh(rate * x); },
                amplitude > 0.0, "cosh");
}

double warp_derivative_mismatch(const WarpFn& w, int samples) {
  const Interval d = w.domain();
  const double scale = std::max(1.0, std::max(std::abs(d.lo), std::abs(d.hi)));
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * scale;
  double worst = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double x = d.lo + d.length() * k / (samples + 1.0);
    if (x - 2 * h <= d.lo || x + 2 * h >= d.hi) continue;
    auto cd1 = [&](double hh) { return (w.value(x + hh) - w.value(x - hh)) / (2 * hh); };
    auto cd2 = [&](double hh) {
      return (w.value(x + hh) - 2 * w.value(x) + w.value(x - hh)) / (hh * hh);
    };
    const double fd1 = (4 * cd1(h / 2) - cd1(h)) / 3;
    const double h2 = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * scale;
    const double fd2 = (4 * cd2(h2 / 2) - cd2(h2)) / 3;
    const Jet2 j = w.jet(x);
    const double s1 = std::max({std::abs(j.d1), std::abs(j.v), 1e-300});
    const double s2 = std::max({std::abs(j.d2), std::abs(j.d1), std::abs(j.v), 1e-300});
    worst = std::max(worst, std::abs(fd1 - j.d1) / s1);
    worst = std::max(worst, std::abs(fd2 - j.d2) / s2);
  }
  return worst;
}

bool MetricField::inside(const Eigen::VectorXd& x, double margin) const {
  for (int i = 0; i < dim; ++i) {
    if (!periodic.empty() && periodic[i]) continue;
    if (x[i] - margin < box_lo[i] || x[i] + margin > box_hi[i]) return false;
  }
  return true;
}

void require_metric(const Eigen::MatrixXd& g, const char* where) {
  if (!g.allFinite()) throw DomainError(std::string(where) + ": metric has non-finite entries");
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw DomainError(std::string(where) + ": metric is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw DomainError(std::string(where) + ": metric is not positive definite");
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

namespace {

struct MetricDerivs {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg;                // dg[k] = ∂_k g
  std::vector<std::vector<Eigen::MatrixXd>> ddg;  // ddg[k][l] = ∂_k ∂_l g
};

MetricDerivs metric_derivs(const MetricField& m, const Eigen::VectorXd& x, double h,
                           bool second) {
  const int n = m.dim;
  MetricDerivs d;
  d.g = m.at(x);
  require_metric(d.g, "ricci_fd_oracle");
  d.dg.assign(n, Eigen::MatrixXd::Zero(n, n));
  std::vector<Eigen::MatrixXd> plus(n), minus(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    plus[k] = m.at(xp);
    minus[k] = m.at(xm);
    d.dg[k] = (plus[k] - minus[k]) / (2 * h);
  }
  if (!second) return d;
  d.ddg.assign(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int k = 0; k < n; ++k) {
    d.ddg[k][k] = (plus[k] - 2 * d.g + minus[k]) / (h * h);
    for (int l = k + 1; l < n; ++l) {
      Eigen::VectorXd a = x, b = x, c = x, e = x;
      a[k] += h; a[l] += h;
      b[k] += h; b[l] -= h;
      c[k] -= h; c[l] += h;
      e[k] -= h; e[l] -= h;
      d.ddg[k][l] = (m.at(a) - m.at(b) - m.at(c) + m.at(e)) / (4 * h * h);
      d.ddg[l][k] = d.ddg[k][l];
    }
  }
  return d;
}

// Γ_{m,ij} = ½(∂_i g_mj + ∂_j g_mi - ∂_m g_ij)
double gamma_lower(const std::vector<Eigen::MatrixXd>& dg, int m, int i, int j) {
  return 0.5 * (dg[i](m, j) + dg[j](m, i) - dg[m](i, j));
}

Eigen::MatrixXd ricci_once(const MetricField& metric, const Eigen::VectorXd& x, double h) {
  const int n = metric.dim;
  const MetricDerivs d = metric_derivs(metric, x, h, true);
  const Eigen::MatrixXd ginv = d.g.inverse();

  // Γ^k_ij
  std::vector<Eigen::MatrixXd> gam(n, Eigen::MatrixXd::Zero(n, n));
  Eigen::MatrixXd lower_all(n * n, n);  // row m*n+i, col j
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lower_all(m * n + i, j) = gamma_lower(d.dg, m, i, j);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += ginv(k, m) * lower_all(m * n + i, j);
        gam[k](i, j) = s;
      }

  // ∂_l Γ^k_ij = (∂_l g^{km}) Γ_{m,ij} + g^{km} ∂_l Γ_{m,ij}
  auto dgamma_lower = [&](int l, int m, int i, int j) {
    return 0.5 * (d.ddg[l][i](m, j) + d.ddg[l][j](m, i) - d.ddg[l][m](i, j));
  };
  std::vector<Eigen::MatrixXd> dginv(n);
  for (int l = 0; l < n; ++l) dginv[l] = -ginv * d.dg[l] * ginv;
  auto dgamma = [&](int l, int k, int i, int j) {
    double s = 0.0;
    for (int m = 0; m < n; ++m)
      s += dginv[l](k, m) * lower_all(m * n + i, j) + ginv(k, m) * dgamma_lower(l, m, i, j);
    return s;
  };

  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += dgamma(k, k, i, j) - dgamma(j, k, i, k);
        for (int l = 0; l < n; ++l) s += gam[k](k, l) * gam[l](i, j) - gam[k](j, l) * gam[l](i, k);
      }
      ric(i, j) = s;
      ric(j, i) = s;
    }
  return ric;
}

}  // namespace

std::vector<Eigen::MatrixXd> christoffel_fd(const MetricField& metric, const Eigen::VectorXd& point,
                                            double step) {
  const int n = metric.dim;
  const MetricDerivs d = metric_derivs(metric, point, step, false);
  const Eigen::MatrixXd ginv = d.g.inverse();
  std::vector<Eigen::MatrixXd> gam(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += ginv(k, m) * gamma_lower(d.dg, m, i, j);
        gam[k](i, j) = s;
      }
  return gam;
}

Eigen::MatrixXd ricci_fd_oracle(const MetricField& metric, const Eigen::VectorXd& point,
                                FdOptions opts) {
  if (point.size() != metric.dim) throw DomainError("ricci_fd_oracle: point dimension mismatch");
  if (!(opts.step > 0.0)) throw DomainError("ricci_fd_oracle: step must be positive");
  if (!metric.inside(point, 2 * opts.step))
    throw DomainError("ricci_fd_oracle: stencil leaves the chart");
  const Eigen::MatrixXd coarse = ricci_once(metric, point, opts.step);
  if (!opts.richardson) return coarse;
  const Eigen::MatrixXd fine = ricci_once(metric, point, opts.step / 2);
  return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------
// Berger and 5-d ansätze
// ---------------------------------------------------------------------------

const char* to_string(Closure c) {
  return c == Closure::CollapseFiber ? "collapse-fiber" : "open-boundary";
}

const char* to_string(Topology t) {
  switch (t) {
    case Topology::CP2MinusBall: return "CP2-minus-ball";
    case Topology::CP2SharpCP2bar: return "CP2#CP2bar";
    case Topology::S4: return "S4";
    case Topology::Tube: return "tube";
  }
  return "?";
}

void BergerAnsatz::validate(int samples) const {
  for (int k = 1; k <= samples; ++k) {
    const double x = r.lo + r.length() * k / (samples + 1.0);
    if (!(A.value(x) > 0.0) || !(B.value(x) > 0.0))
      throw DomainError("BergerAnsatz: warpers must be positive on the interior");
  }
  auto check_end = [&](Closure c, double x) {
    if (c != Closure::CollapseFiber) return;
    if (std::abs(A.value(x)) > 1e-12) throw DomainError("BergerAnsatz: A must vanish at a collapse end");
    if (std::abs(std::abs(A.d1(x)) / fiber_norm - 2.0) > 1e-9)
      throw DomainError("BergerAnsatz: |A'| must equal 2 (normalized) at a collapse end");
    if (!(B.value(x) > 0.0)) throw DomainError("BergerAnsatz: B must stay positive at a collapse end");
  };
  check_end(lo_end, r.lo);
  check_end(hi_end, r.hi);
}

BergerAnsatz BergerAnsatz::scaled(double lambda) const {
  BergerAnsatz out = *this;
  // g -> λ² g: r -> λ r, warpers -> λ warper(r/λ)
  auto rescale = [lambda](const WarpFn& w) {
    WarpFn inner = w;
    Interval d{w.domain().lo * lambda, w.domain().hi * lambda};
    return WarpFn(d, [inner, lambda](Jet2 x) { return lambda * inner.compose(x / lambda); },
                  w.positive(), w.label());
  };
  out.A = rescale(A);
  out.B = rescale(B);
  out.r = {r.lo * lambda, r.hi * lambda};
  return out;
}

double BergerRicci::min() const { return std::min({rr, xx, yy, zz}); }

BergerRicci ricci_berger(const BergerAnsatz& ansatz, double r) {
  if (!ansatz.r.contains(r)) throw DomainError("ricci_berger: r outside the ansatz interval");
  if ((ansatz.lo_end == Closure::CollapseFiber && r - ansatz.r.lo < kCollapseGuard) ||
      (ansatz.hi_end == Closure::CollapseFiber && ansatz.r.hi - r < kCollapseGuard))
    throw DomainError("ricci_berger: evaluation inside the collapse guard band");
  const Jet2 a = ansatz.A.jet(r);
  const Jet2 b = ansatz.B.jet(r);
  if (!(a.v > 0.0) || !(b.v > 0.0)) throw DomainError("ricci_berger: singular frame (zero warper)");
  const double app = a.d2 / a.v, bpp = b.d2 / b.v;
  const double ab = a.d1 * b.d1 / (a.v * b.v);
  const double lb = b.d1 / b.v;
  const double b4 = b.v * b.v * b.v * b.v;
  BergerRicci out;
  out.rr = -app - 2.0 * bpp;
  out.xx = -app - 2.0 * ab + 2.0 * a.v * a.v / b4;
  out.yy = -bpp - ab - lb * lb + 2.0 * (2.0 * b.v * b.v - a.v * a.v) / b4;
  out.zz = out.yy;
  return out;
}

DoubleAnsatz5D DoubleAnsatz5D::scaled(double lambda) const {
  // g -> λ² g: s -> λ s, C,D,E -> λ·(·)(s/λ); r-warpers are unchanged.
  auto rescale = [lambda](const WarpFn& w) {
    WarpFn inner = w;
    Interval d{w.domain().lo * lambda, w.domain().hi * lambda};
    return WarpFn(d, [inner, lambda](Jet2 x) { return lambda * inner.compose(x / lambda); },
                  w.positive(), w.label());
  };
  DoubleAnsatz5D out = *this;
  out.C = rescale(C);
  out.D = rescale(D);
  out.E = rescale(E);
  out.s = {s.lo * lambda, s.hi * lambda};
  return out;
}

double Ricci5D::min_eigenvalue() const {
  const double off = sr_unit();
  const double mean = 0.5 * (ss + rr);
  const double rad = std::sqrt(0.25 * (ss - rr) * (ss - rr) + off * off);
  return std::min({mean - rad, xx, yy, zz});
}

Ricci5D ricci_5d(const DoubleAnsatz5D& an, double s, double r) {
  if (!an.s.contains(s) || !an.r.contains(r)) throw DomainError("ricci_5d: point outside the ansatz box");
  const Jet2 A = an.A.jet(r), B = an.B.jet(r);
  const Jet2 C = an.C.jet(s), D = an.D.jet(s), E = an.E.jet(s);
  if (!(A.v > 0 && B.v > 0 && C.v > 0 && D.v > 0 && E.v > 0))
    throw DomainError("ricci_5d: singular frame (zero warper)");
  const double lA = A.d1 / A.v, lB = B.d1 / B.v;
  const double lC = C.d1 / C.v, lD = D.d1 / D.v, lE = E.d1 / E.v;
  const double cC = C.d2 / C.v, cD = D.d2 / D.v, cE = E.d2 / E.v;
  const double aA = A.d2 / A.v, aB = B.d2 / B.v;
  const double ic2 = 1.0 / (C.v * C.v);
  const double B4E4 = std::pow(B.v * E.v, 4);
  Ricci5D out;
  out.c = C.v;
  out.ss = -cC - cD - 2.0 * cE;
  out.sr = lC * (lA + 2.0 * lB) - lD * lA - 2.0 * lE * lB;
  out.rr = -cC - lC * (lD + 2.0 * lE) - ic2 * (aA + 2.0 * aB);
  out.xx = -cD - ic2 * aA - lD * (lC + 2.0 * lE) - 2.0 * ic2 * lA * lB +
           2.0 * D.v * D.v * A.v * A.v / B4E4;
  out.yy = -cE - ic2 * aB - lE * (lC + lD + lE) - ic2 * lB * (lA + lB) +
           2.0 * (2.0 * B.v * B.v * E.v * E.v - A.v * A.v * D.v * D.v) / B4E4;
  out.zz = out.yy;
  return out;
}

// ---------------------------------------------------------------------------
// Suspensions and slices
// ---------------------------------------------------------------------------

Interval sec_suspension(double t, Interval inner, double r) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("sec_suspension: t must lie in (0, 1]");
  if (!(r > 0.0 && r < t * M_PI)) throw DomainError("sec_suspension: r must lie strictly between the poles");
  if (inner.lo > inner.hi) throw DomainError("sec_suspension: empty inner curvature range");
  const double sn = std::sin(r / t), cs = std::cos(r / t);
  if (sn * sn < 1e-24) throw DomainError("sec_suspension: r at a suspension pole");
  const double radial = 1.0 / (t * t);
  const double c2 = cs * cs / (t * t);
  const double tan_lo = (inner.lo - c2) / (sn * sn);
  const double tan_hi = (inner.hi - c2) / (sn * sn);
  return {std::min({radial, tan_lo, tan_hi}), std::max({radial, tan_lo, tan_hi})};
}

double SliceGeometry::min_shape() const {
  return shape.empty() ? 0.0 : *std::min_element(shape.begin(), shape.end());
}

bool SliceGeometry::consistent() const {
  if (shape.size() != unnormalized.size() || shape.size() != coefficients.size()) return false;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double want = shape[i] * coefficients[i];
    if (std::abs(unnormalized[i] - want) > 1e-10 * std::max(1.0, std::abs(want))) return false;
  }
  return true;
}

namespace {

SliceGeometry make_slice(double radius, std::vector<double> shape, std::vector<double> coeff,
                         int sign) {
  SliceGeometry g;
  g.radius = radius;
  g.outward = sign;
  g.shape = std::move(shape);
  g.coefficients = std::move(coeff);
  for (std::size_t i = 0; i < g.shape.size(); ++i) g.unnormalized.push_back(g.shape[i] * g.coefficients[i]);
  return g;
}

int check_sign(int s) {
  if (s != 1 && s != -1) throw DomainError("sff_slice: outward sign must be +1 or -1");
  return s;
}

}  // namespace

SliceGeometry sff_slice(const BergerAnsatz& an, double r, int outward_sign) {
  const int sg = check_sign(outward_sign);
  if (!an.r.contains_closed(r)) throw DomainError("sff_slice: r outside the ansatz interval");
  const Jet2 a = an.A.jet(r), b = an.B.jet(r);
  if (!(a.v > 0.0) || !(b.v > 0.0)) throw DomainError("sff_slice: zero warper value");
  const double ka = sg * a.d1 / a.v, kb = sg * b.d1 / b.v;
  // radius of the slice as a (possibly Berger) sphere: B, the radius of the round part
  return make_slice(b.v, {ka, kb, kb}, {a.v * a.v, b.v * b.v, b.v * b.v}, sg);
}

SliceGeometry sff_slice(const DoubleAnsatz5D& an, double s, int outward_sign) {
  const int sg = check_sign(outward_sign);
  if (!an.s.contains_closed(s)) throw DomainError("sff_slice: s outside the ansatz interval");
  const Jet2 C = an.C.jet(s), D = an.D.jet(s), E = an.E.jet(s);
  if (!(C.v > 0 && D.v > 0 && E.v > 0)) throw DomainError("sff_slice: zero warper value");
  const double kc = sg * C.d1 / C.v, kd = sg * D.d1 / D.v, ke = sg * E.d1 / E.v;
  return make_slice(C.v, {kc, kd, ke, ke}, {C.v * C.v, D.v * D.v, E.v * E.v, E.v * E.v}, sg);
}

SliceGeometry sff_slice_cone(int n, const WarpFn& h, double r, int outward_sign) {
  const int sg = check_sign(outward_sign);
  if (n < 2) throw DomainError("sff_slice_cone: dimension must be at least 2");
  const Jet2 hj = h.jet(r);
  const double phi = r * hj.v;
  if (!(phi > 0.0)) throw DomainError("sff_slice_cone: zero warper value");
  const double dphi = hj.v + r * hj.d1;
  const double k = sg * dphi / phi;
  return make_slice(phi, std::vector<double>(n - 1, k), std::vector<double>(n - 1, phi * phi), sg);
}

// ---------------------------------------------------------------------------
// Grid scans
// ---------------------------------------------------------------------------

std::size_t RicciReport::node_count() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& a : axes) n *= a.nodes.size();
  return n;
}

std::string RicciReport::grid_description() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    if (i) os << " x ";
    os << a.name << "[" << a.nodes.size() << "]";
    if (!a.nodes.empty()) os << "(" << a.nodes.front() << ".." << a.nodes.back() << ")";
  }
  return os.str();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(std::max(n, 0));
  if (n == 1) v[0] = a;
  for (int i = 0; i < n && n > 1; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& x : v) x = std::exp(x);
  return v;
}

RicciReport scan_grid(std::vector<GridAxis> axes, std::vector<std::string> component_names,
                      const std::function<NodeValue(const std::vector<double>&)>& fn, int workers) {
  RicciReport rep;
  rep.axes = std::move(axes);
  rep.component_names = std::move(component_names);
  const std::size_t total = rep.node_count();
  if (total == 0) throw DomainError("scan_grid: empty grid");
  const std::size_t nax = rep.axes.size();
  const std::size_t ncomp = rep.component_names.size();

  std::vector<std::size_t> stride(nax, 1);
  for (std::size_t a = nax; a-- > 1;) stride[a - 1] = stride[a] * rep.axes[a].nodes.size();

  std::vector<double> values(total);
  std::vector<double> comps(total * ncomp);
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> coords(nax);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rem = idx;
      for (std::size_t a = 0; a < nax; ++a) {
        coords[a] = rep.axes[a].nodes[rem / stride[a]];
        rem %= stride[a];
      }
      NodeValue nv = fn(coords);
      values[idx] = nv.value;
      for (std::size_t c = 0; c < ncomp && c < nv.components.size(); ++c) comps[idx * ncomp + c] = nv.components[c];
    }
  };
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk, e = std::min(total, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < total; ++i)
    if (values[i] < values[best]) best = i;
  rep.minimum = values[best];
  rep.argmin.resize(nax);
  {
    std::size_t rem = best;
    for (std::size_t a = 0; a < nax; ++a) {
      rep.argmin[a] = rep.axes[a].nodes[rem / stride[a]];
      rem %= stride[a];
    }
  }
  rep.first_axis_minima.assign(rep.axes[0].nodes.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < total; ++i)
    rep.first_axis_minima[i / stride[0]] = std::min(rep.first_axis_minima[i / stride[0]], values[i]);
  rep.component_minima.assign(ncomp, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t c = 0; c < ncomp; ++c)
      rep.component_minima[c] = std::min(rep.component_minima[c], comps[i * ncomp + c]);

  double lower = rep.minimum;
  for (std::size_t a = 0; a < nax; ++a) {
    const auto& nodes = rep.axes[a].nodes;
    const std::size_t m = nodes.size();
    if (m < 2) continue;
    for (std::size_t idx = 0; idx < total; ++idx) {
      const std::size_t i = (idx / stride[a]) % m;
      if (i + 1 >= m) continue;
      auto slope = [&](std::size_t k) {
        const std::size_t base = idx - i * stride[a];
        const double dv = values[base + (k + 1) * stride[a]] - values[base + k * stride[a]];
        return std::abs(dv) / (nodes[k + 1] - nodes[k]);
      };
      double g = slope(i);
      if (i >= 1) g = std::max(g, slope(i - 1));
      if (i + 2 < m) g = std::max(g, slope(i + 1));
      const double h = nodes[i + 1] - nodes[i];
      const double cell = 0.5 * (values[idx] + values[idx + stride[a]]) - 0.5 * g * h;
      lower = std::min(lower, cell);
    }
  }
  rep.slack = rep.minimum - lower;
  rep.positive = lower >= 0.0;
  return rep;
}

}  // namespace tcone
