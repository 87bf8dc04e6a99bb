#include "tcone/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tcone {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// log2 t of the k-th boundary limit.
Vec limit_log(int n, int k) {
  Vec x = Vec::Zero(n - 1);
  for (int i = k; i < n - 1; ++i) x[i] = -(n - 1.0) / (n - 1.0 - k);
  return x;
}

// F(u, z) of the n = 3 family as a jet in u.
Jet2 family_F(Jet2 u, double z, double sigma) {
  const double Z = 0.5;
  const Jet2 kappa = exp((1.0 - u) * std::log(4.0));
  const double zz = std::min(z, Z - z);
  Jet2 F = kappa * (zz * (Z - zz));
  if (sigma > 0.0) {
    const Jet2 msig = 5.0 * (1.0 - kappa / 4.0);  // M σ
    const double bump = zz <= sigma ? 1.0 - std::pow(1.0 - zz / sigma, 6) : 1.0;
    F = F + msig * (sigma / 15.0 * bump);
  }
  return F;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1 - z * z) * dp * dp);
  }
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int panels,
                       int order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) acc += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return 0.5 * h * acc;
}

void SuspensionSpec::validate() const {
  if (n < 3) throw DomainError("SuspensionSpec: n must be at least 3");
  if (static_cast<int>(t.size()) != n - 1) throw DomainError("SuspensionSpec: need n-1 parameters");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || t[i] > 1.0 + 1e-12) throw DomainError("SuspensionSpec: parameters must lie in (0, 1]");
    if (i > 0 && t[i] > t[i - 1] * (1 + 1e-12)) throw DomainError("SuspensionSpec: parameters must be nonincreasing");
  }
  if (sigma < 0.0) throw DomainError("SuspensionSpec: negative smoothing scale");
}

bool SuspensionSpec::round() const {
  return std::all_of(t.begin(), t.end(), [&](double x) { return std::abs(x - t.front()) <= 1e-15 * t.front(); });
}

double wallis(int m) {
  if (m < 0) throw DomainError("wallis: negative order");
  double a = M_PI, b = 2.0;
  if (m == 0) return a;
  for (int k = 2; k <= m; ++k) {
    const double c = (k - 1.0) / k * a;
    a = b;
    b = c;
  }
  return b;
}

double suspension_volume(const SuspensionSpec& spec) {
  spec.validate();
  const int n = spec.n;
  double v = 2 * M_PI * spec.t[n - 2];
  for (int k = 1; k <= n - 2; ++k) v *= spec.t[k - 1] * wallis(n - 1 - k);
  return v;
}

MetricField suspension_chart(const SuspensionSpec& spec) {
  spec.validate();
  const int n = spec.n, m = n - 1;
  MetricField mf;
  mf.dim = m;
  const std::vector<double> t = spec.t;
  // normalized angles ρ_k = r_k / t_k in (0, π), θ in [0, 2π)
  mf.chart = [t, m](const Vec& x) {
    Mat g = Mat::Zero(m, m);
    double w = 1.0;
    for (int k = 0; k < m; ++k) {
      g(k, k) = w * t[k] * t[k];
      if (k < m - 1) w *= std::pow(std::sin(x[k]), 2);
    }
    return g;
  };
  mf.box_lo = Vec::Zero(m);
  mf.box_hi = Vec::Constant(m, M_PI);
  mf.box_hi[m - 1] = 2 * M_PI;
  mf.periodic.assign(m, false);
  mf.periodic[m - 1] = true;
  return mf;
}

double chart_volume(const MetricField& chart, int nodes) {
  std::vector<double> gx, gw;
  gauss_legendre(nodes, gx, gw);
  const int d = chart.dim;
  std::vector<int> idx(d, 0);
  double total = 0.0;
  Vec x(d);
  while (true) {
    double wt = 1.0;
    for (int a = 0; a < d; ++a) {
      const double half = 0.5 * (chart.box_hi[a] - chart.box_lo[a]);
      x[a] = chart.box_lo[a] + half * (1 + gx[idx[a]]);
      wt *= half * gw[idx[a]];
    }
    total += wt * std::sqrt(std::max(0.0, chart.at(x).determinant()));
    int a = 0;
    while (a < d && ++idx[a] == nodes) idx[a++] = 0;
    if (a == d) break;
  }
  return total;
}

SuspensionSpec omega_boundary_limit(int n, int k) {
  if (n < 3) throw DomainError("omega_boundary_limit: n must be at least 3");
  if (k < 0 || k > n - 2) throw DomainError("omega_boundary_limit: k must lie in [0, n-2]");
  SuspensionSpec s;
  s.n = n;
  const Vec x = limit_log(n, k);
  for (int i = 0; i < n - 1; ++i) s.t.push_back(std::exp2(x[i]));
  return s;
}

bool omega_weights_admissible(const Vec& w) { return w.size() == 0 || (w.minCoeff() >= 0.0 && w.sum() < 1.0); }

SuspensionSpec omega_point(int n, const Vec& w) {
  if (n < 3 || w.size() != n - 2) throw DomainError("omega_point: need n-2 weights");
  if (!omega_weights_admissible(w)) throw DomainError("omega_point: weights must be nonnegative with sum < 1");
  Vec x = (1.0 - w.sum()) * limit_log(n, 0);
  for (int k = 1; k <= n - 2; ++k) x += w[k - 1] * limit_log(n, k);
  SuspensionSpec s;
  s.n = n;
  for (int i = 0; i < n - 1; ++i) s.t.push_back(std::exp2(x[i]));
  return s;
}

bool in_omega(const SuspensionSpec& spec, double tol) {
  try {
    spec.validate();
  } catch (const DomainError&) {
    return false;
  }
  if (!(spec.t.front() < 1.0)) return false;
  const double prod = std::accumulate(spec.t.begin(), spec.t.end(), 1.0, std::multiplies<>());
  const double target = std::exp2(-(spec.n - 1.0));
  return std::abs(prod - target) <= tol * target;
}

AreaProfile AreaProfile::from_spec(double t1, double t2, double sigma) {
  if (!(t1 > 0.0 && t2 > 0.0 && t2 <= t1 * (1 + 1e-12))) throw DomainError("AreaProfile: need 0 < t2 <= t1");
  AreaProfile p;
  p.kappa = 1.0 / (t1 * t1);
  p.Z = 2 * t1 * t2;
  p.sigma = sigma;
  if (sigma < 0.0) throw DomainError("AreaProfile: negative smoothing scale");
  if (sigma >= 0.5 * p.Z) throw DomainError("AreaProfile: smoothing collars overlap");
  p.M = sigma > 0.0 ? 5.0 * std::max(0.0, 2.0 - p.kappa * p.Z) / (2.0 * sigma) : 0.0;
  return p;
}

Jet2 AreaProfile::F(Jet2 z) const {
  const bool mirror = z.v > 0.5 * Z;
  const Jet2 zz = mirror ? Z - z : z;
  Jet2 out = kappa * zz * (Z - zz);
  if (sigma > 0.0 && M > 0.0) {
    const double c = 2.0 * M * sigma / 5.0 * sigma / 6.0;
    if (zz.v <= sigma) {
      const Jet2 q = 1.0 - zz / sigma;
      const Jet2 q2 = q * q;
      out = out + c * (1.0 - q2 * q2 * q2);
    } else {
      out = out + c;
    }
  }
  return out;
}

double AreaProfile::curvature(double z) const { return -0.5 * F(Jet2::variable(z)).d2; }

MetricField area_chart(const AreaProfile& prof, double margin) {
  MetricField mf;
  mf.dim = 2;
  mf.chart = [prof](const Vec& x) {
    const double F = prof.F(Jet2::constant(x[0])).v;
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0 / F;
    g(1, 1) = F;
    return g;
  };
  mf.box_lo = Vec(2);
  mf.box_hi = Vec(2);
  mf.box_lo << margin, 0.0;
  mf.box_hi << prof.Z - margin, 2 * M_PI;
  mf.periodic = {false, true};
  return mf;
}

SmoothingReport smooth_suspension(const SuspensionSpec& spec, double sigma, int grid) {
  spec.validate();
  SmoothingReport rep;
  rep.spec = spec;
  rep.volume_before = suspension_volume(spec);
  if (spec.round()) {
    rep.spec.sigma = 0.0;
    rep.volume_after = rep.volume_before;
    const double t = spec.t.front();
    rep.sec_min = rep.sec_max = 1.0 / (t * t);
    return rep;
  }
  if (spec.n != 3) throw DomainError("smooth_suspension: smoothing is implemented for two-dimensional cross-sections");
  if (!(sigma > 0.0)) throw DomainError("smooth_suspension: sigma must be positive");
  const AreaProfile prof = AreaProfile::from_spec(spec.t[0], spec.t[1], sigma);
  rep.spec.sigma = sigma;
  rep.smoothed = true;
  rep.sec_min = std::numeric_limits<double>::infinity();
  rep.sec_max = -rep.sec_min;
  for (int i = 1; i < grid; ++i) {
    const double K = prof.curvature(prof.Z * i / grid);
    rep.sec_min = std::min(rep.sec_min, K);
    rep.sec_max = std::max(rep.sec_max, K);
  }
  rep.volume_after = 2 * M_PI * prof.Z;
  rep.rescale = std::sqrt(rep.volume_before / rep.volume_after);
  return rep;
}

CrossSectionFamily example1_family_u(double sigma) {
  if (sigma < 0.0 || sigma >= 0.25) throw DomainError("example1_family_u: need 0 <= sigma < 1/4");
  CrossSectionFamily f;
  f.dim = 2;
  f.param = {0.0, 1.0};
  f.volume_normalized = true;
  f.label = "example1";
  f.metric = [sigma](double u, const Vec& x) {
    const double F = family_F(Jet2::constant(u), x[0], sigma).v;
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0 / F;
    g(1, 1) = F;
    return g;
  };
  f.exact = [sigma](double u, const Vec& x) {
    const double z = x[0];
    const Jet2 Fu = family_F(Jet2::variable(u), z, sigma);
    const double t1 = std::exp2(-(1.0 - u)), t2 = std::exp2(-1.0 - u);
    const Jet2 Fz = AreaProfile::from_spec(t1, t2, sigma).F(Jet2::variable(z));
    auto fu_at = [&](double zz) { return family_F(Jet2::variable(u), zz, sigma).d1; };
    auto dz = [&](double h) { return (fu_at(z + h) - fu_at(z - h)) / (2 * h); };
    const double Fuz = (4 * dz(5e-6) - dz(1e-5)) / 3;
    const double F = Fu.v;
    FamilyPoint p;
    p.g = Mat::Zero(2, 2);
    p.g(0, 0) = 1 / F;
    p.g(1, 1) = F;
    p.gs = Mat::Zero(2, 2);
    p.gs(0, 0) = -Fu.d1 / (F * F);
    p.gs(1, 1) = Fu.d1;
    p.gss = Mat::Zero(2, 2);
    p.gss(0, 0) = -Fu.d2 / (F * F) + 2 * Fu.d1 * Fu.d1 / (F * F * F);
    p.gss(1, 1) = Fu.d2;
    p.ric = -0.5 * Fz.d2 * p.g;
    p.codazzi = Vec::Zero(2);
    p.codazzi[0] = -Fuz / F;
    p.nabla_gs_norm = std::numeric_limits<double>::quiet_NaN();
    return p;
  };
  const double margin = 2e-3;
  f.box_lo = Vec(2);
  f.box_hi = Vec(2);
  f.box_lo << margin, 0.0;
  f.box_hi << 0.5 - margin, 2 * M_PI;
  f.periodic = {false, true};
  for (int k = 0; k < 10; ++k) {
    Vec x(2);
    x << 0.01 + 0.48 * k / 9.0, 1.0;
    f.sample_points.push_back(x);
  }
  return f;
}

namespace {

PathBounds estimate_bounds(const CrossSectionFamily& base) {
  const FamilyCheck c = check_family(base, linspace(0.0, 1.0, 21), base.sample_points);
  return {1.25 * std::max({c.gs_norm, c.nabla_gs_norm, 1e-3}), 1.25 * std::max(c.gss_norm, 1e-3)};
}

}  // namespace

Example1 build_example1_family(int n, int stages, double sigma) {
  if (n < 3) throw DomainError("build_example1_family: n must be at least 3");
  Example1 ex;
  ex.n = n;
  if (n == 3) {
    ex.base = example1_family_u(sigma);
    ex.bounds = estimate_bounds(ex.base);
    ex.path = recurrent_path(1, stages, ex.bounds, 1.0, nullptr);
    const PathSpec path = ex.path;
    ex.family = ex.base.reparametrized([path](double t) { return path.jet(t)[0]; },
                                       {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
                                       "example1-loop");
    return ex;
  }
  // Higher n: unsmoothed nested charts along the path through Ω.
  ex.bounds = {2.0 * (n - 1), 4.0 * (n - 1) * (n - 1)};
  ex.path = recurrent_path(n - 2, stages, ex.bounds, 1.0, &omega_weights_admissible);
  const PathSpec path = ex.path;
  CrossSectionFamily f;
  f.dim = n - 1;
  f.label = "example1-loop";
  f.metric = [path, n](double t, const Vec& x) { return suspension_chart(omega_point(n, path.position(t))).at(x); };
  const MetricField chart = suspension_chart(omega_point(n, Vec::Zero(n - 2)));
  f.box_lo = chart.box_lo;
  f.box_hi = chart.box_hi;
  f.periodic = chart.periodic;
  for (int k = 0; k < 10; ++k) {
    Vec x(n - 1);
    for (int i = 0; i < n - 2; ++i) x[i] = 0.4 + 2.3 * ((k * (i + 3)) % 10) / 9.0;
    x[n - 2] = 1.0;
    f.sample_points.push_back(x);
  }
  ex.family = f;
  return ex;
}

std::vector<double> path_cover_times(const PathSpec& path, int per_segment) {
  if (per_segment < 1) throw DomainError("path_cover_times: per_segment must be positive");
  const auto& knots = path.knots();
  std::vector<double> out;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    out.push_back(knots[i]);
    if (i + 1 < knots.size())
      for (int j = 1; j < per_segment; ++j)
        out.push_back(knots[i] + (knots[i + 1] - knots[i]) * j / per_segment);
  }
  return out;
}

}  // namespace tcone
