#include "tcone/cone_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace tcone {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Quintic step: 1 below lo, 0 above hi, C² in between.
Jet2 cutoff(Jet2 x, double lo, double hi) {
  if (x.v <= lo) return Jet2::constant(1.0);
  if (x.v >= hi) return Jet2::constant(0.0);
  const Jet2 t = (x - lo) / (hi - lo);
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

// Converts jets in a log-radius variable v (dv/du = sigma, u = log r) into the
// scale-free radial profile.
ProfileJet assemble(double L, Jet2 eps, Jet2 h, Jet2 f, double sigma) {
  ProfileJet p;
  p.L = L;
  p.lnL = std::log(L);
  auto r1 = [sigma](Jet2 x) { return sigma * x.d1; };
  auto r2 = [sigma](Jet2 x) { return x.d2 - sigma * x.d1; };
  p.eps = eps.v;
  p.e1 = r1(eps);
  p.e2 = r2(eps);
  p.h = h.v;
  p.dphi = h.v + r1(h);
  p.r_ddphi = 2 * r1(h) + r2(h);
  p.f = f.v;
  p.q1 = r1(f);
  p.q2 = r2(f);
  return p;
}

void require_admissible(double L, const char* where) {
  if (!(L > std::exp(1.0)) || !std::isfinite(L))
    throw DomainError(std::string(where) + ": radius outside the admissible range (need log L > 1)");
}

}  // namespace

LemmaParams LemmaParams::defaults(int n) {
  LemmaParams p;
  p.n = n;
  p.D = 16.0 * n;
  p.F = 1.0 / 64;
  p.E = std::min(1.0, p.D * p.F);
  return p;
}

void LemmaParams::validate() const {
  if (n < 2) throw DomainError("LemmaParams: n must be at least 2");
  if (!(E > 0.0 && E <= 1.0)) throw DomainError("LemmaParams: E must lie in (0, 1]");
  if (!(F > 0.0 && F <= 1.0)) throw DomainError("LemmaParams: F must lie in (0, 1]");
  if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("LemmaParams: r0 must lie in (0, 1)");
  if (!(h_inf > 0.0 && h_inf < 1.0)) throw DomainError("LemmaParams: h_inf must lie in (0, 1)");
  if (!(D > 0.0)) throw DomainError("LemmaParams: D must be positive");
  if (!(r_far > 0.0)) throw DomainError("LemmaParams: r_far must be positive");
}

RadialJet ProfileJet::radial() const {
  RadialJet j;
  j.s = f;
  j.h = h;
  j.dphi = dphi;
  j.r_ddphi = r_ddphi;
  j.q1 = q1;
  j.q2 = q2;
  return j;
}

ProfileJet near_profile(double L, const LemmaParams& p, const Stabilizer& stab) {
  require_admissible(L, "near_profile");
  const Jet2 Lj = Jet2::variable(L);
  const Jet2 lnL = log(Lj);
  Jet2 eps = p.E / lnL;
  if (stab.enabled) eps = eps * cutoff(lnL, stab.lo, stab.hi);
  const Jet2 h = 1.0 - eps;
  const Jet2 f = -p.F * log(lnL);
  return assemble(L, eps, h, f, -1.0);
}

ProfileJet far_profile(double L, const LemmaParams& p) {
  require_admissible(L, "far_profile");
  if (!(p.h_inf / (1.0 - p.E) < 1.0)) throw DomainError("far_profile: need h_inf < 1 - E");
  const Jet2 Lj = Jet2::variable(L);
  const Jet2 lnL = log(Lj);
  const Jet2 eps = p.E / lnL;
  const Jet2 h = p.h_inf / (1.0 - eps);
  const Jet2 f = p.F * log(lnL);
  return assemble(L, eps, h, f, +1.0);
}

double log_radius(double r, const LemmaParams& p) {
  if (!(r > 0.0)) throw DomainError("log_radius: radius must be positive");
  const double L = -std::log(p.r0 * r);
  require_admissible(L, "log_radius");
  return L;
}

Jet2 eval_eps(double r, const LemmaParams& p) {
  const ProfileJet j = near_profile(log_radius(r, p), p);
  return {j.eps, j.e1 / r, j.e2 / (r * r)};
}

Jet2 eval_h(double r, const LemmaParams& p) {
  const ProfileJet j = near_profile(log_radius(r, p), p);
  return {j.h, -j.e1 / r, -j.e2 / (r * r)};
}

Jet2 eval_f(double r, const LemmaParams& p) {
  const ProfileJet j = near_profile(log_radius(r, p), p);
  return {j.f, j.q1 / r, j.q2 / (r * r)};
}

LemmaBounds lemma_bounds_scaled(double L, const LemmaParams& p) {
  require_admissible(L, "lemma_bounds");
  const double lnL = std::log(L);
  const double h = 1.0 - p.E / lnL;
  return {p.E / (2 * lnL * lnL * L), -p.D * p.F / (lnL * L), h * h * p.E / lnL};
}

LemmaBounds lemma_bounds(double r, const LemmaParams& p) {
  const LemmaBounds s = lemma_bounds_scaled(log_radius(r, p), p);
  return {s.rr / (r * r), s.mixed / r, s.tangential};
}

double case_bound_tangential(double L, double delta, const LemmaParams& p) {
  const double lnL = std::log(L);
  return std::sqrt(std::max(0.0, 1 - delta * delta)) * (p.E - p.D * p.F) / (lnL * L);
}

double case_bound_radial(double L, double delta, const LemmaParams& p) {
  const double lnL = std::log(L);
  return delta * (p.E / (2 * lnL) - p.D * p.F / L) / (lnL * L);
}

ProfileJet ConeMetric::profile(double L) const {
  return branch == Branch::Near ? near_profile(L, params, stabilizer) : far_profile(L, params);
}

ConeRicci ConeMetric::ricci(double L, const Vec& x) const {
  return ricci_at(L, x, profile(L).f);
}

ConeRicci ConeMetric::ricci_at(double L, const Vec& x, double s) const {
  const ProfileJet pj = profile(L);
  const FamilyPoint fp = family.at(s, x);
  return cone_ricci_scaled(pj.radial(), fp, params.n, family.volume_normalized);
}

DirectionalOptions DirectionalOptions::defaults(const CrossSectionFamily& family) {
  DirectionalOptions o;
  o.lnL_nodes = triple_log_nodes(1.0, 4.0, 200);
  o.delta_nodes = linspace(0.0, 1.0, 101);
  o.x_samples = family.sample_points;
  return o;
}

std::vector<double> triple_log_nodes(double lo, double hi, int count) {
  auto v = linspace(lo, hi, count);
  for (auto& x : v) x = std::exp(x);
  return v;
}

namespace {

// Data of one (radius, sample) pair: unit radial value a and, per direction,
// the unit mixed value b and unit tangential value c.
struct SampleData {
  double a = 0.0;
  std::vector<double> b, c;
  double exact = 0.0;  // least eigenvalue of the diagonally normalized matrix
  double mixed_abs = 0.0;
};

std::vector<Vec> directions(const Mat& g, int count) {
  const int m = static_cast<int>(g.rows());
  const Eigen::LLT<Mat> llt(g);
  const Mat E = llt.matrixU().solve(Mat::Identity(m, m));
  std::vector<Vec> out;
  if (m == 1) {
    out.push_back(E.col(0));
    return out;
  }
  for (int k = 0; k < count; ++k) {
    const double alpha = M_PI * k / count;
    const int j = 1 + k % (m - 1);
    out.push_back(std::cos(alpha) * E.col(0) + std::sin(alpha) * E.col(j));
  }
  return out;
}

double normalized_min_eig(const Mat& M) {
  const Vec d = M.diagonal();
  if (d.minCoeff() <= 0.0) {
    const double scale = std::max(1e-300, d.cwiseAbs().maxCoeff());
    return Eigen::SelfAdjointEigenSolver<Mat>(M / scale).eigenvalues().minCoeff();
  }
  const Vec s = d.cwiseSqrt().cwiseInverse();
  const Mat N = s.asDiagonal() * M * s.asDiagonal();
  return Eigen::SelfAdjointEigenSolver<Mat>(N).eigenvalues().minCoeff();
}

template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

std::size_t node_index(const std::vector<double>& nodes, double v) {
  return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
}

}  // namespace

DirectionalReport directional_ricci_min(const ConeMetric& cone, const DirectionalOptions& opts) {
  if (opts.lnL_nodes.empty() || opts.delta_nodes.empty() || opts.x_samples.empty())
    throw DomainError("directional_ricci_min: empty grid");
  const std::size_t nL = opts.lnL_nodes.size(), nxs = opts.x_samples.size();
  const std::size_t ns = 1 + opts.extra_s.size(), nx = nxs * ns;
  std::vector<SampleData> data(nL * nx);
  const LemmaParams& p = cone.params;

  parallel_for(nL * nx, opts.workers, [&](std::size_t idx) {
    const std::size_t i = idx / nx, k = (idx % nx) / ns, si = idx % ns;
    const double L = std::exp(opts.lnL_nodes[i]);
    const ConeRicci c = si == 0 ? cone.ricci(L, opts.x_samples[k])
                                : cone.ricci_at(L, opts.x_samples[k], opts.extra_s[si - 1]);
    SampleData& d = data[idx];
    d.a = c.rr;
    for (const Vec& w : directions(c.g, opts.directions)) {
      d.b.push_back(c.ri.dot(w) / c.h);
      d.c.push_back(w.dot(c.ij * w) / (c.h * c.h));
      d.mixed_abs = std::max(d.mixed_abs, std::abs(c.ri.dot(w)));
    }
    d.exact = normalized_min_eig(c.orthonormal());
  });

  DirectionalReport rep;
  rep.d_estimate = 0.0;
  for (std::size_t i = 0; i < nL; ++i) {
    const double L = std::exp(opts.lnL_nodes[i]);
    const double unit = p.F / (std::log(L) * L);
    for (std::size_t k = 0; k < nx; ++k) rep.d_estimate = std::max(rep.d_estimate, data[i * nx + k].mixed_abs / unit);
  }

  std::vector<GridAxis> axes{{"lnL", opts.lnL_nodes}, {"delta", opts.delta_nodes}};
  rep.grid = scan_grid(
      axes, {"raw", "case_tangential", "case_radial"},
      [&](const std::vector<double>& node) {
        const std::size_t i = node_index(opts.lnL_nodes, node[0]);
        const double delta = node[1];
        const double s = std::sqrt(std::max(0.0, 1 - delta * delta));
        const double L = std::exp(node[0]);
        double best = std::numeric_limits<double>::infinity();
        double raw = best;
        for (std::size_t k = 0; k < nx; ++k) {
          const SampleData& d = data[i * nx + k];
          for (std::size_t j = 0; j < d.b.size(); ++j) {
            const double q = delta * delta * d.a - 2 * delta * s * std::abs(d.b[j]) + s * s * d.c[j];
            raw = std::min(raw, q);
            double v;
            if (d.a > 0.0 && d.c[j] > 0.0)
              v = q / (delta * delta * d.a + s * s * d.c[j]);
            else
              v = std::min(q, 0.0) / std::max({std::abs(d.a), std::abs(d.c[j]), 1e-300}) - 1e-300;
            best = std::min(best, v);
          }
        }
        return NodeValue{best, {raw, case_bound_tangential(L, delta, p), case_bound_radial(L, delta, p)}};
      },
      opts.workers);
  rep.raw_minimum = rep.grid.component_minima[0];
  rep.case_tangential_min = rep.grid.component_minima[1];
  rep.case_radial_min = rep.grid.component_minima[2];

  rep.exact = scan_grid(
      {{"lnL", opts.lnL_nodes}}, {"exact"},
      [&](const std::vector<double>& node) {
        const std::size_t i = node_index(opts.lnL_nodes, node[0]);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nx; ++k) best = std::min(best, data[i * nx + k].exact);
        return NodeValue{best, {best}};
      },
      1);
  return rep;
}

SearchResult feasibility_search(int n, const CrossSectionFamily& family, const SearchOptions& opts) {
  if (opts.F_steps <= 0 || opts.r0_list.empty() || !(opts.F_ratio > 0.0 && opts.F_ratio < 1.0) ||
      !(opts.E_ratio > 1.0))
    throw DomainError("feasibility_search: empty or malformed sweep schedule");
  const DirectionalOptions grid = opts.grid.lnL_nodes.empty() ? DirectionalOptions::defaults(family) : opts.grid;
  const double D = opts.D > 0.0 ? opts.D : 16.0 * n;

  SearchResult res;
  double worst = std::numeric_limits<double>::infinity();
  double F = opts.F_start;
  for (int fi = 0; fi < opts.F_steps; ++fi, F *= opts.F_ratio) {
    for (double E = D * F; E <= 1.0; E *= opts.E_ratio) {
      for (double r0 : opts.r0_list) {
        ConeMetric cone;
        cone.params.n = n;
        cone.params.E = E;
        cone.params.F = F;
        cone.params.r0 = r0;
        cone.params.h_inf = opts.h_inf;
        cone.params.D = D;
        cone.params.validate();
        cone.family = family;
        DirectionalReport rep = directional_ricci_min(cone, grid);
        ++res.candidates;
        if (rep.positive()) {
          res.feasible = true;
          res.params = cone.params;
          res.report = std::move(rep);
          return res;
        }
        const double score = std::min(rep.grid.lower(), rep.exact.lower());
        if (score < worst) {
          worst = score;
          std::ostringstream os;
          os << "E=" << E << " F=" << F << " r0=" << r0 << " grid_min=" << rep.grid.minimum << " at lnL="
             << rep.grid.argmin[0] << " delta=" << rep.grid.argmin[1] << " exact_min=" << rep.exact.minimum
             << " at lnL=" << rep.exact.argmin[0];
          res.most_violated = os.str();
          res.params = cone.params;
          res.report = std::move(rep);
        }
      }
    }
  }
  return res;
}

Snapshot tangent_cone_at_scale(const ConeMetric& cone, double L) {
  const ProfileJet pj = cone.profile(L);
  return {L, pj.f, pj.h, std::pow(pj.h, cone.params.n - 1)};
}

double cone_closeness(const ConeMetric& cone, double L, double rho_lo, double rho_hi, int nodes) {
  if (!(rho_lo > 0.0) || rho_hi < rho_lo) throw DomainError("cone_closeness: malformed window");
  const ProfileJet base = cone.profile(L);
  const double sign = cone.branch == Branch::Near ? -1.0 : 1.0;
  std::vector<Mat> g0;
  for (const Vec& x : cone.family.sample_points) g0.push_back(cone.family.metric(base.f, x));
  double dh = 0.0, dg = 0.0;
  const int count = rho_hi > rho_lo ? std::max(nodes, 2) : 1;
  for (int k = 0; k < count; ++k) {
    const double rho = count == 1 ? rho_lo : rho_lo * std::pow(rho_hi / rho_lo, k / (count - 1.0));
    const ProfileJet pj = cone.profile(L + sign * std::log(rho));
    dh = std::max(dh, std::abs(pj.h - base.h) / base.h);
    for (std::size_t i = 0; i < g0.size(); ++i)
      dg = std::max(dg, (cone.family.metric(pj.f, cone.family.sample_points[i]) - g0[i]).cwiseAbs().maxCoeff());
  }
  return dh + dg;
}

}  // namespace tcone
