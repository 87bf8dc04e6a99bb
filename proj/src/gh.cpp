#include "tcone/gh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "tcone/suspension.hpp"

namespace tcone {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Relation = std::vector<std::pair<int, int>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

// ---------------------------------------------------------------------------
// FiniteMetricSpace
// ---------------------------------------------------------------------------

void FiniteMetricSpace::validate(double slack) const {
  const int n = size();
  if (D.rows() != D.cols()) throw DomainError("FiniteMetricSpace: distance matrix is not square");
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw DomainError("FiniteMetricSpace: label count does not match the matrix");
  for (int i = 0; i < n; ++i) {
    if (D(i, i) != 0.0) throw DomainError("FiniteMetricSpace: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (!(D(i, j) >= 0.0) || !std::isfinite(D(i, j)))
        throw DomainError("FiniteMetricSpace: negative or non-finite distance");
      if (std::abs(D(i, j) - D(j, i)) > slack) throw DomainError("FiniteMetricSpace: asymmetric distances");
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (D(i, j) > D(i, k) + D(k, j) + slack)
          throw DomainError("FiniteMetricSpace: triangle inequality violated");
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(Mat D, std::string provenance) {
  FiniteMetricSpace s;
  s.D = std::move(D);
  s.provenance = std::move(provenance);
  for (int i = 0; i < s.size(); ++i) s.labels.push_back("p" + std::to_string(i));
  s.validate();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::point() { return from_matrix(Mat::Zero(1, 1), "point"); }

FiniteMetricSpace FiniteMetricSpace::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("FiniteMetricSpace: scale must be positive");
  FiniteMetricSpace s = *this;
  s.D *= lambda;
  return s;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

// Shortest coordinate displacement from a to b, honouring periodic axes.
Vec displacement(const MetricField& chart, const Vec& a, const Vec& b) {
  Vec d = b - a;
  for (int i = 0; i < chart.dim; ++i) {
    if (i < static_cast<int>(chart.periodic.size()) && chart.periodic[i]) {
      const double P = chart.box_hi[i] - chart.box_lo[i];
      d[i] -= P * std::round(d[i] / P);
    }
  }
  return d;
}

Vec wrap(const MetricField& chart, Vec x) {
  for (int i = 0; i < chart.dim; ++i) {
    if (i < static_cast<int>(chart.periodic.size()) && chart.periodic[i]) {
      const double P = chart.box_hi[i] - chart.box_lo[i];
      x[i] = chart.box_lo[i] + std::fmod(std::fmod(x[i] - chart.box_lo[i], P) + P, P);
    }
  }
  return x;
}

double segment_length(const MetricField& chart, const Vec& a, const Vec& d) {
  auto speed = [&](double tau) {
    const Mat g = chart.at(wrap(chart, a + tau * d));
    return std::sqrt(std::max(0.0, d.dot(g * d)));
  };
  return (speed(0.0) + 4.0 * speed(0.5) + speed(1.0)) / 6.0;
}

}  // namespace

FiniteMetricSpace sample_space(const MetricField& chart, const SampleOptions& opts) {
  const int dim = chart.dim;
  if (dim < 1 || chart.box_lo.size() != dim || chart.box_hi.size() != dim)
    throw DomainError("sample_space: malformed chart");
  if (opts.points < 2) throw DomainError("sample_space: need at least two points");
  if (opts.degree < 1) throw DomainError("sample_space: graph degree must be positive");
  if (opts.oversample < 1) throw DomainError("sample_space: oversample must be positive");
  for (int i = 0; i < dim; ++i)
    if (!(chart.box_hi[i] > chart.box_lo[i])) throw DomainError("sample_space: empty chart box");

  // Jittered stratified candidate pool.
  const int per_axis = std::max(
      1, static_cast<int>(std::ceil(std::pow(static_cast<double>(opts.points) * opts.oversample, 1.0 / dim))));
  long long pool = 1;
  for (int i = 0; i < dim; ++i) pool *= per_axis;
  if (pool < opts.points) throw DomainError("sample_space: chart too small for the requested sample");
  std::mt19937_64 rng(opts.seed);
  std::vector<Vec> cand;
  std::vector<double> weight;
  cand.reserve(pool);
  weight.reserve(pool);
  std::vector<int> idx(dim, 0);
  for (long long c = 0; c < pool; ++c) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) {
      const double h = (chart.box_hi[i] - chart.box_lo[i]) / per_axis;
      x[i] = chart.box_lo[i] + h * (idx[i] + unit(rng));
    }
    const Mat g = chart.at(x);
    const double det = g.determinant();
    if (!(det > 0.0)) throw DomainError("sample_space: degenerate metric in the chart box");
    cand.push_back(x);
    weight.push_back(std::sqrt(det));
    for (int i = 0; i < dim && ++idx[i] == per_axis; ++i) idx[i] = 0;
  }

  // Systematic resampling by volume weight; repeated picks move to the next free candidate.
  std::vector<double> cum(weight.size());
  std::partial_sum(weight.begin(), weight.end(), cum.begin());
  const double total = cum.back();
  const double offset = unit(rng);
  std::vector<char> used(cand.size(), 0);
  std::vector<Vec> pts;
  for (int k = 0; k < opts.points; ++k) {
    const double target = (k + offset) / opts.points * total;
    std::size_t j = std::lower_bound(cum.begin(), cum.end(), target) - cum.begin();
    j = std::min(j, cand.size() - 1);
    std::size_t probe = 0;
    while (used[j] && probe++ < cand.size()) j = (j + 1) % cand.size();
    used[j] = 1;
    pts.push_back(cand[j]);
  }

  // Edge lengths and the symmetric k-nearest graph.
  const int n = opts.points;
  Mat len(n, n);
  for (int i = 0; i < n; ++i) {
    len(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) len(i, j) = len(j, i) = segment_length(chart, pts[i], displacement(chart, pts[i], pts[j]));
  }
  const int k = std::min(opts.degree, n - 1);
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  std::vector<std::vector<char>> linked(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k + 1, order.end(), [&](int a, int b) {
      return len(i, a) < len(i, b) || (len(i, a) == len(i, b) && a < b);
    });
    for (int q = 0; q <= k; ++q) {
      const int j = order[q];
      if (j == i || linked[i][j]) continue;
      linked[i][j] = linked[j][i] = 1;
      adj[i].push_back({j, len(i, j)});
      adj[j].push_back({i, len(i, j)});
    }
  }

  // All-pairs shortest paths.
  Mat D = Mat::Constant(n, n, kInf);
  using Item = std::pair<double, int>;
  for (int src = 0; src < n; ++src) {
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    D(src, src) = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > D(src, u)) continue;
      for (const auto& [v, w] : adj[u]) {
        if (d + w < D(src, v)) {
          D(src, v) = d + w;
          pq.push({d + w, v});
        }
      }
    }
  }
  if (!std::isfinite(D.maxCoeff())) throw DomainError("sample_space: disconnected neighbour graph");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) D(i, j) = D(j, i) = std::min(D(i, j), D(j, i));

  FiniteMetricSpace out;
  out.D = std::move(D);
  out.provenance = "sample_space N=" + std::to_string(n) + " degree=" + std::to_string(opts.degree) +
                   " seed=" + std::to_string(opts.seed) + " oversample=" + std::to_string(opts.oversample);
  for (int i = 0; i < n; ++i) out.labels.push_back("p" + std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Relation& rel) {
  double d = 0.0;
  for (std::size_t a = 0; a < rel.size(); ++a)
    for (std::size_t b = a + 1; b < rel.size(); ++b)
      d = std::max(d, std::abs(X.D(rel[a].first, rel[b].first) - Y.D(rel[a].second, rel[b].second)));
  return d;
}

bool is_correspondence(int nx, int ny, const Relation& rel) {
  std::vector<char> cx(nx, 0), cy(ny, 0);
  for (const auto& [x, y] : rel) {
    if (x < 0 || x >= nx || y < 0 || y >= ny) return false;
    cx[x] = cy[y] = 1;
  }
  return std::all_of(cx.begin(), cx.end(), [](char c) { return c; }) &&
         std::all_of(cy.begin(), cy.end(), [](char c) { return c; });
}

namespace {

// Depth-first search for a correspondence of distortion <= tau: assigns f(x) for
// every x, then g(y) for every y, each new pair compatible with all chosen pairs.
class ExactSearch {
 public:
  ExactSearch(const Mat& dx, const Mat& dy) : dx_(dx), dy_(dy), nx_(dx.rows()), ny_(dy.rows()) {}

  bool feasible(double tau, Relation& out) {
    tau_ = tau;
    chosen_.clear();
    if (!extend(0)) return false;
    out = chosen_;
    return true;
  }

 private:
  bool compatible(int x, int y) const {
    for (const auto& [a, b] : chosen_)
      if (std::abs(dx_(x, a) - dy_(y, b)) > tau_) return false;
    return true;
  }
  bool extend(int depth) {
    if (depth == nx_ + ny_) return true;
    const bool left = depth < nx_;
    const int fixed = left ? depth : depth - nx_;
    const int options = left ? ny_ : nx_;
    for (int o = 0; o < options; ++o) {
      const int x = left ? fixed : o, y = left ? o : fixed;
      if (!compatible(x, y)) continue;
      chosen_.push_back({x, y});
      if (extend(depth + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const Mat& dx_;
  const Mat& dy_;
  int nx_, ny_;
  double tau_ = 0.0;
  Relation chosen_;
};

GHBoundPair exact_upper(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  std::vector<double> values{0.0};
  const int nx = X.size(), ny = Y.size();
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < nx; ++b)
      for (int c = 0; c < ny; ++c)
        for (int d = 0; d < ny; ++d) values.push_back(std::abs(X.D(a, b) - Y.D(c, d)));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  ExactSearch search(X.D, Y.D);
  std::size_t lo = 0, hi = values.size() - 1;  // values[hi] is always feasible
  Relation best;
  search.feasible(values[hi], best);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    Relation rel;
    if (search.feasible(values[mid], rel)) {
      hi = mid;
      best = std::move(rel);
    } else {
      lo = mid + 1;
    }
  }
  GHBoundPair out;
  out.witness = std::move(best);
  out.upper = 0.5 * distortion(X, Y, out.witness);
  out.upper_method = "exact";
  out.exact = true;
  return out;
}

// Correspondence as f: X -> Y plus g: Y -> X, with local repair of the pair
// responsible for the largest distortion.
class Matcher {
 public:
  Matcher(const Mat& dx, const Mat& dy) : dx_(dx), dy_(dy), nx_(dx.rows()), ny_(dy.rows()) {}

  Relation relation(const std::vector<int>& f, const std::vector<int>& g) const {
    Relation r;
    for (int x = 0; x < nx_; ++x) r.push_back({x, f[x]});
    for (int y = 0; y < ny_; ++y) r.push_back({g[y], y});
    return r;
  }

  // Row maximum of pair p against all pairs.
  double row(const Relation& r, int x, int y, std::size_t skip) const {
    double m = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q)
      if (q != skip) m = std::max(m, std::abs(dx_(x, r[q].first) - dy_(y, r[q].second)));
    return m;
  }

  double total(const Relation& r, std::size_t* worst = nullptr) const {
    double m = -1.0;
    std::size_t w = 0;
    for (std::size_t p = 0; p < r.size(); ++p) {
      const double v = row(r, r[p].first, r[p].second, p);
      if (v > m) {
        m = v;
        w = p;
      }
    }
    if (worst) *worst = w;
    return std::max(m, 0.0);
  }

  // Repeatedly reassigns the partner of the worst pair; stops when no move helps.
  double repair(std::vector<int>& f, std::vector<int>& g, int max_moves) const {
    Relation r = relation(f, g);
    std::size_t worst = 0;
    double cur = total(r, &worst);
    std::vector<char> tabu(r.size(), 0);
    for (int move = 0; move < max_moves; ++move) {
      const bool left = worst < static_cast<std::size_t>(nx_);
      const int fixed = left ? r[worst].first : r[worst].second;
      const int options = left ? ny_ : nx_;
      double best_row = row(r, r[worst].first, r[worst].second, worst);
      int best_o = -1;
      for (int o = 0; o < options; ++o) {
        const int x = left ? fixed : o, y = left ? o : fixed;
        const double v = row(r, x, y, worst);
        if (v < best_row) {
          best_row = v;
          best_o = o;
        }
      }
      if (best_o < 0) {
        if (tabu[worst]) break;
        tabu[worst] = 1;
        // try the partner of the worst pair's worst conflict instead
        double m = -1.0;
        std::size_t q_star = worst;
        for (std::size_t q = 0; q < r.size(); ++q) {
          if (q == worst || tabu[q]) continue;
          const double v = std::abs(dx_(r[worst].first, r[q].first) - dy_(r[worst].second, r[q].second));
          if (v > m) {
            m = v;
            q_star = q;
          }
        }
        if (q_star == worst) break;
        worst = q_star;
        continue;
      }
      const std::pair<int, int> saved = r[worst];
      (left ? r[worst].second : r[worst].first) = best_o;
      std::size_t w2 = 0;
      const double next = total(r, &w2);
      if (next > cur) {
        r[worst] = saved;
        break;
      }
      std::fill(tabu.begin(), tabu.end(), 0);
      cur = next;
      worst = w2;
    }
    f.assign(nx_, 0);
    g.assign(ny_, 0);
    for (int x = 0; x < nx_; ++x) f[x] = r[x].second;
    for (int y = 0; y < ny_; ++y) g[y] = r[nx_ + y].first;
    return total(r);
  }

  // Matching against two anchors in each space.
  void anchored(int x0, int x1, int y0, int y1, std::vector<int>& f, std::vector<int>& g) const {
    f.assign(nx_, 0);
    g.assign(ny_, 0);
    for (int x = 0; x < nx_; ++x) {
      double best = kInf;
      for (int y = 0; y < ny_; ++y) {
        const double v = std::max(std::abs(dx_(x0, x) - dy_(y0, y)), std::abs(dx_(x1, x) - dy_(y1, y)));
        if (v < best) {
          best = v;
          f[x] = y;
        }
      }
    }
    for (int y = 0; y < ny_; ++y) {
      double best = kInf;
      for (int x = 0; x < nx_; ++x) {
        const double v = std::max(std::abs(dx_(x0, x) - dy_(y0, y)), std::abs(dx_(x1, x) - dy_(y1, y)));
        if (v < best) {
          best = v;
          g[y] = x;
        }
      }
    }
  }

 private:
  const Mat& dx_;
  const Mat& dy_;
  int nx_, ny_;
};

std::pair<int, int> diametral(const Mat& d) {
  Eigen::Index i = 0, j = 0;
  d.maxCoeff(&i, &j);
  return {static_cast<int>(i), static_cast<int>(j)};
}

GHBoundPair heuristic_upper(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, int iterations) {
  const int nx = X.size(), ny = Y.size();
  Matcher m(X.D, Y.D);
  std::vector<int> best_f, best_g;
  double best = kInf;
  auto consider = [&](std::vector<int> f, std::vector<int> g) {
    const double v = m.repair(f, g, 4 * (nx + ny));
    if (v < best) {
      best = v;
      best_f = std::move(f);
      best_g = std::move(g);
    }
  };
  if (nx == ny) {
    std::vector<int> id(nx);
    std::iota(id.begin(), id.end(), 0);
    consider(id, id);
  }
  const auto [x0, x1] = diametral(X.D);
  const auto [y0, y1] = diametral(Y.D);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (int it = 0; it < iterations; ++it) {
    int a0 = x0, a1 = x1, b0 = y0, b1 = y1;
    if (it % 2 == 1) std::swap(b0, b1);
    if (it >= 2) {
      a0 = static_cast<int>(rng() % nx);
      a1 = static_cast<int>(rng() % nx);
      b0 = static_cast<int>(rng() % ny);
      b1 = static_cast<int>(rng() % ny);
    }
    std::vector<int> f, g;
    m.anchored(a0, a1, b0, b1, f, g);
    consider(std::move(f), std::move(g));
  }
  GHBoundPair out;
  out.witness = m.relation(best_f, best_g);
  out.upper = 0.5 * distortion(X, Y, out.witness);
  out.upper_method = "anchored-repair";
  return out;
}

// Hausdorff distance between two finite subsets of the line.
double line_hausdorff(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto one_sided = [](const std::vector<double>& p, const std::vector<double>& q) {
    double h = 0.0;
    for (double v : p) {
      auto it = std::lower_bound(q.begin(), q.end(), v);
      double d = kInf;
      if (it != q.end()) d = std::min(d, *it - v);
      if (it != q.begin()) d = std::min(d, v - *std::prev(it));
      h = std::max(h, d);
    }
    return h;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

std::vector<double> eccentricities(const Mat& d) {
  std::vector<double> e(d.rows());
  for (Eigen::Index i = 0; i < d.rows(); ++i) e[i] = d.row(i).maxCoeff();
  return e;
}

std::vector<double> distance_values(const Mat& d) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i; j < d.cols(); ++j) v.push_back(d(i, j));
  return v;
}

// Canonical order so that both bounds are symmetric in their arguments.
bool swapped_order(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  if (X.size() != Y.size()) return X.size() > Y.size();
  const double* a = X.D.data();
  const double* b = Y.D.data();
  return std::lexicographical_compare(b, b + Y.D.size(), a, a + X.D.size());
}

}  // namespace

GHBoundPair gh_upper_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, int iterations) {
  if (X.size() == 0 || Y.size() == 0) throw DomainError("gh_upper_bound: empty space");
  if (swapped_order(X, Y)) {
    GHBoundPair r = gh_upper_bound(Y, X, iterations);
    for (auto& p : r.witness) std::swap(p.first, p.second);
    return r;
  }
  if (X.size() <= kExactGhPoints && Y.size() <= kExactGhPoints) return exact_upper(X, Y);
  return heuristic_upper(X, Y, std::max(iterations, 1));
}

GHBoundPair gh_lower_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  if (X.size() == 0 || Y.size() == 0) throw DomainError("gh_lower_bound: empty space");
  const double diam = std::abs(X.diameter() - Y.diameter());
  const double ecc = line_hausdorff(eccentricities(X.D), eccentricities(Y.D));
  const double dist = line_hausdorff(distance_values(X.D), distance_values(Y.D));
  GHBoundPair out;
  out.lower = 0.5 * std::max({diam, ecc, dist});
  out.lower_method = diam >= ecc && diam >= dist ? "diameter" : (ecc >= dist ? "eccentricity" : "distance-set");
  return out;
}

GHBoundPair gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, int iterations) {
  GHBoundPair out = gh_upper_bound(X, Y, iterations);
  const GHBoundPair lo = gh_lower_bound(X, Y);
  out.lower = lo.lower;
  out.lower_method = lo.lower_method;
  return out;
}

// ---------------------------------------------------------------------------
// Tangent cone experiment
// ---------------------------------------------------------------------------

LemmaParams ConeExperimentSpec::default_params() { return LemmaParams::defaults(3); }

void ConeExperimentSpec::validate() const {
  params.validate();
  if (params.n != 3) throw DomainError("cone experiment: only n = 3 cross-sections are sampled");
  if (stages < 1) throw DomainError("cone experiment: stages must be positive");
  if (targets.size() < 2) throw DomainError("cone experiment: need at least two targets");
  if (tolerances.empty()) throw DomainError("cone experiment: empty tolerance sequence");
  for (const auto& t : targets)
    if (!(t.u >= 0.0 && t.u <= 1.0)) throw DomainError("cone experiment: target parameter outside [0, 1]");
  for (double tol : tolerances)
    if (!(tol > 0.0)) throw DomainError("cone experiment: tolerances must be positive");
  if (sampling.points < 2 || iterations < 1) throw DomainError("cone experiment: bad sampling options");
}

namespace {

// Cross-section chart (z, θ) of the n = 3 family at parameter u, scaled by h².
MetricField cross_section_chart(const CrossSectionFamily& base, double u, double h) {
  MetricField mf;
  mf.dim = 2;
  mf.chart = [base, u, h](const Vec& x) { return (h * h * base.metric(u, x)).eval(); };
  mf.box_lo = Vec(2);
  mf.box_hi = Vec(2);
  mf.box_lo << 1e-6, 0.0;
  mf.box_hi << 0.5 - 1e-6, 2 * M_PI;
  mf.periodic = {false, true};
  return mf;
}

}  // namespace

ConeExperimentReport tangent_cone_experiment(const ConeExperimentSpec& spec) {
  spec.validate();
  const Example1 ex = build_example1_family(3, spec.stages, spec.sigma);
  const std::size_t nt = spec.targets.size();
  std::vector<FiniteMetricSpace> targets;
  ConeExperimentReport rep;
  for (const auto& t : spec.targets) {
    targets.push_back(sample_space(cross_section_chart(ex.base, t.u, 1.0), spec.sampling));
    targets.back().provenance += " target=" + t.label;
    rep.target_diameters.push_back(targets.back().diameter());
  }
  rep.targets = targets;
  const LemmaParams& p = spec.params;
  rep.final_own_upper.assign(nt, kInf);
  rep.final_other_lower.assign(nt, kInf);
  for (std::size_t k = 0; k < nt; ++k) {
    Vec target(1);
    target[0] = spec.targets[k].u;
    double t_min = 0.0;
    for (double tol : spec.tolerances) {
      const auto visit = ex.path.find_visit(target, tol, t_min);
      if (!visit) continue;
      t_min = visit->t;
      ConeExperimentRow row;
      row.target = static_cast<int>(k);
      row.tolerance = tol;
      row.path_time = visit->t;
      // s = f(r) = -F log log L, and the family is even in s.
      row.loglogL = visit->t / p.F;
      row.u = ex.path.position(visit->t)[0];
      const double lnL = std::exp(row.loglogL);
      row.h = 1.0 - p.E / lnL;
      // |Δs| over ρ in [1/2, 2] is at most F log 2 / (L log L); times the path speed.
      row.closeness = ex.path.max_speed() * std::exp(std::log(p.F * std::log(2.0)) - lnL - row.loglogL);
      const FiniteMetricSpace snap = sample_space(cross_section_chart(ex.base, row.u, row.h), spec.sampling);
      for (std::size_t j = 0; j < nt; ++j) row.bounds.push_back(gh_bounds(snap, targets[j], spec.iterations));
      rep.final_own_upper[k] = row.bounds[k].upper;
      double other = kInf;
      for (std::size_t j = 0; j < nt; ++j)
        if (j != k) other = std::min(other, row.bounds[j].lower);
      rep.final_other_lower[k] = other;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.demonstrated = true;
  for (std::size_t k = 0; k < nt; ++k)
    rep.demonstrated = rep.demonstrated && rep.final_own_upper[k] < spec.own_threshold &&
                       rep.final_other_lower[k] > spec.other_threshold;
  return rep;
}

}  // namespace tcone
