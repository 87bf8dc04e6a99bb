#include "tcone/example2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcone/suspension.hpp"

namespace tcone {

namespace {

constexpr double kQuarterPi = M_PI / 4.0;

double bubble_b_amplitude(double eps, double b0) { return b0 * (0.5 - 0.49 * eps); }

void check_bubble_args(double eps, double b0) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("bubble: eps must lie in [0, 1]");
  if (!(b0 > 0.0 && b0 <= 1.0)) throw DomainError("bubble: b0 must lie in (0, 1]");
}

// Bisection for a sign change of f on [lo, hi] with f(lo) < 0 < f(hi).
template <class F>
double bisect(F&& f, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Interior evaluation nodes that keep clear of collapse ends.
std::vector<double> interior_nodes(const BergerAnsatz& an, int nodes) {
  std::vector<double> out;
  const double len = an.r.length();
  for (int k = 1; k <= nodes; ++k) {
    const double x = an.r.lo + len * k / (nodes + 1.0);
    if (an.lo_end == Closure::CollapseFiber && x - an.r.lo < 2 * kCollapseGuard) continue;
    if (an.hi_end == Closure::CollapseFiber && an.r.hi - x < 2 * kCollapseGuard) continue;
    out.push_back(x);
  }
  return out;
}

std::vector<double> open_nodes(Interval iv, int nodes, double guard) {
  std::vector<double> out;
  for (int k = 1; k <= nodes; ++k) {
    const double x = iv.lo + iv.length() * k / (nodes + 1.0);
    if (x - iv.lo >= guard && iv.hi - x >= guard) out.push_back(x);
  }
  return out;
}

// Quintic smoothstep on [0, 1] as a jet.
Jet2 smoothstep(Jet2 x) {
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

}  // namespace

// ---------------------------------------------------------------------------
// Pieces
// ---------------------------------------------------------------------------

double solve_r_eps(double eps, double b0) {
  check_bubble_args(eps, b0);
  if (eps == 0.0) return kQuarterPi;
  const double amp = bubble_b_amplitude(eps, b0);
  auto f = [&](double r) { return 0.5 * b0 * std::sin(2 * r) - amp * std::cosh(eps * r / 100.0); };
  if (!(f(kQuarterPi) > 0.0)) throw DomainError("solve_r_eps: no root in (0, pi/4]");
  return bisect(f, 0.0, kQuarterPi);
}

BergerAnsatz bubble(double eps, double b0) {
  const double re = solve_r_eps(eps, b0);
  const Interval dom{0.0, re};
  BergerAnsatz an{WarpFn::sine(dom, 0.5 * b0, 2.0),
                  WarpFn::cosh(dom, bubble_b_amplitude(eps, b0), eps / 100.0), dom};
  an.lo_end = Closure::CollapseFiber;
  an.hi_end = Closure::OpenBoundary;
  an.topology = Topology::CP2MinusBall;
  an.fiber_norm = 0.5 * b0;
  return an;
}

double bubble_convexity(double eps, double b0) {
  const BergerAnsatz an = bubble(eps, b0);
  const double re = an.r.hi;
  return std::min(an.A.d1(re), an.B.d1(re)) / b0;
}

Football football(double ell, double s) {
  if (!(ell > 0.0)) throw DomainError("football: ell must be positive");
  if (!(s > 0.0 && s < kQuarterPi)) throw DomainError("football: s must lie in (0, pi/4)");
  const Interval dom{s, M_PI / 2 - s};
  Football f;
  f.ell = ell;
  f.s = s;
  f.ansatz = BergerAnsatz{WarpFn::sine(dom, 0.5 * ell, 2.0), WarpFn::sine(dom, 0.5 * ell, 2.0), dom};
  f.ansatz.topology = Topology::Tube;
  f.ansatz.fiber_norm = 0.5 * ell;
  f.radius = 0.5 * ell * std::sin(2 * s);
  f.lo_slice = sff_slice(f.ansatz, dom.lo, -1);
  f.hi_slice = sff_slice(f.ansatz, dom.hi, +1);
  return f;
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

GluePiece boundary_piece(const BergerAnsatz& an, double r, int outward_sign, std::string label) {
  GluePiece p;
  p.label = std::move(label);
  p.slice = sff_slice(an, r, outward_sign);
  p.coefficients = p.slice.coefficients;
  return p;
}

GluePiece boundary_piece(const DoubleAnsatz5D& an, double s, int outward_sign, std::string label) {
  GluePiece p;
  p.label = std::move(label);
  p.slice = sff_slice(an, s, outward_sign);
  const double a = an.A.value(kQuarterPi), b = an.B.value(kQuarterPi);
  const auto& c = p.slice.coefficients;  // C², D², E², E²
  p.coefficients = {c[0], c[1] * a * a, c[2] * b * b, c[3] * b * b};
  return p;
}

GluePlan glue_check(const GluePiece& first, const GluePiece& second) {
  const auto& c1 = first.coefficients;
  const auto& c2 = second.coefficients;
  if (c1.size() != c2.size() || c1.size() != first.slice.shape.size() ||
      c2.size() != second.slice.shape.size())
    throw DomainError("glue_check: boundary slices have different dimensions");
  if (!(first.slice.radius > 0.0 && second.slice.radius > 0.0))
    throw DomainError("glue_check: degenerate boundary");
  GluePlan plan;
  plan.first = first;
  plan.second = second;
  plan.scale = first.slice.radius / second.slice.radius;
  const double l2 = plan.scale * plan.scale;
  for (std::size_t i = 0; i < c1.size(); ++i)
    plan.mismatch = std::max(plan.mismatch, std::abs(c1[i] - l2 * c2[i]) / std::abs(c1[i]));
  if (!(plan.mismatch <= kGlueTolerance))
    throw DomainError("glue_check: boundaries are not isometric for any scale");
  plan.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c1.size(); ++i) {
    plan.shape_sum.push_back(first.slice.shape[i] + second.slice.shape[i] / plan.scale);
    plan.margin = std::min(plan.margin, plan.shape_sum.back());
  }
  plan.margin_dimless = plan.margin * first.slice.radius;
  plan.feasible = plan.margin_dimless >= -kGlueTolerance;
  return plan;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

const char* to_string(Stage s) { return s == Stage::Step1 ? "step1" : "step2"; }

void ExampleIISpec::validate() const {
  if (!(b0 > 0.0 && b0 <= 1.0)) throw DomainError("example2: b0 must lie in (0, 1]");
  if (ell < 0.0 || delta < 0.0) throw DomainError("example2: ell and delta must be nonnegative");
  if (!(smoothing > 0.0 && smoothing < 0.5)) throw DomainError("example2: smoothing must lie in (0, 0.5)");
  if (r_nodes < 2) throw DomainError("example2: r_nodes must be at least 2");
  if (t_grid.empty()) throw DomainError("example2: empty t grid");
  for (double t : t_grid) {
    const bool ok = stage == Stage::Step1 ? (t > 0.0 && t <= 1.0) : (t >= 1.0 && t <= 2.0);
    if (!ok) throw DomainError("example2: t outside the stage range");
  }
  if (delta > 0.0 && delta > bubble_convexity(1.0, b0) / 100.0)
    throw DomainError("example2: delta must not exceed lambda_1 / 100");
}

ExampleIISpec ExampleIISpec::step2(double b0) {
  ExampleIISpec s;
  s.stage = Stage::Step2;
  s.b0 = b0;
  s.t_grid = {1.0, 1.25, 1.5, 1.75, 2.0};
  return s;
}

double ell_bar(double delta, double b0, const std::vector<double>& t_grid) {
  if (!(delta > 0.0)) throw DomainError("ell_bar: delta must be positive");
  const BergerAnsatz b = bubble(1.0, b0);
  const GluePiece bp = boundary_piece(b, b.r.hi, +1, "bubble");
  auto ok = [&](double ell) {
    for (double t : t_grid) {
      if (t >= 1.0) continue;
      const Football f = football(ell, t * kQuarterPi);
      const double t_unnorm = *std::min_element(f.lo_slice.unnormalized.begin(), f.lo_slice.unnormalized.end());
      if (!(t_unnorm > -delta * f.radius)) return false;
      if (!glue_check(boundary_piece(f.ansatz, f.ansatz.r.lo, -1, "football"), bp).feasible) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  if (ok(hi)) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (ok(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) throw DomainError("ell_bar: no admissible ell");
  return lo;
}

StepOneConstants step_one_constants(const ExampleIISpec& spec) {
  StepOneConstants k;
  k.lambda1 = bubble_convexity(1.0, spec.b0);
  k.delta = spec.delta > 0.0 ? spec.delta : k.lambda1 * spec.b0 / 100.0;
  k.ell_bar = spec.ell > 0.0 ? spec.ell : ell_bar(k.delta, spec.b0, spec.t_grid);
  return k;
}

double berger_volume(const BergerAnsatz& an) {
  const double len = an.r.length();
  if (!(len > 0.0)) return 0.0;
  auto f = [&](double r) {
    const double a = an.A.value(r), b = an.B.value(r);
    return a * b * b;
  };
  return 2.0 * M_PI * M_PI * gauss_integrate(f, an.r.lo, an.r.hi, 32, 12);
}

double berger_ricci_min(const BergerAnsatz& an, int nodes) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : interior_nodes(an, nodes)) m = std::min(m, ricci_berger(an, x).min());
  return m;
}

double ExampleIIMetric::total_length() const {
  double L = 0.0;
  for (const auto& p : pieces) L += p.length();
  return L;
}

namespace {

// Local coordinate of u in piece p, as a jet so reversed pieces flip derivatives.
Jet2 local_coordinate(const PlacedPiece& p, Jet2 u) {
  return p.reversed ? (p.ansatz.r.hi + p.offset) - u : (p.ansatz.r.lo - p.offset) + u;
}

std::size_t piece_index(const std::vector<PlacedPiece>& pieces, double u) {
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
    if (u <= pieces[i].offset + pieces[i].length()) return i;
  return pieces.size() - 1;
}

}  // namespace

std::pair<double, double> ExampleIIMetric::profile(double u) const {
  if (pieces.empty()) throw DomainError("profile: empty metric");
  const auto& p = pieces[piece_index(pieces, u)];
  const Jet2 x = local_coordinate(p, Jet2::variable(u));
  return {p.ansatz.A.compose(x).v, p.ansatz.B.compose(x).v};
}

namespace {

// One warper across a seam at u*: the first derivative is blended,
// A_s' = A_L' + χ (A_R' - A_L'), and a χ-weighted constant removes the value
// mismatch left at u* + w. Values and two derivatives match at both collar ends.
class CollarBlend {
 public:
  CollarBlend(PlacedPiece left, PlacedPiece right, double seam, double w, bool want_a)
      : left_(std::move(left)), right_(std::move(right)), lo_(seam - w), w_(w), want_a_(want_a) {
    mismatch_ = eval(left_, lo_ + 2 * w_).v - integral(lo_ + 2 * w_) - eval(right_, lo_ + 2 * w_).v;
  }

  Jet2 operator()(Jet2 u) const {
    const Jet2 chi = smoothstep(Jet2::variable((u.v - lo_) / (2 * w_)));
    const double c0 = chi.v, c1 = chi.d1 / (2 * w_), c2 = chi.d2 / (4 * w_ * w_);
    const Jet2 L = eval(left_, u.v), R = eval(right_, u.v);
    const double dp = L.d1 - R.d1, dpp = L.d2 - R.d2;
    return chain(u, L.v - integral(u.v) - mismatch_ * c0, L.d1 - c0 * dp - mismatch_ * c1,
                 L.d2 - c1 * dp - c0 * dpp - mismatch_ * c2);
  }

 private:
  Jet2 eval(const PlacedPiece& p, double u) const {
    const Jet2 x = local_coordinate(p, Jet2::variable(u));
    return want_a_ ? p.ansatz.A.compose(x) : p.ansatz.B.compose(x);
  }
  // ∫_{lo}^{u} χ (A_L' - A_R') dv
  double integral(double u) const {
    if (u <= lo_) return 0.0;
    return gauss_integrate(
        [this](double v) {
          const double chi = smoothstep(Jet2::constant((v - lo_) / (2 * w_))).v;
          return chi * (eval(left_, v).d1 - eval(right_, v).d1);
        },
        lo_, u, 2, 12);
  }

  PlacedPiece left_, right_;
  double lo_, w_;
  bool want_a_;
  double mismatch_ = 0.0;
};

}  // namespace

BergerAnsatz ExampleIIMetric::smoothed(double w) const {
  if (pieces.empty()) throw DomainError("smoothed: empty metric");
  if (!(w > 0.0)) throw DomainError("smoothed: collar width must be positive");
  const auto ps = pieces;
  std::vector<double> seams;
  std::vector<CollarBlend> blend_a, blend_b;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    seams.push_back(ps[i].offset + ps[i].length());
    blend_a.emplace_back(ps[i], ps[i + 1], seams.back(), w, true);
    blend_b.emplace_back(ps[i], ps[i + 1], seams.back(), w, false);
  }
  auto make = [ps, seams, w](std::vector<CollarBlend> blends, bool want_a) {
    return [ps, seams, w, blends, want_a](Jet2 u) {
      for (std::size_t k = 0; k < seams.size(); ++k)
        if (std::abs(u.v - seams[k]) < w) return blends[k](u);
      const auto& p = ps[piece_index(ps, u.v)];
      const Jet2 x = local_coordinate(p, u);
      return want_a ? p.ansatz.A.compose(x) : p.ansatz.B.compose(x);
    };
  };
  const Interval dom{0.0, total_length()};
  BergerAnsatz out{WarpFn(dom, make(blend_a, true), false, "A_glued"),
                   WarpFn(dom, make(blend_b, false), true, "B_glued"), dom};
  out.lo_end = Closure::CollapseFiber;
  out.hi_end = Closure::CollapseFiber;
  out.topology = Topology::CP2SharpCP2bar;
  out.fiber_norm = ps.front().ansatz.fiber_norm;
  return out;
}

bool ExampleIIMetric::glue_feasible() const {
  return std::all_of(glues.begin(), glues.end(), [](const GluePlan& g) { return g.feasible; });
}

ExampleIIMetric example2_family(const ExampleIISpec& spec, double t) {
  return example2_family(spec, step_one_constants(spec), t);
}

ExampleIIMetric example2_family(const ExampleIISpec& spec, const StepOneConstants& k, double t) {
  ExampleIIMetric m;
  m.stage = spec.stage;
  m.t = t;
  auto place = [&m](std::string label, BergerAnsatz an, bool reversed) {
    PlacedPiece p{std::move(label), std::move(an), reversed, m.total_length()};
    m.pieces.push_back(std::move(p));
  };
  const bool two_bubbles = spec.stage == Stage::Step2 || t == 1.0;
  if (spec.stage == Stage::Step1 && !(t > 0.0 && t <= 1.0)) throw DomainError("example2: t outside (0, 1]");
  if (spec.stage == Stage::Step2 && !(t >= 1.0 && t <= 2.0)) throw DomainError("example2: t outside [1, 2]");

  if (two_bubbles) {
    const double eps = spec.stage == Stage::Step2 ? 2.0 - t : 1.0;
    const BergerAnsatz b = bubble(eps, spec.b0);
    const GluePiece bp = boundary_piece(b, b.r.hi, +1, "bubble");
    m.glues.push_back(glue_check(bp, bp));
    place("bubble", b, false);
    place("bubble'", b, true);
  } else {
    m.ell = k.ell_bar;
    const BergerAnsatz b = bubble(1.0, spec.b0);
    const Football f = football(k.ell_bar, t * kQuarterPi);
    const GluePiece bp = boundary_piece(b, b.r.hi, +1, "bubble");
    m.glues.push_back(glue_check(boundary_piece(f.ansatz, f.ansatz.r.lo, -1, "football.lo"), bp));
    m.glues.push_back(glue_check(boundary_piece(f.ansatz, f.ansatz.r.hi, +1, "football.hi"), bp));
    // Normalized so that the bubbles have unit scale at t = 1.
    const double rho_b = b.B.value(b.r.hi);
    const double c = 2.0 * rho_b / k.ell_bar;
    const double lambda = f.radius / rho_b;
    place("bubble", b.scaled(c * lambda), false);
    place("football", f.ansatz.scaled(c), false);
    place("bubble'", b.scaled(c * lambda), true);
  }

  m.volume = 0.0;
  m.ricci_min = std::numeric_limits<double>::infinity();
  for (const auto& p : m.pieces) {
    m.volume += berger_volume(p.ansatz);
    m.ricci_min = std::min(m.ricci_min, berger_ricci_min(p.ansatz, spec.r_nodes));
  }
  m.eta = m.ricci_min * std::sqrt(m.volume);

  // Collars: half-width a fixed fraction of the shorter neighbour.
  m.collar_ricci_min = std::numeric_limits<double>::infinity();
  double w = std::numeric_limits<double>::infinity();
  for (const auto& p : m.pieces) w = std::min(w, spec.smoothing * p.length());
  const BergerAnsatz sm = m.smoothed(w);
  for (std::size_t i = 0; i + 1 < m.pieces.size(); ++i) {
    const double seam = m.pieces[i].offset + m.pieces[i].length();
    for (double u : open_nodes({seam - w, seam + w}, spec.r_nodes, 0.0))
      m.collar_ricci_min = std::min(m.collar_ricci_min, ricci_berger(sm, u).min());
  }
  return m;
}

double profile_distance(const ExampleIIMetric& a, const ExampleIIMetric& b, int samples) {
  const double La = a.total_length(), Lb = b.total_length();
  double d = std::abs(La - Lb);
  for (int k = 0; k <= samples; ++k) {
    const double x = static_cast<double>(k) / samples;
    const auto [aA, aB] = a.profile(x * La);
    const auto [bA, bB] = b.profile(x * Lb);
    d = std::max({d, std::abs(aA - bA), std::abs(aB - bB)});
  }
  return d;
}

// ---------------------------------------------------------------------------
// Cobordism
// ---------------------------------------------------------------------------

double solve_s0(double e0) {
  if (!(e0 > 0.0)) throw DomainError("solve_s0: e0 must be positive");
  auto g = [e0](double s) { return std::sin(2 * s) - e0 * std::cosh(e0 * s); };
  // first sign change on a fixed bracket sequence
  constexpr int kCells = 256;
  double lo = 0.0;
  for (int i = 1; i <= kCells; ++i) {
    const double hi = kQuarterPi * i / kCells;
    if (g(hi) > 0.0) return bisect(g, lo, hi);
    lo = hi;
  }
  throw DomainError("solve_s0: no root in (0, pi/4)");
}

CobordismPieces cobordism_pieces(double b0, double b1, double e0, double s_max) {
  if (!(b0 > 0.0 && b0 <= 1.0)) throw DomainError("cobordism: b0 must lie in (0, 1]");
  if (!(b1 > 0.0)) throw DomainError("cobordism: b1 must be positive");
  if (!(s_max > 1.0)) throw DomainError("cobordism: s_max must exceed 1");
  CobordismPieces p;
  p.b0 = b0;
  p.b1 = b1;
  p.e0 = e0;
  p.s0 = solve_s0(e0);
  const Interval rr{0.0, M_PI / 2};
  const Interval s1{1.0, s_max};
  p.c1 = DoubleAnsatz5D{WarpFn::sine(rr, 0.5 * b0, 2.0), WarpFn::constant(rr, 0.5 * b0),
                        WarpFn::identity(s1),           WarpFn::identity(s1),
                        WarpFn::identity(s1),           s1,
                        rr};
  const Interval s2{0.0, p.s0};
  p.c2 = DoubleAnsatz5D{WarpFn::sine(rr, 0.5 * b1, 2.0), WarpFn::constant(rr, 0.5 * b1),
                        WarpFn::sine(s2, 1.0, 2.0),     WarpFn::sine(s2, 1.0, 2.0),
                        WarpFn::cosh(s2, e0, e0),       s2,
                        rr};
  return p;
}

namespace {

RicciReport scan_5d(const DoubleAnsatz5D& an, int s_nodes, int r_nodes) {
  std::vector<GridAxis> axes{{"s", open_nodes(an.s, s_nodes, 1e-9)},
                             {"r", open_nodes(an.r, r_nodes, 2 * kCollapseGuard)}};
  return scan_grid(std::move(axes), {"ss", "sr", "rr", "xx", "yy"}, [&an](const std::vector<double>& x) {
    const Ricci5D R = ricci_5d(an, x[0], x[1]);
    return NodeValue{R.min_eigenvalue(), {R.ss, R.sr_unit(), R.rr, R.xx, R.yy}};
  });
}

}  // namespace

ClosabilityCheck closability_check(const CobordismPieces& pieces, int s_nodes, int r_nodes) {
  ClosabilityCheck c;
  c.pieces = pieces;
  c.c1_grid = scan_5d(pieces.c1, s_nodes, r_nodes);
  c.c2_grid = scan_5d(pieces.c2, s_nodes, r_nodes);
  c.c2_boundary = sff_slice(pieces.c2, pieces.s0, +1);
  try {
    c.glue = glue_check(boundary_piece(pieces.c2, pieces.s0, +1, "C2"),
                        boundary_piece(pieces.c1, pieces.c1.s.lo, -1, "C1"));
    c.glue_note = c.glue->feasible ? "feasible" : "shape-operator sum has a negative eigenvalue";
  } catch (const DomainError& e) {
    c.glue_note = e.what();
  }
  return c;
}

CobordismSearch cobordism_search(const std::vector<double>& b_list, const std::vector<double>& e0_list,
                                 int s_nodes, int r_nodes) {
  if (b_list.empty() || e0_list.empty()) throw DomainError("cobordism_search: empty sweep");
  CobordismSearch out;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (double b : b_list) {
    for (double e0 : e0_list) {
      ++out.candidates;
      ClosabilityCheck c = closability_check(cobordism_pieces(b, b, e0), s_nodes, r_nodes);
      const double margin = c.glue ? c.glue->margin_dimless : -std::numeric_limits<double>::infinity();
      if (c.closable()) {
        out.found = true;
        out.best = std::move(c);
        return out;
      }
      if (out.candidates == 1 || margin > best_margin) {
        best_margin = margin;
        out.best = std::move(c);
      }
    }
  }
  return out;
}

}  // namespace tcone
