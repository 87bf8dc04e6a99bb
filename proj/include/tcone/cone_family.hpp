#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tcone/cross_section.hpp"
#include "tcone/curvature.hpp"
#include "tcone/jet.hpp"

namespace tcone {

struct LemmaParams {
  int n = 3;
  double E = 0.5;
  double F = 0.01;
  double r0 = 1e-3;
  double h_inf = 0.9;
  double D = 48.0;
  /// Anchor of the large-r branch: Λ = log(r / r_far).
  double r_far = 1.0;

  static LemmaParams defaults(int n);
  /// Throws DomainError on out-of-range values; E >= D F is checked separately.
  void validate() const;
  bool case_condition() const { return E >= D * F; }
};

/// Profiles of the construction at one radius in scale-free form. For the small-r
/// branch L = -log(r0 r); for the large-r branch L = log(r / r_far).
struct ProfileJet {
  double L = 0.0;
  double lnL = 0.0;
  double eps = 0.0;
  double e1 = 0.0;  // r ε'
  double e2 = 0.0;  // r² ε''
  double h = 1.0;
  double dphi = 1.0;
  double r_ddphi = 0.0;
  double f = 0.0;
  double q1 = 0.0;  // r f'
  double q2 = 0.0;  // r² f''

  RadialJet radial() const;
};

/// Cutoff window (in log L) of the stabilized variant: full profile below lo,
/// h = 1 above hi.
struct Stabilizer {
  bool enabled = false;
  double lo = 2.0;
  double hi = 3.0;
};

enum class Branch { Near, Far };

ProfileJet near_profile(double L, const LemmaParams& p, const Stabilizer& stab = {});
ProfileJet far_profile(double L, const LemmaParams& p);

/// L = -log(r0 r); throws unless log L > 1.
double log_radius(double r, const LemmaParams& p);

/// (value, first, second) derivatives in r for radii where r is representable.
Jet2 eval_eps(double r, const LemmaParams& p);
Jet2 eval_h(double r, const LemmaParams& p);
Jet2 eval_f(double r, const LemmaParams& p);

/// Right-hand sides of the three lemma estimates. The scaled record holds
/// r² × radial, r × mixed and the coordinate tangential bound (unit g directions).
struct LemmaBounds {
  double rr = 0.0;
  double mixed = 0.0;
  double tangential = 0.0;
};
LemmaBounds lemma_bounds_scaled(double L, const LemmaParams& p);
LemmaBounds lemma_bounds(double r, const LemmaParams& p);

/// The two case bounds on r² Ric̄(v, v) used in the proof for direction δ.
double case_bound_tangential(double L, double delta, const LemmaParams& p);
double case_bound_radial(double L, double delta, const LemmaParams& p);

struct ConeMetric {
  LemmaParams params;
  CrossSectionFamily family;  // parametrized by s = f(r)
  Branch branch = Branch::Near;
  Stabilizer stabilizer;

  ProfileJet profile(double L) const;
  ConeRicci ricci(double L, const Eigen::VectorXd& x) const;
  /// Same, with the family parameter forced to s instead of f(r).
  ConeRicci ricci_at(double L, const Eigen::VectorXd& x, double s) const;
};

struct DirectionalOptions {
  std::vector<double> lnL_nodes;
  std::vector<double> delta_nodes;
  std::vector<Eigen::VectorXd> x_samples;
  /// Extra family parameters evaluated at every radius besides s = f(r); this
  /// covers every position the path may take at that radius.
  std::vector<double> extra_s;
  int directions = 5;
  int workers = 0;

  /// log(log L) uniform on [1, 4] with 200 nodes, 101 uniform δ nodes, the
  /// family's sample points.
  static DirectionalOptions defaults(const CrossSectionFamily& family);
};

std::vector<double> triple_log_nodes(double lo, double hi, int count);

struct DirectionalReport {
  /// Grid over (log L, δ) of r² Ric̄(v, v) / (δ² a + (1-δ²) c), minimized over
  /// cross-section samples; a, c are the radial and tangential unit values.
  RicciReport grid;
  /// Grid over log L of the least eigenvalue of the diagonally normalized
  /// orthonormal Ricci matrix (all directions at once).
  RicciReport exact;
  double raw_minimum = 0.0;
  double case_tangential_min = 0.0;
  double case_radial_min = 0.0;
  double d_estimate = 0.0;  // max |mixed| / (F/(L log L)) over samples

  bool positive() const { return grid.positive && exact.positive; }
};

DirectionalReport directional_ricci_min(const ConeMetric& cone, const DirectionalOptions& opts);

struct SearchOptions {
  double F_start = 0.5;
  double F_ratio = 0.5;
  int F_steps = 12;
  double E_ratio = 2.0;
  std::vector<double> r0_list{1e-2, 1e-4};
  double D = -1.0;  // < 0: 16 n
  double h_inf = 0.9;
  DirectionalOptions grid;
};

struct SearchResult {
  bool feasible = false;
  LemmaParams params;
  DirectionalReport report;
  int candidates = 0;
  std::string most_violated;  // description of the worst node when infeasible
};

SearchResult feasibility_search(int n, const CrossSectionFamily& family, const SearchOptions& opts);

struct Snapshot {
  double L = 0.0;
  double s = 0.0;
  double h = 1.0;
  double volume_ratio = 1.0;  // h^(n-1)
};

Snapshot tangent_cone_at_scale(const ConeMetric& cone, double L);
/// Deviation of the rescaled metric from the cone over the snapshot at L over
/// radii ρ r_a, ρ in [rho_lo, rho_hi].
double cone_closeness(const ConeMetric& cone, double L, double rho_lo, double rho_hi, int nodes = 21);

}  // namespace tcone
