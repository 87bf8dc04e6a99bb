#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "tcone/curvature.hpp"
#include "tcone/warp.hpp"

namespace tcone {

/// Geometry of a cross-section family at one (s, x): the metric, its first two
/// s-derivatives, its Ricci tensor and the Codazzi combination
/// div_g(∂_s g)_i - ∂_i tr(g⁻¹ ∂_s g) that drives the mixed cone term.
struct FamilyPoint {
  Eigen::MatrixXd g;
  Eigen::MatrixXd gs;
  Eigen::MatrixXd gss;
  Eigen::MatrixXd ric;
  Eigen::VectorXd codazzi;
  double nabla_gs_norm = 0.0;  // |∇ ∂_s g| in the g norm
};

/// One-parameter family s -> g(s) of metrics on a fixed chart of the cross-section.
struct CrossSectionFamily {
  int dim = 0;
  Interval param{-1e300, 1e300};
  std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> metric;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
  std::vector<bool> periodic;
  bool volume_normalized = false;
  bool stationary = false;
  std::string label;
  /// Optional closed-form evaluator; finite differences are used otherwise.
  std::function<FamilyPoint(double, const Eigen::VectorXd&)> exact;
  /// Finite-difference steps in s and in the chart coordinates.
  double s_step = 1e-3;
  double x_step = 1e-3;

  /// Representative chart points used by checks and verifiers.
  std::vector<Eigen::VectorXd> sample_points;

  FamilyPoint at(double s, const Eigen::VectorXd& x) const;
  /// Finite-difference evaluation, ignoring any closed form.
  FamilyPoint at_fd(double s, const Eigen::VectorXd& x) const;
  /// The metric g(s) as a MetricField.
  MetricField slice(double s) const;

  /// Same family with the parameter replaced by path(s).
  CrossSectionFamily reparametrized(std::function<Jet2(double)> path, Interval domain,
                                    std::string new_label) const;
};

/// Sampled checks of the three hypotheses on a family.
struct FamilyCheck {
  double ricci_margin = 0.0;      // min over samples of the least eigenvalue of g⁻¹Ric - (n-2)
  double trace_defect = 0.0;      // max |tr(g⁻¹ ∂_s g)|
  double gs_norm = 0.0;           // max |∂_s g|_g
  double gss_norm = 0.0;          // max |∂_s ∂_s g|_g
  double nabla_gs_norm = 0.0;     // max |∇ ∂_s g|_g
  int samples = 0;

  bool ricci_ok() const { return ricci_margin >= -1e-8; }
  bool trace_ok() const { return trace_defect <= 1e-8; }
  bool derivatives_ok() const { return gs_norm <= 1.0 && gss_norm <= 1.0 && nabla_gs_norm <= 1.0; }
};

FamilyCheck check_family(const CrossSectionFamily& family, const std::vector<double>& s_samples,
                         const std::vector<Eigen::VectorXd>& x_samples);

/// |A|_g = sqrt(tr(g⁻¹ A g⁻¹ A)) for a symmetric 2-tensor A.
double tensor_norm(const Eigen::MatrixXd& g, const Eigen::MatrixXd& a);

/// Stationary round sphere S^m(a) in hyperspherical angles (θ_1, ..., θ_{m-1}, φ).
CrossSectionFamily round_sphere_family(int m, double radius);
/// Interior chart point of the hyperspherical chart, used by tests and samplers.
Eigen::VectorXd sphere_chart_point(int m, double spread = 0.0);
/// `count` Halton points in the chart box shrunk by `margin` of its width per side.
std::vector<Eigen::VectorXd> box_samples(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int count,
                                         double margin = 0.02);

// ---------------------------------------------------------------------------
// Cone Ricci
// ---------------------------------------------------------------------------

/// Radial data of ḡ = dr² + r²h(r)²g(f(r)) at one radius, in scale-free form:
/// phi = r h, with dphi = phi', r_ddphi = r phi'', q1 = r f', q2 = r² f''.
struct RadialJet {
  double r = 0.0;  // informational; the scaled formulas never use it
  double s = 0.0;  // f(r)
  double h = 1.0;
  double dphi = 1.0;
  double r_ddphi = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

RadialJet radial_jet(const WarpFn& h, const WarpFn& f, double r);

/// Ricci tensor of the cone in coordinates (r, x), multiplied by the natural
/// scale: rr holds r² Ric(∂r,∂r), ri holds r Ric(∂r,∂_i), ij holds Ric(∂_i,∂_j).
struct ConeRicci {
  double rr = 0.0;
  Eigen::VectorXd ri;
  Eigen::MatrixXd ij;
  Eigen::MatrixXd g;  // cross-section metric at the point
  double h = 1.0;

  /// r² Ric̄(v, v) for v = δ ∂r + sqrt(1-δ²) w /(r h), w g-unit.
  double directional(double delta, const Eigen::VectorXd& w) const;
  /// r² times the Ricci matrix in an orthonormal frame adapted to (∂r, g).
  Eigen::MatrixXd orthonormal() const;
  double min_eigenvalue() const;
};

/// Scale-free cone Ricci from radial data and family data. When `substitute` is
/// set the radial entry uses the volume-normalized form.
ConeRicci cone_ricci_scaled(const RadialJet& jet, const FamilyPoint& fp, int n, bool substitute);

/// Scale-free cone Ricci of ḡ at (r, x); see ConeRicci for the scaling.
ConeRicci ricci_cone_analytic(int n, const WarpFn& h, const WarpFn& f,
                              const CrossSectionFamily& family, double r, const Eigen::VectorXd& x);

/// Coordinate chart of the cone (r, x) for the oracle.
MetricField cone_chart(const WarpFn& h, const WarpFn& f, const CrossSectionFamily& family,
                       Interval r_range);

}  // namespace tcone
