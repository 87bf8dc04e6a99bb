#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "tcone/cross_section.hpp"
#include "tcone/recurrent_path.hpp"
#include "tcone/warp.hpp"

namespace tcone {

/// Iterated suspension S_{t1}(S_{t2}(... S¹(t_{n-1}))) of dimension n-1.
struct SuspensionSpec {
  int n = 3;
  std::vector<double> t;  // t_1 >= ... >= t_{n-1}
  double sigma = 0.0;

  void validate() const;
  bool round() const;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);
/// Composite Gauss-Legendre quadrature of f over [a, b].
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int panels = 16,
                       int order = 12);

/// Wallis integral I_m = ∫_0^π sin^m u du.
double wallis(int m);

double suspension_volume(const SuspensionSpec& spec);
/// Nested chart (r_1, ..., r_{n-2}, θ) of the unsmoothed metric.
MetricField suspension_chart(const SuspensionSpec& spec);
/// Gauss-Legendre quadrature of the volume element over the chart box.
double chart_volume(const MetricField& chart, int nodes_per_axis);

/// Boundary limit (1, ..., 1, t_k, ..., t_k) with k leading ones.
SuspensionSpec omega_boundary_limit(int n, int k);
/// Point of Ω from barycentric weights w (w_k >= 0, Σ w < 1) on the log-simplex
/// spanned by the boundary limits: log2 t = (1 - Σw) x⁽⁰⁾ + Σ w_k x⁽ᵏ⁾.
SuspensionSpec omega_point(int n, const Eigen::VectorXd& w);
bool in_omega(const SuspensionSpec& spec, double tol = 1e-10);
bool omega_weights_admissible(const Eigen::VectorXd& w);

/// Two-sphere profiles in area coordinates (z, θ): g = dz²/F(z) + F(z) dθ² on
/// z in (0, Z), Z = 2 t1 t2. F'' = -2κ - 2m(z) with κ = 1/t1² and the pole bump
/// m = M (1 - z/σ)⁴ on [0, σ] (mirrored at z = Z), M σ = 5(2 - κZ)/2, so both
/// poles close smoothly and the area stays 2πZ.
struct AreaProfile {
  double kappa = 4.0;
  double Z = 0.5;
  double sigma = 0.0;
  double M = 0.0;

  static AreaProfile from_spec(double t1, double t2, double sigma);
  Jet2 F(Jet2 z) const;
  double curvature(double z) const;  // -F''/2
};

struct SmoothingReport {
  SuspensionSpec spec;
  bool smoothed = false;
  double sec_min = 0.0;
  double sec_max = 0.0;
  double volume_before = 0.0;
  double volume_after = 0.0;
  double rescale = 1.0;  // factor restoring the volume constraint

  double volume_change() const { return std::abs(volume_after - volume_before); }
};

/// For n = 3 the suspension is replaced by the area profile with collar width σ;
/// sectional curvature is scanned on a grid. Round specs are returned unchanged.
SmoothingReport smooth_suspension(const SuspensionSpec& spec, double sigma, int grid = 400);

/// Cross-section chart of a smoothed n = 3 suspension.
MetricField area_chart(const AreaProfile& prof, double pole_margin = 1e-3);

/// Example I for n = 3: the smoothed family over u in [0, 1], u = weight of the
/// k = 1 limit. Volume normalized (det g = 1 in area coordinates).
CrossSectionFamily example1_family_u(double sigma = 0.05);

struct Example1 {
  int n = 3;
  CrossSectionFamily base;    // over the Ω coordinate (n = 3)
  CrossSectionFamily family;  // composed with the path, parametrized by path time
  PathSpec path;
  PathBounds bounds;
};

Example1 build_example1_family(int n, int stages = 12, double sigma = 0.05);
/// Path times covering the loop: every knot plus `per_segment - 1` interior
/// points of each segment.
std::vector<double> path_cover_times(const PathSpec& path, int per_segment = 2);

}  // namespace tcone
