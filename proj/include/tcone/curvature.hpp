#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "tcone/warp.hpp"

namespace tcone {

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

struct FdOptions {
  double step = 1e-4;
  bool richardson = true;
};

/// Ricci tensor of `metric` at `point` in chart coordinates, from Christoffel
/// symbols built out of central differences of the metric coefficients.
Eigen::MatrixXd ricci_fd_oracle(const MetricField& metric, const Eigen::VectorXd& point,
                                FdOptions opts = {});

/// Christoffel symbols of the first derivatives returned by central differences;
/// gamma[k](i, j) = Γ^k_ij.
std::vector<Eigen::MatrixXd> christoffel_fd(const MetricField& metric, const Eigen::VectorXd& point,
                                            double step);

// ---------------------------------------------------------------------------
// Ansätze
// ---------------------------------------------------------------------------

enum class Closure { CollapseFiber, OpenBoundary };
enum class Topology { CP2MinusBall, CP2SharpCP2bar, S4, Tube };

const char* to_string(Closure c);
const char* to_string(Topology t);

/// dr² + A(r)² dX² + B(r)² (dY² + dZ²) on an r-interval times S³, with X, Y, Z the
/// left-invariant frame satisfying [X,Y] = 2Z.
struct BergerAnsatz {
  WarpFn A;
  WarpFn B;
  Interval r;
  Closure lo_end = Closure::OpenBoundary;
  Closure hi_end = Closure::OpenBoundary;
  Topology topology = Topology::Tube;
  /// Amplitude of the A profile; the closure condition reads |A'| = 2 * fiber_norm.
  double fiber_norm = 1.0;

  /// Positivity of A, B on the interior and the |A'| = 2 closure condition at
  /// collapse ends. Throws DomainError on violation.
  void validate(int samples = 64) const;
  /// Same ansatz with every warper multiplied by `lambda`.
  BergerAnsatz scaled(double lambda) const;
};

/// Per-unit-vector Ricci values of the Berger ansatz.
struct BergerRicci {
  double rr = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;

  double min() const;
};

/// Guard band kept between evaluation points and collapse ends.
inline constexpr double kCollapseGuard = 1e-6;

BergerRicci ricci_berger(const BergerAnsatz& ansatz, double r);

/// ds² + C(s)² dr² + D(s)² A(r)² dX² + E(s)² B(r)² (dY² + dZ²).
struct DoubleAnsatz5D {
  WarpFn A;
  WarpFn B;
  WarpFn C;
  WarpFn D;
  WarpFn E;
  Interval s;
  Interval r;

  DoubleAnsatz5D scaled(double lambda) const;
};

/// Ricci components of the 5-d ansatz. Diagonal entries are per unit vector;
/// `sr` is the coordinate component Ric(∂s, ∂r).
struct Ricci5D {
  double ss = 0.0;
  double sr = 0.0;
  double rr = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  double c = 1.0;  // C(s), to convert sr to the orthonormal frame

  double sr_unit() const { return sr / c; }
  /// Smallest eigenvalue of the orthonormal-frame Ricci matrix.
  double min_eigenvalue() const;
};

Ricci5D ricci_5d(const DoubleAnsatz5D& ansatz, double s, double r);

// ---------------------------------------------------------------------------
// Suspensions and slices
// ---------------------------------------------------------------------------

/// Range of sectional curvatures at distance r from the pole of S_t(X), when the
/// sectional curvatures of X lie in `inner`.
Interval sec_suspension(double t, Interval inner, double r);

/// Boundary data of a level slice: shape-operator eigenvalues with respect to
/// the chosen outward normal, and the same eigenvalues multiplied by the squared
/// warp coefficient of each direction.
struct SliceGeometry {
  double radius = 0.0;
  std::vector<double> shape;
  std::vector<double> unnormalized;
  std::vector<double> coefficients;  // squared warp coefficient per direction
  int outward = +1;

  double min_shape() const;
  /// Rechecks unnormalized_i == shape_i * coefficient_i to 1e-10 (relative).
  bool consistent() const;
};

/// Slice r = const of a Berger ansatz, outward normal = outward_sign * ∂r.
SliceGeometry sff_slice(const BergerAnsatz& ansatz, double r, int outward_sign);
/// Slice s = const of the 5-d ansatz, outward normal = outward_sign * ∂s. The
/// reported radius is C(s); coefficients are the s-warpers squared.
SliceGeometry sff_slice(const DoubleAnsatz5D& ansatz, double s, int outward_sign);
/// Slice r = const of a cone dr² + r²h(r)² g with stationary cross-section of
/// dimension n-1.
SliceGeometry sff_slice_cone(int n, const WarpFn& h, double r, int outward_sign);

// ---------------------------------------------------------------------------
// Grid verification reports
// ---------------------------------------------------------------------------

struct GridAxis {
  std::string name;
  std::vector<double> nodes;
};

struct RicciReport {
  std::vector<GridAxis> axes;
  double minimum = 0.0;
  std::vector<double> argmin;
  std::vector<std::string> component_names;
  std::vector<double> component_minima;
  /// Minimum over all other axes at each node of the first axis.
  std::vector<double> first_axis_minima;
  double slack = 0.0;
  bool positive = false;

  double lower() const { return minimum - slack; }
  std::size_t node_count() const;
  std::string grid_description() const;
};

/// Evaluation at one node: the scanned value followed by named components.
struct NodeValue {
  double value = 0.0;
  std::vector<double> components;
};

/// Evaluates `fn` on the tensor grid and fills a report. The slack is a first
/// order bound: for every cell along every axis the cell minimum is bounded by
/// (v_i + v_j)/2 - G h/2 with G the largest observed slope over the cell and its
/// two neighbours. Evaluation is split over worker threads; reduction order is
/// fixed, so argmins are reproducible.
RicciReport scan_grid(std::vector<GridAxis> axes, std::vector<std::string> component_names,
                      const std::function<NodeValue(const std::vector<double>&)>& fn,
                      int workers = 0);

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);

}  // namespace tcone
