#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "tcone/jet.hpp"

namespace tcone {

/// Derivative bounds of the family with respect to the box coordinates, used to
/// stretch path segments so the composed family meets the unit bounds.
struct PathBounds {
  double first = 1.0;   // sup |∂_w g| and sup |∇ ∂_w g|
  double second = 1.0;  // sup |∂_w ∂_w g|
};

/// Even curve c(t) = γ(|t|) through a dense sequence of points of [0,1]^dim.
/// Segments use the easing S(x) = x - sin(2πx)/(2π), so γ stops at every point;
/// after the last point the curve stays constant.
class PathSpec {
 public:
  struct Visit {
    double t = 0.0;
    int index = 0;
    int stage = 0;
  };

  PathSpec() = default;
  PathSpec(std::vector<Eigen::VectorXd> points, std::vector<int> stages, PathBounds bounds, double min_duration);

  int dim() const { return dim_; }
  Eigen::VectorXd position(double t) const;
  /// Jets of every coordinate at t.
  std::vector<Jet2> jet(double t) const;
  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Visit>& visits() const { return visits_; }
  double end_time() const { return knots_.empty() ? 0.0 : knots_.back(); }
  double max_speed() const { return max_speed_; }
  double max_acceleration() const { return max_accel_; }

  /// First scheduled visit with t > t_min and |c(t) - target|_∞ < tol.
  std::optional<Visit> find_visit(const Eigen::VectorXd& target, double tol, double t_min) const;

 private:
  int dim_ = 0;
  std::vector<Eigen::VectorXd> points_;
  std::vector<double> knots_;
  std::vector<Visit> visits_;
  double max_speed_ = 0.0;
  double max_accel_ = 0.0;
};

/// Stage m lists the lattice points j/(m+1), j = 0..m, in every coordinate,
/// filtered by `admissible`. Every prefix reappears in later stages at finer spacing.
std::vector<Eigen::VectorXd> dense_schedule(int dim, int stages, std::vector<int>* stage_of = nullptr,
                                            bool (*admissible)(const Eigen::VectorXd&) = nullptr);

PathSpec recurrent_path(int dim, int stages, PathBounds bounds, double min_duration = 1.0,
                        bool (*admissible)(const Eigen::VectorXd&) = nullptr);

/// Equals the base path for t >= -alpha, the constant s0 for t <= -2 alpha, and a
/// smooth blend on the window in between.
class ClosabilityCurve {
 public:
  ClosabilityCurve(PathSpec base, double alpha, Eigen::VectorXd s0);

  Eigen::VectorXd position(double t) const;
  std::vector<Jet2> jet(double t) const;
  double alpha() const { return alpha_; }
  /// Factor 1 - 1/alpha applied to the cross-section metrics.
  double metric_scale() const { return 1.0 - 1.0 / alpha_; }

 private:
  PathSpec base_;
  double alpha_;
  Eigen::VectorXd s0_;
};

ClosabilityCurve closability_modification(const PathSpec& path, double alpha, const Eigen::VectorXd& s0);

}  // namespace tcone
