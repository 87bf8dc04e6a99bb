#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcone/jet.hpp"

namespace tcone {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closed(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
};

/// A warping function together with its first two derivatives.
///
/// The evaluator is written once against `Jet2`, so derivatives come from
/// forward differentiation of the same expression that produces the value.
class WarpFn {
 public:
  using Expr = std::function<Jet2(Jet2)>;

  WarpFn() = default;
  WarpFn(Interval domain, Expr expr, bool positive = false, std::string label = {})
      : domain_(domain), expr_(std::move(expr)), positive_(positive), label_(std::move(label)) {}

  Jet2 jet(double x) const { return expr_(Jet2::variable(x)); }
  Jet2 compose(Jet2 x) const { return expr_(x); }
  double value(double x) const { return jet(x).v; }
  double d1(double x) const { return jet(x).d1; }
  double d2(double x) const { return jet(x).d2; }

  const Interval& domain() const { return domain_; }
  bool positive() const { return positive_; }
  const std::string& label() const { return label_; }

  /// Multiplies the function by a constant.
  WarpFn scaled(double c) const;

  static WarpFn constant(Interval domain, double c);
  static WarpFn identity(Interval domain);
  /// amplitude * sin(frequency * x)
  static WarpFn sine(Interval domain, double amplitude, double frequency);
  /// amplitude * cosh(rate * x)
  static WarpFn cosh(Interval domain, double amplitude, double rate);

 private:
  Interval domain_{};
  Expr expr_;
  bool positive_ = false;
  std::string label_;
};

/// Largest relative mismatch between the jet derivatives and Richardson-refined
/// central differences of the value, over `samples` interior points.
double warp_derivative_mismatch(const WarpFn& w, int samples = 25);

/// Coordinate realization of a metric: chart point -> symmetric positive-definite
/// coefficient matrix on a coordinate box.
struct MetricField {
  int dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> chart;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
  std::vector<bool> periodic;  // per axis; period = box length

  Eigen::MatrixXd at(const Eigen::VectorXd& x) const { return chart(x); }
  bool inside(const Eigen::VectorXd& x, double margin = 0.0) const;
};

/// Throws DomainError unless the matrix is symmetric to 1e-12 and positive definite.
void require_metric(const Eigen::MatrixXd& g, const char* where);

}  // namespace tcone
