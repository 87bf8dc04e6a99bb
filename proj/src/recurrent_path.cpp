#include "tcone/recurrent_path.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tcone/warp.hpp"

namespace tcone {

namespace {

// Easing and its derivatives.
Jet2 ease(double x, double dxdt) {
  const double two_pi = 2 * M_PI;
  const double v = x - std::sin(two_pi * x) / two_pi;
  const double d1 = 1 - std::cos(two_pi * x);
  const double d2 = two_pi * std::sin(two_pi * x);
  return {v, d1 * dxdt, d2 * dxdt * dxdt};
}

}  // namespace

PathSpec::PathSpec(std::vector<Eigen::VectorXd> points, std::vector<int> stages, PathBounds bounds,
                   double min_duration)
    : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("PathSpec: empty point sequence");
  dim_ = static_cast<int>(points_.front().size());
  for (const auto& p : points_) {
    if (p.size() != dim_) throw DomainError("PathSpec: inconsistent point dimension");
    if (p.size() > 0 && (p.minCoeff() < 0.0 || p.maxCoeff() > 1.0)) throw DomainError("PathSpec: point outside the parameter box");
  }
  knots_.push_back(0.0);
  for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
    const double d = (points_[j + 1] - points_[j]).norm();
    double T = std::max({min_duration, 2.0 * bounds.first * d,
                         std::sqrt(2.0 * (4.0 * bounds.second * d * d + 2.0 * M_PI * bounds.first * d))});
    knots_.push_back(knots_.back() + T);
    max_speed_ = std::max(max_speed_, 2.0 * d / T);
    max_accel_ = std::max(max_accel_, 2.0 * M_PI * d / (T * T));
  }
  for (std::size_t j = 0; j < points_.size(); ++j)
    visits_.push_back({knots_[j], static_cast<int>(j), j < stages.size() ? stages[j] : 0});
}

std::vector<Jet2> PathSpec::jet(double t) const {
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double a = std::abs(t);
  std::vector<Jet2> out(dim_);
  const std::size_t n = knots_.size();
  if (a >= knots_.back() || n == 1) {
    for (int i = 0; i < dim_; ++i) out[i] = Jet2::constant(points_.back()[i]);
    return out;
  }
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), a) - knots_.begin()) - 1;
  const double T = knots_[j + 1] - knots_[j];
  const Jet2 s = ease((a - knots_[j]) / T, sign / T);
  for (int i = 0; i < dim_; ++i) {
    const double p0 = points_[j][i], d = points_[j + 1][i] - p0;
    out[i] = {p0 + d * s.v, d * s.d1, d * s.d2};
  }
  return out;
}

Eigen::VectorXd PathSpec::position(double t) const {
  const auto j = jet(t);
  Eigen::VectorXd x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = j[i].v;
  return x;
}

std::optional<PathSpec::Visit> PathSpec::find_visit(const Eigen::VectorXd& target, double tol, double t_min) const {
  if (points_.size() == 1) {
    // constant path: every time is a visit
    if (dim_ > 0 && (points_[0] - target).cwiseAbs().maxCoeff() >= tol) return std::nullopt;
    return Visit{std::max(t_min, 0.0) + 1.0, 0, visits_.front().stage};
  }
  for (const Visit& v : visits_)
    if (v.t > t_min && (dim_ == 0 || (points_[v.index] - target).cwiseAbs().maxCoeff() < tol)) return v;
  return std::nullopt;
}

std::vector<Eigen::VectorXd> dense_schedule(int dim, int stages, std::vector<int>* stage_of,
                                            bool (*admissible)(const Eigen::VectorXd&)) {
  if (dim < 0 || stages < 1) throw DomainError("dense_schedule: need dim >= 0 and stages >= 1");
  std::vector<Eigen::VectorXd> out;
  if (dim == 0) {
    out.emplace_back(0);
    if (stage_of) stage_of->push_back(1);
    return out;
  }
  for (int m = 1; m <= stages; ++m) {
    std::vector<int> idx(dim, 0);
    while (true) {
      Eigen::VectorXd p(dim);
      for (int i = 0; i < dim; ++i) p[i] = idx[i] / (m + 1.0);
      if (!admissible || admissible(p)) {
        out.push_back(p);
        if (stage_of) stage_of->push_back(m);
      }
      int k = 0;
      while (k < dim && ++idx[k] > m) idx[k++] = 0;
      if (k == dim) break;
    }
  }
  return out;
}

PathSpec recurrent_path(int dim, int stages, PathBounds bounds, double min_duration,
                        bool (*admissible)(const Eigen::VectorXd&)) {
  std::vector<int> st;
  auto pts = dense_schedule(dim, stages, &st, admissible);
  return PathSpec(std::move(pts), std::move(st), bounds, min_duration);
}

ClosabilityCurve::ClosabilityCurve(PathSpec base, double alpha, Eigen::VectorXd s0)
    : base_(std::move(base)), alpha_(alpha), s0_(std::move(s0)) {
  if (!(alpha_ > 1.0)) throw DomainError("closability_modification: alpha must exceed 1");
  if (s0_.size() != base_.dim()) throw DomainError("closability_modification: s0 has the wrong dimension");
  if (s0_.size() > 0 && (s0_.minCoeff() < 0.0 || s0_.maxCoeff() > 1.0))
    throw DomainError("closability_modification: s0 outside the parameter box");
}

std::vector<Jet2> ClosabilityCurve::jet(double t) const {
  const int d = base_.dim();
  std::vector<Jet2> out(d);
  if (t >= -alpha_) return base_.jet(t);
  if (t <= -2 * alpha_) {
    for (int i = 0; i < d; ++i) out[i] = Jet2::constant(s0_[i]);
    return out;
  }
  // λ rises from 0 at -2α to 1 at -α with vanishing first and second derivatives.
  const double x = (t + 2 * alpha_) / alpha_;
  const Jet2 e = ease(x, 1.0 / alpha_);
  const auto b = base_.jet(t);
  for (int i = 0; i < d; ++i) out[i] = s0_[i] + e * (b[i] - s0_[i]);
  return out;
}

Eigen::VectorXd ClosabilityCurve::position(double t) const {
  const auto j = jet(t);
  Eigen::VectorXd x(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) x[i] = j[i].v;
  return x;
}

ClosabilityCurve closability_modification(const PathSpec& path, double alpha, const Eigen::VectorXd& s0) {
  return ClosabilityCurve(path, alpha, s0);
}

}  // namespace tcone
