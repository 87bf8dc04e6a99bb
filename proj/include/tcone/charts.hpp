#pragma once

#include <Eigen/Dense>

#include "tcone/curvature.hpp"

namespace tcone {

// Euler-angle coordinates (θ, φ, ψ) on S³ = SU(2). The coframe ω_i returned
// below is dual to a left-invariant frame X, Y, Z with [X,Y] = 2Z (and cyclic),
// normalized so that ω_1² + ω_2² + ω_3² is the unit round metric.
Eigen::Matrix3d s3_coframe(double theta, double psi);

MetricField euclidean_chart(int dim);
/// Round S³ of radius a in Euler-angle coordinates.
MetricField s3_chart(double radius);
/// Chart (r, θ, φ, ψ) of a Berger ansatz.
MetricField berger_chart(const BergerAnsatz& ansatz);
/// Chart (s, r, θ, φ, ψ) of the 5-d ansatz.
MetricField double_ansatz_chart(const DoubleAnsatz5D& ansatz);

/// Coordinate coframe whose rows are the orthonormal coframe of the ansatz at
/// the chart point; Ric_frame = W^{-T} Ric W^{-1}.
Eigen::MatrixXd berger_frame(const BergerAnsatz& ansatz, const Eigen::VectorXd& point);
Eigen::MatrixXd double_ansatz_frame(const DoubleAnsatz5D& ansatz, const Eigen::VectorXd& point);

/// Converts a coordinate Ricci matrix into the orthonormal frame given by the
/// coframe matrix W.
Eigen::MatrixXd to_frame(const Eigen::MatrixXd& ric_coord, const Eigen::MatrixXd& coframe);

/// A chart point away from the Euler-angle singularities, for oracle tests.
inline constexpr double kEulerTheta = 1.1;
inline constexpr double kEulerPhi = 0.4;
inline constexpr double kEulerPsi = 0.7;

}  // namespace tcone
