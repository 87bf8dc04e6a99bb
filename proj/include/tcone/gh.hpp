#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tcone/cone_family.hpp"
#include "tcone/warp.hpp"

namespace tcone {

/// Finite metric space: labelled points with a symmetric distance matrix.
struct FiniteMetricSpace {
  std::vector<std::string> labels;
  Eigen::MatrixXd D;
  std::string provenance;

  int size() const { return static_cast<int>(D.rows()); }
  double diameter() const { return D.size() ? D.maxCoeff() : 0.0; }
  /// Symmetry, zero diagonal, nonnegativity and the triangle inequality to `slack`.
  /// Throws DomainError on violation.
  void validate(double slack = 1e-9) const;
  /// Wraps a matrix, generating labels p0, p1, ...; validates.
  static FiniteMetricSpace from_matrix(Eigen::MatrixXd D, std::string provenance = {});
  static FiniteMetricSpace point();
  FiniteMetricSpace scaled(double lambda) const;
};

struct SampleOptions {
  int points = 300;
  int degree = 10;
  std::uint64_t seed = 1;
  int oversample = 16;  // candidate pool size relative to `points`
};

/// Quasi-uniform sample of a chart with density proportional to the volume
/// element: a jittered stratified candidate pool is resampled systematically by
/// volume weight. Distances are shortest paths on the symmetric k-nearest graph
/// whose edge lengths are Simpson approximations of the metric length of the
/// coordinate segment. Deterministic for a fixed seed.
FiniteMetricSpace sample_space(const MetricField& chart, const SampleOptions& opts);

struct GHBoundPair {
  double lower = 0.0;
  double upper = 0.0;
  /// Correspondence realizing `upper`: pairs (index in X, index in Y).
  std::vector<std::pair<int, int>> witness;
  std::string lower_method;
  std::string upper_method;
  bool exact = false;
};

/// Distortion of a relation between X and Y.
double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                  const std::vector<std::pair<int, int>>& relation);
/// True when every point of X and of Y appears in the relation.
bool is_correspondence(int nx, int ny, const std::vector<std::pair<int, int>>& relation);

/// Largest size for which the upper bound is computed exactly.
inline constexpr int kExactGhPoints = 6;

/// Half the distortion of the best correspondence found. Exact (branch and bound
/// over threshold values) when both spaces have at most six points; otherwise
/// `iterations` deterministic restarts of anchored matching plus local repair,
/// keeping the best so far.
GHBoundPair gh_upper_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, int iterations = 8);

/// max(|diam X - diam Y|, d_H(ecc X, ecc Y), d_H(dist X, dist Y)) / 2, where ecc
/// and dist are the eccentricity and distance-value sets as subsets of the line.
/// Each term is at most the distortion of any correspondence.
GHBoundPair gh_lower_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y);

GHBoundPair gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, int iterations = 8);

// ---------------------------------------------------------------------------
// Tangent cones along scale sequences
// ---------------------------------------------------------------------------

struct ConeTarget {
  std::string label;
  double u = 0.0;  // parameter of the cross-section family
};

struct ConeExperimentSpec {
  LemmaParams params = default_params();
  int stages = 48;
  double sigma = 0.05;
  SampleOptions sampling{};
  int iterations = 4;
  std::vector<ConeTarget> targets{{"t=(1,1/4)", 1.0}, {"t=(1/2,1/2)", 0.0}};
  std::vector<double> tolerances{0.2, 0.1, 0.05, 0.03};
  double own_threshold = 0.05;
  double other_threshold = 0.1;

  static LemmaParams default_params();
  void validate() const;
};

struct ConeExperimentRow {
  int target = 0;
  double tolerance = 0.0;
  double path_time = 0.0;
  double loglogL = 0.0;   // scale r = e^{-e^{e^{loglogL}}} / r0
  double u = 0.0;         // family parameter at that scale
  double h = 1.0;
  double closeness = 0.0; // bound on the drift of the family parameter over ρ in [1/2, 2]
  std::vector<GHBoundPair> bounds;  // to every target
};

struct ConeExperimentReport {
  std::vector<ConeExperimentRow> rows;
  std::vector<FiniteMetricSpace> targets;  // sampled target cross-sections
  std::vector<double> target_diameters;
  std::vector<double> final_own_upper;    // per target, last row of its sequence
  std::vector<double> final_other_lower;  // per target, min over the other targets
  bool demonstrated = false;
};

/// Follows, for each target, the scales at which the path first enters the
/// successive tolerance windows around the target parameter, samples the
/// rescaled cross-section there and bounds its GH distance to every sampled target.
ConeExperimentReport tangent_cone_experiment(const ConeExperimentSpec& spec);

}  // namespace tcone
