#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcone/curvature.hpp"
#include "tcone/warp.hpp"

namespace tcone {

// ---------------------------------------------------------------------------
// Pieces
// ---------------------------------------------------------------------------

/// r_ε in (0, π/4] with A(r_ε) = B(r_ε) for the bubble B^ε(b0).
double solve_r_eps(double eps, double b0);

/// Bubble B^ε(b0): A = (b0/2) sin 2r, B = b0 (1/2 - 0.49 ε) cosh(ε r / 100) on
/// (0, r_ε]. The fiber collapses at r = 0.
BergerAnsatz bubble(double eps, double b0);

/// Dimensionless convexity of ∂B^ε: the smallest of A'(r_ε), B'(r_ε) divided by b0.
double bubble_convexity(double eps, double b0);

struct Football {
  BergerAnsatz ansatz;  // r in [s, π/2 - s]
  double ell = 1.0;
  double s = 0.0;
  double radius = 0.0;  // (ℓ/2) sin 2s
  SliceGeometry lo_slice;  // r = s, outward -∂r
  SliceGeometry hi_slice;  // r = π/2 - s, outward +∂r
};

/// Football F_ℓ restricted to [s, π/2 - s]: A = B = (ℓ/2) sin 2r.
Football football(double ell, double s);

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

/// Boundary of one piece: its shape operator and the squared coefficient of the
/// slice metric along each frame direction, which fix the slice up to isometry.
struct GluePiece {
  std::string label;
  SliceGeometry slice;
  std::vector<double> coefficients;
};

GluePiece boundary_piece(const BergerAnsatz& ansatz, double r, int outward_sign, std::string label);
/// Slice s = const of a 5-d ansatz whose r-profiles are A = a sin 2r, B = b; the
/// direction coefficients are C², D²a², E²b², E²b².
GluePiece boundary_piece(const DoubleAnsatz5D& ansatz, double s, int outward_sign, std::string label);

/// Result of gluing piece 2, rescaled by `scale`, to piece 1 along their boundaries.
struct GluePlan {
  GluePiece first;
  GluePiece second;
  double scale = 1.0;
  double mismatch = 0.0;            // largest relative coefficient mismatch after scaling
  std::vector<double> shape_sum;    // shape1 + shape2 / scale, per direction
  double margin = 0.0;              // min of shape_sum
  double margin_dimless = 0.0;      // margin times the boundary radius of piece 1
  bool feasible = false;
};

/// Relative tolerance for boundary matching and for a zero margin.
inline constexpr double kGlueTolerance = 1e-10;

/// Rescales piece 2 so the boundaries are isometric and sums the shape operators
/// taken with respect to the two outward normals. Throws DomainError when no scale
/// makes the boundaries isometric.
GluePlan glue_check(const GluePiece& first, const GluePiece& second);

// ---------------------------------------------------------------------------
// Families g_t
// ---------------------------------------------------------------------------

enum class Stage { Step1, Step2 };
const char* to_string(Stage s);

struct ExampleIISpec {
  Stage stage = Stage::Step1;
  double b0 = 0.1;
  double ell = 0.0;    // 0: use ℓ̄(δ)
  double delta = 0.0;  // 0: λ₁ b0 / 100
  double smoothing = 0.1;  // collar half-width as a fraction of the shorter neighbour
  int r_nodes = 200;
  std::vector<double> t_grid{0.1, 0.25, 0.5, 0.75, 1.0};

  void validate() const;
  /// Step 2 grid in [1, 2].
  static ExampleIISpec step2(double b0 = 0.1);
};

struct StepOneConstants {
  double lambda1 = 0.0;  // bubble_convexity(1, b0)
  double delta = 0.0;
  double ell_bar = 0.0;
};

/// Largest ℓ (by bisection) for which the football bound T ≥ -δρ and the Step 1
/// glue margin hold at every t of the grid.
double ell_bar(double delta, double b0, const std::vector<double>& t_grid);
StepOneConstants step_one_constants(const ExampleIISpec& spec);

/// A piece placed along the glued coordinate u; `reversed` pieces run from r.hi
/// down to r.lo.
struct PlacedPiece {
  std::string label;
  BergerAnsatz ansatz;
  bool reversed = false;
  double offset = 0.0;

  double length() const { return ansatz.r.length(); }
};

struct ExampleIIMetric {
  Stage stage = Stage::Step1;
  double t = 0.0;
  double ell = 0.0;
  std::vector<PlacedPiece> pieces;
  std::vector<GluePlan> glues;
  double volume = 0.0;
  double ricci_min = 0.0;        // over the pieces, per unit vector
  double collar_ricci_min = 0.0; // smoothed collars; +inf when none is needed
  double eta = 0.0;              // ricci_min * sqrt(volume), scale invariant

  double total_length() const;
  /// (A, B) of the unsmoothed glued metric at u in [0, total_length()].
  std::pair<double, double> profile(double u) const;
  /// Single ansatz over the whole u-interval with collars of half-width w mollified.
  BergerAnsatz smoothed(double w) const;
  bool glue_feasible() const;
};

/// Glued metric g_t with its uniform-bound report.
ExampleIIMetric example2_family(const ExampleIISpec& spec, double t);
ExampleIIMetric example2_family(const ExampleIISpec& spec, const StepOneConstants& k, double t);

/// 2π² ∫ A B² dr over the ansatz interval.
double berger_volume(const BergerAnsatz& ansatz);
/// Smallest ricci_berger value on `nodes` interior points of the ansatz interval.
double berger_ricci_min(const BergerAnsatz& ansatz, int nodes);

/// Largest difference of the sampled (A, B) profiles, after normalizing u to [0, 1].
double profile_distance(const ExampleIIMetric& a, const ExampleIIMetric& b, int samples = 401);

// ---------------------------------------------------------------------------
// Cobordism
// ---------------------------------------------------------------------------

/// Root of sin 2s = e0 cosh(e0 s) in (0, π/4). Throws DomainError when none exists.
double solve_s0(double e0);

struct CobordismPieces {
  DoubleAnsatz5D c1;  // cone over the B⁰(b0) metric, s in [1, s_max]
  DoubleAnsatz5D c2;  // cap, s in (0, s0]
  double b0 = 0.0;
  double b1 = 0.0;
  double e0 = 0.0;
  double s0 = 0.0;
};

CobordismPieces cobordism_pieces(double b0, double b1, double e0, double s_max = 4.0);

struct ClosabilityCheck {
  CobordismPieces pieces;
  RicciReport c1_grid;
  RicciReport c2_grid;
  SliceGeometry c2_boundary;
  std::optional<GluePlan> glue;
  std::string glue_note;

  bool c1_ok() const { return c1_grid.minimum >= -1e-8; }
  bool c2_ok() const { return c2_grid.minimum > 0.0; }
  bool sff_ok() const { return c2_boundary.min_shape() > 0.0; }
  bool glue_ok() const { return glue && glue->feasible; }
  bool closable() const { return c1_ok() && c2_ok() && sff_ok() && glue_ok(); }
};

ClosabilityCheck closability_check(const CobordismPieces& pieces, int s_nodes = 60, int r_nodes = 60);

struct CobordismSearch {
  bool found = false;
  ClosabilityCheck best;  // first closable candidate, else the one with the largest glue margin
  int candidates = 0;
};

/// Sweeps b (used for both b0 and b1, which the glue requires) and e0.
CobordismSearch cobordism_search(const std::vector<double>& b_list, const std::vector<double>& e0_list,
                                 int s_nodes = 40, int r_nodes = 40);

}  // namespace tcone
