#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tcone {

struct CrosscheckRow {
  std::string ansatz;  // "berger" or "5d"
  int draw = 0;
  std::vector<double> parameters;  // amplitudes and rates of every warper, then the point
  double max_rel_error = 0.0;      // over all frame components, relative to the largest analytic one
  std::string worst_component;
};

struct CrosscheckReport {
  std::vector<CrosscheckRow> rows;
  double worst = 0.0;
  double seconds = 0.0;

  bool passed(double tol) const { return worst <= tol; }
};

/// Compares the analytic Berger and 5-d Ricci components with the finite
/// difference oracle at `draws` random cosh-profile ansätze and random chart
/// points of each kind. Deterministic in the seed.
CrosscheckReport oracle_crosscheck(int draws, std::uint64_t seed);

}  // namespace tcone
