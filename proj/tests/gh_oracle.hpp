#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tcone/gh.hpp"

namespace tcone::testing {

// Bron-Kerbosch with pivoting on the compatibility graph of pairs; reports
// whether some maximal clique covers both spaces.
class CliqueOracle {
 public:
  CliqueOracle(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, double tau) : nx_(X.size()), ny_(Y.size()) {
    const int m = nx_ * ny_;
    adj_.assign(m, std::vector<char>(m, 0));
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        adj_[p][q] = p != q && std::abs(X.D(p / ny_, q / ny_) - Y.D(p % ny_, q % ny_)) <= tau;
  }

  bool covering_clique_exists() {
    std::vector<int> R, P, Xs;
    for (int v = 0; v < nx_ * ny_; ++v) P.push_back(v);
    return expand(R, P, Xs);
  }

 private:
  bool covers(const std::vector<int>& R) const {
    std::vector<char> cx(nx_, 0), cy(ny_, 0);
    for (int v : R) cx[v / ny_] = cy[v % ny_] = 1;
    return std::count(cx.begin(), cx.end(), 1) == nx_ && std::count(cy.begin(), cy.end(), 1) == ny_;
  }
  bool expand(std::vector<int>& R, std::vector<int> P, std::vector<int> X) {
    if (P.empty() && X.empty()) return covers(R);
    const int pivot = !P.empty() ? P.front() : X.front();
    const std::vector<int> cand = P;
    for (int v : cand) {
      if (adj_[pivot][v]) continue;
      std::vector<int> P2, X2;
      for (int w : P)
        if (adj_[v][w]) P2.push_back(w);
      for (int w : X)
        if (adj_[v][w]) X2.push_back(w);
      R.push_back(v);
      if (expand(R, P2, X2)) return true;
      R.pop_back();
      P.erase(std::find(P.begin(), P.end(), v));
      X.push_back(v);
    }
    return false;
  }

  int nx_, ny_;
  std::vector<std::vector<char>> adj_;
};

/// Half the least threshold admitting a covering clique, i.e. the exact GH distance.
inline double clique_oracle_gh(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  std::vector<double> taus{0.0};
  for (int a = 0; a < X.size(); ++a)
    for (int b = 0; b < X.size(); ++b)
      for (int c = 0; c < Y.size(); ++c)
        for (int d = 0; d < Y.size(); ++d) taus.push_back(std::abs(X.D(a, b) - Y.D(c, d)));
  std::sort(taus.begin(), taus.end());
  for (double t : taus)
    if (CliqueOracle(X, Y, t).covering_clique_exists()) return 0.5 * t;
  return 0.5 * taus.back();
}

}  // namespace tcone::testing
