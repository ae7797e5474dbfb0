#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperfa/criteria.hpp"
#include "hyperfa/mghfa.hpp"

namespace hyperfa::selection {

struct SelectionGrid {
  std::vector<int> g_range;
  std::vector<int> q_range;

  /// Inclusive integer ranges [g_lo, g_hi] x [q_lo, q_hi].
  static SelectionGrid inclusive(int g_lo, int g_hi, int q_lo, int q_hi);
};

struct BicRow {
  int G = 0;
  int q = 0;
  double loglik = 0.0;
  long rho = 0;
  double bic = 0.0;
  int iters = 0;
  std::string status;  // "converged", "max_iter" or "failed: <reason>"
};

struct SelectionResult {
  mghfa::FitReport best;
  std::vector<BicRow> table;  // g-major, q-minor order
};

/// Fits every (G, q) cell and keeps the largest BIC; ties go to the smaller
/// G, then the smaller q. Cells run concurrently up to config.threads; the
/// starts inside each cell then run sequentially.
/// Throws SelectionFailure when every cell fails.
SelectionResult select(const Eigen::MatrixXd& data, const SelectionGrid& grid, const mghfa::FitConfig& config);

/// Header G,q,loglik,rho,bic,iters,status.
void write_bic_table(std::ostream& out, const std::vector<BicRow>& table);

}  // namespace hyperfa::selection
