#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

namespace sgce {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

struct Assignment {
  std::vector<int> row_to_col;
  std::vector<int> col_to_row;
  double cost = 0.0;
};

// Minimum-cost perfect matching on a square matrix via shortest augmenting
// paths with dual potentials, O(n^3). Entries equal to kForbidden are replaced
// by a finite sentinel larger than any feasible assignment; a solution that
// still needs one throws NumericalError. Rows are augmented in index order and
// ties resolve to the lowest column, so results are deterministic.
Assignment solve_lsap(const Eigen::MatrixXd& cost);

}  // namespace sgce
