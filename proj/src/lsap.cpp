#include "sgce/lsap.hpp"

#include <cmath>

#include "sgce/error.hpp"

namespace sgce {

Assignment solve_lsap(const Eigen::MatrixXd& input) {
  if (input.rows() != input.cols()) throw NumericalError("LSAP requires a square cost matrix");
  const int n = static_cast<int>(input.rows());
  Assignment result;
  if (n == 0) return result;

  double sentinel = 1.0;
  for (int i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (int j = 0; j < n; ++j) {
      const double c = input(i, j);
      if (std::isnan(c) || c == -kForbidden) throw NumericalError("LSAP cost matrix contains NaN or -inf");
      if (c != kForbidden) row_max = std::max(row_max, std::abs(c));
    }
    sentinel += row_max;
  }
  sentinel *= 2.0;
  Eigen::MatrixXd cost = input.unaryExpr([sentinel](double c) { return c == kForbidden ? sentinel : c; });

  // 1-based potentials u (rows) and v (columns); column 0 is a virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    owner[0] = row;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), std::numeric_limits<double>::infinity());
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.row_to_col.assign(n, -1);
  result.col_to_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    result.row_to_col[owner[j] - 1] = j - 1;
    result.col_to_row[j - 1] = owner[j] - 1;
  }
  for (int i = 0; i < n; ++i) {
    const double c = input(i, result.row_to_col[i]);
    if (c == kForbidden) throw NumericalError("LSAP has no feasible assignment");
    result.cost += c;
  }
  return result;
}

}  // namespace sgce
