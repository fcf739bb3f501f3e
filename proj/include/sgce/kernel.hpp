#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "sgce/graph.hpp"
#include "sgce/retrieval.hpp"

namespace sgce {

struct PyramidConfig {
  int d = 6;
  int L = 4;
  bool use_labels = true;

  void validate() const;
};

struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns
};

// Cyclic Jacobi rotations. Throws NumericalError when off-diagonal mass does
// not vanish within the sweep budget.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 100);

// Absolute eigenvectors of the symmetrized 0/1 adjacency for the d largest
// |eigenvalue|s (ties by solver order). Columns for eigenvalue 0 and missing
// columns (n < d) are zero.
Eigen::MatrixXd spectral_node_points(const SemanticGraph& g, int d);

// Cell of a coordinate in [0,1] with `cells` half-open cells; boundaries go to
// the lower cell.
int pyramid_cell(double x, int cells);

// Per-level intersection counts I_0..I_L, level 0 finest (2^L cells per dim).
std::vector<double> pyramid_intersections(const Eigen::MatrixXd& px, const std::vector<std::string>& lx,
                                          const Eigen::MatrixXd& py, const std::vector<std::string>& ly,
                                          const PyramidConfig& cfg);

// Kernel value from explicit point sets: I_0 + sum_{l>=1} (I_l - I_{l-1}) / 2^l.
double pyramid_match_points(const Eigen::MatrixXd& px, const std::vector<std::string>& lx, const Eigen::MatrixXd& py,
                            const std::vector<std::string>& ly, const PyramidConfig& cfg);

double pyramid_match(const SemanticGraph& x, const SemanticGraph& y, const PyramidConfig& cfg = {});

Eigen::MatrixXd pyramid_gram(const GraphDataset& ds, const PyramidConfig& cfg = {}, unsigned threads = 1);

// One ranking per query, descending kernel value.
std::vector<Ranking> kernel_rank(const GraphDataset& ds, const Eigen::MatrixXd& gram);

}  // namespace sgce
