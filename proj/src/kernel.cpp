#include "sgce/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

void PyramidConfig::validate() const {
  if (d < 1) throw ConfigError("pyramid dimension d must be at least 1");
  if (L < 0) throw ConfigError("pyramid levels L must be nonnegative");
  if (L > 30) throw ConfigError("pyramid levels L must be at most 30");
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, int max_sweeps) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw NumericalError("jacobi_eigen needs a square matrix");
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  auto off = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  bool converged = off() <= 1e-14 * scale;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off() <= 1e-14 * scale;
  }
  if (!converged) throw NumericalError("jacobi eigen-solver did not converge");
  return {a.diagonal(), v};
}

Eigen::MatrixXd spectral_node_points(const SemanticGraph& g, int d) {
  if (d < 1) throw ConfigError("spectral dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(g.nodes().size());
  Eigen::MatrixXd points = Eigen::MatrixXd::Zero(n, d);
  if (n == 0) return points;
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const int s = g.index_of(e.src), t = g.index_of(e.dst);
    adj(s, t) = 1.0;
    adj(t, s) = 1.0;
  }
  const auto eig = jacobi_eigen(adj);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(eig.values(a)) > std::abs(eig.values(b));
  });
  const Eigen::Index cols = std::min<Eigen::Index>(n, d);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Eigen::Index k = order[c];
    if (std::abs(eig.values(k)) <= 1e-9) continue;
    points.col(c) = eig.vectors.col(k).cwiseAbs().cwiseMin(1.0);
  }
  return points;
}

int pyramid_cell(double x, int cells) {
  const int c = static_cast<int>(std::ceil(x * cells)) - 1;
  return std::clamp(c, 0, cells - 1);
}

namespace {

using Histogram = std::map<std::pair<std::string, std::vector<int>>, int>;

Histogram histogram(const Eigen::MatrixXd& pts, const std::vector<std::string>& labels, int cells, bool use_labels) {
  Histogram h;
  std::vector<int> key(pts.cols());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) key[j] = pyramid_cell(pts(i, j), cells);
    ++h[{use_labels ? labels[i] : std::string(), key}];
  }
  return h;
}

std::vector<std::string> labels_of(const SemanticGraph& g) {
  std::vector<std::string> out;
  for (const auto& n : g.nodes()) out.push_back(n.label);
  return out;
}

// new matches at level l are worth 1/2^l; level 0 is the finest grid
double combine_levels(const std::vector<double>& I) {
  double k = I[0];
  for (std::size_t l = 1; l < I.size(); ++l) k += (I[l] - I[l - 1]) / std::ldexp(1.0, static_cast<int>(l));
  return k;
}

}  // namespace

std::vector<double> pyramid_intersections(const Eigen::MatrixXd& px, const std::vector<std::string>& lx,
                                          const Eigen::MatrixXd& py, const std::vector<std::string>& ly,
                                          const PyramidConfig& cfg) {
  cfg.validate();
  if (px.cols() != py.cols()) throw ConfigError("point sets differ in dimension");
  if (static_cast<std::size_t>(px.rows()) != lx.size() || static_cast<std::size_t>(py.rows()) != ly.size()) {
    throw ConfigError("one label per point is required");
  }
  std::vector<double> out;
  for (int l = 0; l <= cfg.L; ++l) {
    const int cells = 1 << (cfg.L - l);
    const auto hx = histogram(px, lx, cells, cfg.use_labels);
    const auto hy = histogram(py, ly, cells, cfg.use_labels);
    int total = 0;
    for (const auto& [key, count] : hx) {
      const auto it = hy.find(key);
      if (it != hy.end()) total += std::min(count, it->second);
    }
    out.push_back(total);
  }
  return out;
}

double pyramid_match_points(const Eigen::MatrixXd& px, const std::vector<std::string>& lx, const Eigen::MatrixXd& py,
                            const std::vector<std::string>& ly, const PyramidConfig& cfg) {
  return combine_levels(pyramid_intersections(px, lx, py, ly, cfg));
}

double pyramid_match(const SemanticGraph& x, const SemanticGraph& y, const PyramidConfig& cfg) {
  cfg.validate();
  return pyramid_match_points(spectral_node_points(x, cfg.d), labels_of(x), spectral_node_points(y, cfg.d),
                              labels_of(y), cfg);
}

Eigen::MatrixXd pyramid_gram(const GraphDataset& ds, const PyramidConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t n = ds.graphs.size();
  std::vector<Eigen::MatrixXd> points(n);
  std::vector<std::vector<std::string>> labels(n);
  parallel_for(n, threads, [&](std::size_t i) {
    points[i] = spectral_node_points(ds.graphs[i], cfg.d);
    labels[i] = labels_of(ds.graphs[i]);
  });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  Eigen::MatrixXd gram(n, n);
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double k = pyramid_match_points(points[i], labels[i], points[j], labels[j], cfg);
    gram(i, j) = k;
    gram(j, i) = k;
  });
  return gram;
}

std::vector<Ranking> kernel_rank(const GraphDataset& ds, const Eigen::MatrixXd& gram) {
  const std::size_t n = ds.graphs.size();
  if (static_cast<std::size_t>(gram.rows()) != n || static_cast<std::size_t>(gram.cols()) != n) {
    throw ValidationError("gram matrix size does not match the dataset");
  }
  std::vector<std::string> ids;
  for (const auto& g : ds.graphs) ids.push_back(g.instance_id());
  std::vector<Ranking> out;
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = gram(q, j);
    out.push_back(rank_by_scores(row, q, ids));
  }
  return out;
}

}  // namespace sgce
