#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace sgce::testing {

SemanticGraph make_graph(const std::string& id, const std::string& cls, const std::vector<std::string>& labels,
                         const std::vector<std::tuple<int, int, std::string>>& edges) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < labels.size(); ++i) nodes.push_back({static_cast<int>(i), labels[i]});
  std::vector<Edge> es;
  for (const auto& [s, d, l] : edges) es.push_back({s, d, l});
  return SemanticGraph(id, std::nullopt, cls, std::move(nodes), std::move(es));
}

std::shared_ptr<const Taxonomy> five_node_taxonomy() {
  return std::make_shared<const Taxonomy>(
      "root", std::vector<Taxonomy::ParentLink>{
                  {"animal", "root"}, {"bird", "animal"}, {"mammal", "animal"}, {"dog", "mammal"}});
}

std::shared_ptr<const Taxonomy> ten_concept_taxonomy() {
  return std::make_shared<const Taxonomy>(
      "entity", std::vector<Taxonomy::ParentLink>{{"animal", "entity"},
                                                  {"vehicle", "entity"},
                                                  {"person", "entity"},
                                                  {"dog", "animal"},
                                                  {"cat", "animal"},
                                                  {"car", "vehicle"},
                                                  {"bike", "vehicle"},
                                                  {"man", "person"},
                                                  {"woman", "person"}});
}

SemanticGraph random_graph(Rng& rng, const std::string& id, const std::vector<std::string>& labels,
                           int max_nodes, int max_edges) {
  static const std::vector<std::string> kRelations{"on", "riding", "near", "has"};
  const int n = 1 + static_cast<int>(rng.below(max_nodes));
  std::vector<std::string> node_labels;
  for (int i = 0; i < n; ++i) node_labels.push_back(labels[rng.below(labels.size())]);
  const int m = static_cast<int>(rng.below(std::min(max_edges, n * n) + 1));
  std::set<std::pair<int, int>> used;
  std::vector<std::tuple<int, int, std::string>> edges;
  for (int attempt = 0; static_cast<int>(edges.size()) < m && attempt < 100; ++attempt) {
    const int s = static_cast<int>(rng.below(n));
    const int d = static_cast<int>(rng.below(n));
    if (!used.emplace(s, d).second) continue;
    edges.emplace_back(s, d, kRelations[rng.below(kRelations.size())]);
  }
  return make_graph(id, "c", node_labels, edges);
}

double brute_force_ged(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs) {
  const int n = static_cast<int>(a.node_count());
  const int m = static_cast<int>(b.node_count());
  std::map<std::pair<int, int>, std::string> eb;
  for (const auto& e : b.edges()) eb[{b.index_of(e.src), b.index_of(e.dst)}] = e.label;

  std::vector<int> phi(n, -1);
  std::vector<bool> used(m, false);
  double best = std::numeric_limits<double>::infinity();

  auto evaluate = [&]() {
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
      c += phi[i] < 0 ? costs.node_indel()
                      : costs.node_substitution(a.nodes()[i].label, b.nodes()[phi[i]].label);
    }
    for (int k = 0; k < m; ++k) {
      if (!used[k]) c += costs.node_indel();
    }
    std::set<std::pair<int, int>> matched;
    for (const auto& e : a.edges()) {
      const int s = phi[a.index_of(e.src)];
      const int d = phi[a.index_of(e.dst)];
      auto it = (s >= 0 && d >= 0) ? eb.find({s, d}) : eb.end();
      if (it != eb.end()) {
        c += costs.edge_substitution(e.label, it->second);
        matched.insert(it->first);
      } else {
        c += costs.edge_indel();
      }
    }
    for (const auto& [key, label] : eb) {
      if (!matched.count(key)) c += costs.edge_indel();
    }
    return c;
  };

  std::function<void(int)> rec = [&](int t) {
    if (t == n) {
      best = std::min(best, evaluate());
      return;
    }
    phi[t] = -1;
    rec(t + 1);
    for (int k = 0; k < m; ++k) {
      if (used[k]) continue;
      used[k] = true;
      phi[t] = k;
      rec(t + 1);
      used[k] = false;
      phi[t] = -1;
    }
  };
  rec(0);
  return best;
}

std::vector<std::vector<double>> floyd_warshall(const Taxonomy& t) {
  const auto& names = t.concepts();
  const std::size_t n = names.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[names[i]] = i;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& link : t.parent_links()) {
    const auto c = index.at(link.child);
    const auto p = index.at(link.parent);
    d[c][p] = d[p][c] = 1.0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

}  // namespace sgce::testing

namespace sgce::testing {

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) r[order[k]] = 0.5 * static_cast<double>(i + j - 1);
    i = j;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double gradient_relative_error(const EmbeddingModel& m, const GraphFeatures& x, const GraphFeatures& y, double ged,
                               LossKind loss, double step) {
  const auto analytic = loss_and_gradient(m, x, y, ged, loss).grad;
  Eigen::MatrixXd numeric(analytic.rows(), analytic.cols());
  EmbeddingModel probe = m;
  for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
    for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
      const double w = m.weight()(r, c);
      probe.weight()(r, c) = w + step;
      const double up = loss_and_gradient(probe, x, y, ged, loss).loss;
      probe.weight()(r, c) = w - step;
      const double down = loss_and_gradient(probe, x, y, ged, loss).loss;
      probe.weight()(r, c) = w;
      numeric(r, c) = (up - down) / (2.0 * step);
    }
  }
  const double denom = std::max(analytic.norm(), numeric.norm());
  return denom == 0.0 ? 0.0 : (analytic - numeric).norm() / denom;
}

}  // namespace sgce::testing
