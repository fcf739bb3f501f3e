#include "sgce/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <sstream>

#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

Taxonomy::Taxonomy(std::string root, std::vector<ParentLink> links)
    : root_(normalize_label(root)), links_(std::move(links)) {
  if (root_.empty()) throw ValidationError("taxonomy: root is empty");
  auto intern = [this](const std::string& name) {
    auto [it, inserted] = index_.emplace(name, static_cast<int>(concepts_.size()));
    if (inserted) concepts_.push_back(name);
    return it->second;
  };
  intern(root_);
  for (auto& link : links_) {
    link.child = normalize_label(link.child);
    link.parent = normalize_label(link.parent);
    if (link.child.empty() || link.parent.empty()) throw ValidationError("taxonomy: empty concept name");
    intern(link.child);
    intern(link.parent);
  }
  const std::size_t n = concepts_.size();
  parents_.assign(n, {});
  neighbors_.assign(n, {});
  for (const auto& link : links_) {
    const int c = index_.at(link.child);
    const int p = index_.at(link.parent);
    if (c == p) throw ValidationError("taxonomy: cycle detected: " + link.child + " -> " + link.child);
    if (std::find(parents_[c].begin(), parents_[c].end(), p) != parents_[c].end()) continue;
    parents_[c].push_back(p);
    neighbors_[c].push_back(p);
    neighbors_[p].push_back(c);
  }
  const int root_index = index_.at(root_);
  if (!parents_[root_index].empty()) {
    throw ValidationError("taxonomy: root '" + root_ + "' must not have a parent");
  }

  // Cycle check over child -> parent links (iterative DFS, 0 new, 1 on stack, 2 done).
  std::vector<int> state(n, 0);
  std::vector<int> via(n, -1);
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(start), 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < parents_[v].size()) {
        const int p = parents_[v][next++];
        if (state[p] == 1) {
          std::string cycle = concepts_[p];
          for (int u = v; u != p && u >= 0; u = via[u]) cycle = concepts_[u] + " -> " + cycle;
          throw ValidationError("taxonomy: cycle detected: " + concepts_[p] + " -> " + cycle);
        }
        if (state[p] == 0) {
          state[p] = 1;
          via[p] = v;
          stack.emplace_back(p, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }

  // Reachability: walking down from the root must cover every concept.
  std::vector<std::vector<int>> children(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (int p : parents_[c]) children[p].push_back(static_cast<int>(c));
  }
  std::vector<bool> reached(n, false);
  std::vector<int> frontier{root_index};
  reached[root_index] = true;
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    for (int c : children[v]) {
      if (!reached[c]) {
        reached[c] = true;
        frontier.push_back(c);
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!reached[c]) throw ValidationError("taxonomy: concept '" + concepts_[c] + "' is unreachable from root");
  }

  for (std::size_t s = 0; s < n; ++s) {
    for (int d : bfs(static_cast<int>(s))) diameter_ = std::max(diameter_, d);
  }

  Fnv1a h;
  h.add(root_);
  for (const auto& link : links_) h.add(link.child).add(link.parent);
  hash_ = h.digest();
}

bool Taxonomy::contains(std::string_view name) const { return index_of(name) >= 0; }

int Taxonomy::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  const std::string normalized = normalize_label(name);
  it = index_.find(normalized);
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> Taxonomy::parents_of(std::string_view name) const {
  std::vector<std::string> out;
  const int i = index_of(name);
  if (i < 0) return out;
  for (int p : parents_[i]) out.push_back(concepts_[p]);
  return out;
}

std::vector<int> Taxonomy::bfs(int source) const {
  std::vector<int> dist(concepts_.size(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : neighbors_[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

const std::vector<int>& Taxonomy::distances_from(int source) const {
  {
    std::shared_lock lock(memo_->mutex);
    if (auto it = memo_->rows.find(source); it != memo_->rows.end()) return it->second;
  }
  auto dist = bfs(source);
  std::unique_lock lock(memo_->mutex);
  // unordered_map references stay valid across rehashing
  return memo_->rows.try_emplace(source, std::move(dist)).first->second;
}

std::optional<double> Taxonomy::distance(std::string_view a, std::string_view b) const {
  const int ia = index_of(a);
  const int ib = index_of(b);
  if (ia < 0 || ib < 0) return std::nullopt;
  if (ia == ib) return 0.0;
  // symmetric: always search from the smaller index so one memo row serves both orders
  const auto& dist = distances_from(std::min(ia, ib));
  return static_cast<double>(dist[std::max(ia, ib)]);
}

Taxonomy load_taxonomy(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<std::string> root;
  std::vector<Taxonomy::ParentLink> links;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (normalize_label(line).empty()) continue;
    const std::string where = "taxonomy line " + std::to_string(line_no);
    if (!root) {
      const std::string head = normalize_label(line);
      if (head.rfind("!root ", 0) != 0) throw ValidationError(where + ": first line must be '!root <name>'");
      root = head.substr(6);
      continue;
    }
    std::string child, parent;
    if (auto tab = line.find('\t'); tab != std::string::npos) {
      child = line.substr(0, tab);
      parent = line.substr(tab + 1);
    } else {
      // without a tab, accept exactly two single-word fields
      const auto tokens = split_tokens(normalize_label(line));
      if (tokens.size() != 2) throw ValidationError(where + ": expected 'child<TAB>parent'");
      child = tokens[0];
      parent = tokens[1];
    }
    if (normalize_label(child).empty() || normalize_label(parent).empty()) {
      throw ValidationError(where + ": empty concept name");
    }
    links.push_back({std::move(child), std::move(parent)});
  }
  if (!root) throw ValidationError("taxonomy: missing '!root <name>' declaration");
  return Taxonomy(*root, std::move(links));
}

CostModel::CostModel(std::shared_ptr<const Taxonomy> node_taxonomy,
                     std::shared_ptr<const Taxonomy> relation_taxonomy, const Options& options)
    : node_taxonomy_(std::move(node_taxonomy)), relation_taxonomy_(std::move(relation_taxonomy)) {
  if (!node_taxonomy_) throw ConfigError("cost model requires a node taxonomy");
  node_indel_ = options.node_indel.value_or(node_taxonomy_->diameter() / 2.0);
  edge_indel_ = options.edge_indel;
  unknown_cost_ = options.unknown_cost.value_or(2.0 * node_indel_);
  for (double c : {node_indel_, edge_indel_, unknown_cost_}) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("edit costs must be finite and nonnegative");
  }
}

double CostModel::node_substitution(std::string_view a, std::string_view b) const {
  if (a == b) return 0.0;
  const double cap = 2.0 * node_indel_;
  const auto d = node_taxonomy_->distance(a, b);
  return std::min(d ? *d : unknown_cost_, cap);
}

double CostModel::edge_substitution(std::string_view a, std::string_view b) const {
  if (a == b) return 0.0;
  if (!relation_taxonomy_) return edge_indel_;
  const double cap = 2.0 * edge_indel_;
  const auto d = relation_taxonomy_->distance(a, b);
  return std::min(d ? *d : unknown_cost_, cap);
}

std::uint64_t CostModel::content_hash() const noexcept {
  Fnv1a h;
  h.add(node_taxonomy_->content_hash());
  h.add(relation_taxonomy_ ? relation_taxonomy_->content_hash() : std::uint64_t{0});
  h.add(node_indel_).add(edge_indel_).add(unknown_cost_);
  return h.digest();
}

}  // namespace sgce
