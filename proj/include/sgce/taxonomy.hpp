#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sgce {

// Concept hierarchy (a DAG rooted at `root`). Distances treat parent links as
// undirected unit-weight edges. Lookups are memoized per source concept; the
// memo is guarded so concurrent readers are safe.
class Taxonomy {
 public:
  struct ParentLink {
    std::string child;
    std::string parent;
  };

  Taxonomy(std::string root, std::vector<ParentLink> links);

  const std::string& root() const noexcept { return root_; }
  const std::vector<std::string>& concepts() const noexcept { return concepts_; }
  const std::vector<ParentLink>& parent_links() const noexcept { return links_; }
  std::size_t size() const noexcept { return concepts_.size(); }
  bool contains(std::string_view name) const;
  std::vector<std::string> parents_of(std::string_view name) const;

  // Shortest undirected path length; nullopt when either concept is absent.
  std::optional<double> distance(std::string_view a, std::string_view b) const;

  // Longest shortest path between any two concepts.
  int diameter() const noexcept { return diameter_; }

  // Stable content hash (root and links in file order).
  std::uint64_t content_hash() const noexcept { return hash_; }

 private:
  int index_of(std::string_view name) const;
  const std::vector<int>& distances_from(int source) const;
  std::vector<int> bfs(int source) const;

  std::string root_;
  std::vector<ParentLink> links_;
  std::vector<std::string> concepts_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> neighbors_;
  int diameter_ = 0;
  std::uint64_t hash_ = 0;

  struct Memo {
    std::shared_mutex mutex;
    std::unordered_map<int, std::vector<int>> rows;
  };
  // shared so copies reuse warmed rows
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// Reads "!root <name>" followed by "child<TAB>parent" lines; '#' starts a comment.
Taxonomy load_taxonomy(std::string_view text);

// Edit-operation costs. Insertions and deletions cost a label-independent
// constant; substitutions cost the taxonomy distance, clamped to delete+insert.
class CostModel {
 public:
  struct Options {
    std::optional<double> node_indel;    // default: half the node taxonomy diameter
    double edge_indel = 1.0;
    std::optional<double> unknown_cost;  // default: 2 * node_indel
  };

  CostModel(std::shared_ptr<const Taxonomy> node_taxonomy, std::shared_ptr<const Taxonomy> relation_taxonomy,
            const Options& options);
  explicit CostModel(std::shared_ptr<const Taxonomy> node_taxonomy)
      : CostModel(std::move(node_taxonomy), nullptr, Options{}) {}

  double node_indel() const noexcept { return node_indel_; }
  double edge_indel() const noexcept { return edge_indel_; }
  double unknown_cost() const noexcept { return unknown_cost_; }
  const Taxonomy& node_taxonomy() const noexcept { return *node_taxonomy_; }
  const Taxonomy* relation_taxonomy() const noexcept { return relation_taxonomy_.get(); }

  double node_substitution(std::string_view a, std::string_view b) const;
  double edge_substitution(std::string_view a, std::string_view b) const;

  std::uint64_t content_hash() const noexcept;

 private:
  std::shared_ptr<const Taxonomy> node_taxonomy_;
  std::shared_ptr<const Taxonomy> relation_taxonomy_;
  double node_indel_;
  double edge_indel_;
  double unknown_cost_;
};

}  // namespace sgce
