#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sgce/graph.hpp"
#include "sgce/taxonomy.hpp"

namespace sgce {

enum class EditKind { NodeIns, NodeDel, NodeSub, EdgeIns, EdgeDel, EdgeSub };

std::string_view to_string(EditKind kind);
EditKind edit_kind_from_string(std::string_view name);
inline bool is_node_op(EditKind k) {
  return k == EditKind::NodeIns || k == EditKind::NodeDel || k == EditKind::NodeSub;
}

struct NodeRef {
  int id = 0;
  std::string label;
  bool operator==(const NodeRef&) const = default;
};

struct EdgeRef {
  int src = 0;
  int dst = 0;
  std::string label;
  bool operator==(const EdgeRef&) const = default;
};

using ItemRef = std::variant<NodeRef, EdgeRef>;

// Source refs use node ids of the source graph, target refs those of the target.
// Insertions carry only a target, deletions only a source.
struct EditOp {
  EditKind kind = EditKind::NodeSub;
  std::optional<ItemRef> source;
  std::optional<ItemRef> target;
  double cost = 0.0;

  bool operator==(const EditOp&) const = default;
};

struct EditPath {
  std::string source_id;
  std::string target_id;
  std::vector<EditOp> ops;
  double total_cost = 0.0;
  // Operations with nonzero cost; identical-label substitutions are kept in
  // `ops` but not counted.
  int node_edits = 0;
  int edge_edits = 0;

  int total_edits() const noexcept { return node_edits + edge_edits; }
  bool operator==(const EditPath&) const = default;
};

struct GedResult {
  double value = 0.0;
  EditPath path;
  bool exact = false;
};

// Edit path induced by a node correspondence. `a_to_b[i]` is the target node
// position for source node position i, or -1 to delete it; target nodes not
// hit are inserted. Edge operations follow from the mapped endpoints.
EditPath induced_path(const SemanticGraph& a, const SemanticGraph& b, const std::vector<int>& a_to_b,
                      const CostModel& costs);

// Reverses a path so it transforms its target into its source.
EditPath invert_path(const EditPath& path);

// Bipartite upper bound: one LSAP over node substitutions (augmented with the
// optimal matching of incident in/out edge labels), deletions and insertions,
// then the induced path is charged in full.
GedResult bipartite_ged(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs);

struct ExactLimits {
  std::size_t max_nodes = 8;
  std::chrono::milliseconds timeout{5000};
};

// Best-first search over partial node mappings with an LSAP lower bound on
// the remaining node operations.
GedResult exact_ged(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs,
                    const ExactLimits& limits = {});

// Replays `path` on `a`. Throws InconsistencyError when an op references a
// node or edge that is not there.
SemanticGraph apply_path(const SemanticGraph& a, const EditPath& path);

// Symmetric pairwise GED table with explicit "not computed" cells.
class GedMatrix {
 public:
  GedMatrix() = default;
  explicit GedMatrix(std::vector<std::string> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  bool computed(std::size_t i, std::size_t j) const { return i == j || computed_[i * size() + j]; }
  std::optional<double> at(std::size_t i, std::size_t j) const;
  // Throws ValidationError when the cell was not computed.
  double value(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);

  bool operator==(const GedMatrix&) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
  std::vector<char> computed_;
};

// bipartite_ged for the requested unordered pairs (all pairs when omitted).
GedMatrix ged_matrix(const GraphDataset& ds, const CostModel& costs,
                     const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& pairs = std::nullopt,
                     unsigned threads = 1);

}  // namespace sgce
