#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sgce {

struct Node {
  int id = 0;
  std::string label;

  bool operator==(const Node&) const = default;
};

struct Edge {
  int src = 0;
  int dst = 0;
  std::string label;

  bool operator==(const Edge&) const = default;
};

// Label given to edges that arrive without one.
inline constexpr std::string_view kDefaultEdgeLabel = "rel";

// Directed labeled multigraph describing one instance. Node and edge order is
// the order of construction and is preserved through parsing and serialization.
class SemanticGraph {
 public:
  SemanticGraph() = default;
  SemanticGraph(std::string instance_id, std::optional<std::string> class_true, std::string class_pred,
                std::vector<Node> nodes, std::vector<Edge> edges);

  const std::string& instance_id() const noexcept { return instance_id_; }
  const std::optional<std::string>& class_true() const noexcept { return class_true_; }
  const std::string& class_pred() const noexcept { return class_pred_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  // Position of node `id` in nodes(), or -1.
  int index_of(int id) const;
  bool has_node(int id) const { return index_of(id) >= 0; }

  // Throws ValidationError when an invariant is violated. The constructor
  // calls this. A node-less graph is a valid value here (it is the empty
  // operand of edit distances); datasets reject it.
  void validate() const;

  bool operator==(const SemanticGraph& other) const;

 private:
  std::string instance_id_;
  std::optional<std::string> class_true_;
  std::string class_pred_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<int, int> index_;
};

struct GraphDataset {
  std::string name;
  std::vector<SemanticGraph> graphs;

  std::size_t size() const noexcept { return graphs.size(); }
  // Position of the graph with this instance id, or -1.
  int index_of(std::string_view instance_id) const;
  void validate() const;

  bool operator==(const GraphDataset&) const = default;
};

struct Attribute {
  std::string part;
  std::string feature_type;
  std::string value;
};

struct AttributeRecord {
  std::string entity_label;
  std::vector<Attribute> attributes;
};

GraphDataset parse_dataset(std::string_view json_text);
std::string serialize_dataset(const GraphDataset& dataset);

// Record format: {"id", "class_pred", "entity", "attributes": [{"part","type","value"}]}.
struct StarInput {
  std::string id;
  std::string class_pred;
  AttributeRecord record;
};
StarInput parse_attribute_record(std::string_view json_text);
// Accepts either a single record object or an array of records.
std::vector<StarInput> parse_attribute_records(std::string_view json_text);

// Center node labeled with the entity, one node per distinct part linked by
// "has", and one value node per attribute linked from its part by the feature type.
SemanticGraph build_star_graph(const AttributeRecord& record, const std::string& id, const std::string& class_pred);

// Label-preserving isomorphism test by backtracking. Exponential; meant for
// small graphs in checks and tests.
bool label_isomorphic(const SemanticGraph& a, const SemanticGraph& b);

}  // namespace sgce
