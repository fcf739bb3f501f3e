#include "sgce/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

using nlohmann::json;

SemanticGraph::SemanticGraph(std::string instance_id, std::optional<std::string> class_true,
                             std::string class_pred, std::vector<Node> nodes, std::vector<Edge> edges)
    : instance_id_(std::move(instance_id)),
      class_true_(std::move(class_true)),
      class_pred_(std::move(class_pred)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, static_cast<int>(i)).second) {
      throw ValidationError("graph '" + instance_id_ + "': duplicate node id " + std::to_string(nodes_[i].id));
    }
  }
  validate();
}

int SemanticGraph::index_of(int id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

void SemanticGraph::validate() const {
  const std::string where = "graph '" + instance_id_ + "'";
  if (index_.size() != nodes_.size()) throw ValidationError(where + ": duplicate node ids");
  std::set<std::tuple<int, int, std::string>> seen;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    for (int endpoint : {e.src, e.dst}) {
      if (!has_node(endpoint)) {
        throw ValidationError(where + ": edge " + std::to_string(k) + " references missing node " +
                              std::to_string(endpoint));
      }
    }
    if (e.label.empty()) throw ValidationError(where + ": edge " + std::to_string(k) + " has an empty label");
    if (!seen.emplace(e.src, e.dst, e.label).second) {
      throw ValidationError(where + ": edge " + std::to_string(k) + " duplicates (" + std::to_string(e.src) + ", " +
                            std::to_string(e.dst) + ", " + e.label + ")");
    }
  }
}

bool SemanticGraph::operator==(const SemanticGraph& other) const {
  return instance_id_ == other.instance_id_ && class_true_ == other.class_true_ &&
         class_pred_ == other.class_pred_ && nodes_ == other.nodes_ && edges_ == other.edges_;
}

int GraphDataset::index_of(std::string_view instance_id) const {
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i].instance_id() == instance_id) return static_cast<int>(i);
  }
  return -1;
}

void GraphDataset::validate() const {
  if (graphs.empty()) throw ValidationError("empty dataset");
  std::set<std::string> ids;
  for (const auto& g : graphs) {
    if (g.node_count() == 0) throw ValidationError("graph '" + g.instance_id() + "': graph has no nodes");
    if (g.class_pred().empty()) throw ValidationError("graph '" + g.instance_id() + "': class_pred is empty");
    if (!ids.insert(g.instance_id()).second) {
      throw ValidationError("duplicate instance_id '" + g.instance_id() + "'");
    }
    g.validate();
  }
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) throw ValidationError(where + ": '" + key + "' must be an array");
  return *it;
}

SemanticGraph graph_from_json(const json& g, std::size_t position) {
  std::string where = "graph #" + std::to_string(position);
  if (!g.is_object()) throw ValidationError(where + ": not an object");
  std::string id = field<std::string>(g, "id", where);
  where = "graph '" + id + "'";

  std::optional<std::string> class_true;
  if (auto it = g.find("class_true"); it != g.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(where + ": class_true must be a string or null");
    class_true = it->get<std::string>();
  }
  auto class_pred = field<std::string>(g, "class_pred", where);

  std::vector<Node> nodes;
  for (const auto& n : array_field(g, "nodes", where)) {
    nodes.push_back({field<int>(n, "id", where), normalize_label(field<std::string>(n, "label", where))});
  }
  std::vector<Edge> edges;
  if (auto it = g.find("edges"); it != g.end()) {
    for (const auto& e : array_field(g, "edges", where)) {
      std::string label;
      if (auto lit = e.find("label"); lit != e.end() && !lit->is_null()) {
        label = normalize_label(field<std::string>(e, "label", where));
      }
      if (label.empty()) label = kDefaultEdgeLabel;
      edges.push_back({field<int>(e, "src", where), field<int>(e, "dst", where), std::move(label)});
    }
  }
  return SemanticGraph(std::move(id), std::move(class_true), std::move(class_pred), std::move(nodes),
                       std::move(edges));
}

}  // namespace

GraphDataset parse_dataset(std::string_view json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) throw ValidationError("dataset: top level must be an object");
  GraphDataset ds;
  if (auto it = root.find("name"); it != root.end() && it->is_string()) ds.name = it->get<std::string>();
  const json& graphs = array_field(root, "graphs", "dataset");
  ds.graphs.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) ds.graphs.push_back(graph_from_json(graphs[i], i));
  ds.validate();
  return ds;
}

std::string serialize_dataset(const GraphDataset& dataset) {
  json graphs = json::array();
  for (const auto& g : dataset.graphs) {
    json nodes = json::array();
    for (const auto& n : g.nodes()) nodes.push_back({{"id", n.id}, {"label", n.label}});
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label}});
    json obj;
    obj["id"] = g.instance_id();
    obj["class_true"] = g.class_true() ? json(*g.class_true()) : json(nullptr);
    obj["class_pred"] = g.class_pred();
    obj["nodes"] = std::move(nodes);
    obj["edges"] = std::move(edges);
    graphs.push_back(std::move(obj));
  }
  json root;
  root["name"] = dataset.name;
  root["graphs"] = std::move(graphs);
  return root.dump(1) + "\n";
}

namespace {

StarInput star_input_from_json(const json& r, std::size_t position) {
  std::string where = "attribute record #" + std::to_string(position);
  if (!r.is_object()) throw ValidationError(where + ": not an object");
  StarInput in;
  in.id = field<std::string>(r, "id", where);
  in.class_pred = field<std::string>(r, "class_pred", where);
  in.record.entity_label = normalize_label(field<std::string>(r, "entity", where));
  if (in.record.entity_label.empty()) throw ValidationError(where + ": entity is empty");
  for (const auto& a : array_field(r, "attributes", where)) {
    Attribute attr{normalize_label(field<std::string>(a, "part", where)),
                   normalize_label(field<std::string>(a, "type", where)),
                   normalize_label(field<std::string>(a, "value", where))};
    if (attr.part.empty() || attr.feature_type.empty() || attr.value.empty()) {
      throw ValidationError(where + ": attribute part, type and value must be non-empty");
    }
    in.record.attributes.push_back(std::move(attr));
  }
  return in;
}

}  // namespace

StarInput parse_attribute_record(std::string_view json_text) {
  return star_input_from_json(parse_json(json_text), 0);
}

std::vector<StarInput> parse_attribute_records(std::string_view json_text) {
  const json root = parse_json(json_text);
  std::vector<StarInput> out;
  if (root.is_array()) {
    for (std::size_t i = 0; i < root.size(); ++i) out.push_back(star_input_from_json(root[i], i));
  } else {
    out.push_back(star_input_from_json(root, 0));
  }
  return out;
}

SemanticGraph build_star_graph(const AttributeRecord& record, const std::string& id, const std::string& class_pred) {
  std::vector<Node> nodes{{0, normalize_label(record.entity_label)}};
  std::vector<Edge> edges;
  std::map<std::string, int> part_ids;
  for (const auto& attr : record.attributes) {
    if (attr.part.empty() || attr.feature_type.empty() || attr.value.empty()) {
      throw ValidationError("attribute part, type and value must be non-empty");
    }
    const std::string part = normalize_label(attr.part);
    auto [it, inserted] = part_ids.emplace(part, static_cast<int>(nodes.size()));
    if (inserted) {
      nodes.push_back({it->second, part});
      edges.push_back({0, it->second, "has"});
    }
    const int value_id = static_cast<int>(nodes.size());
    nodes.push_back({value_id, normalize_label(attr.value)});
    edges.push_back({it->second, value_id, normalize_label(attr.feature_type)});
  }
  return SemanticGraph(id, std::nullopt, class_pred, std::move(nodes), std::move(edges));
}

namespace {

using EdgeGroups = std::map<std::pair<int, int>, std::vector<std::string>>;

// Keyed by node positions; label lists sorted for multiset comparison.
EdgeGroups edge_groups(const SemanticGraph& g) {
  EdgeGroups groups;
  for (const auto& e : g.edges()) groups[{g.index_of(e.src), g.index_of(e.dst)}].push_back(e.label);
  for (auto& [key, labels] : groups) std::sort(labels.begin(), labels.end());
  return groups;
}

const std::vector<std::string>& group_at(const EdgeGroups& groups, int i, int j) {
  static const std::vector<std::string> kEmpty;
  auto it = groups.find({i, j});
  return it == groups.end() ? kEmpty : it->second;
}

bool extend(std::size_t t, std::vector<int>& map, std::vector<bool>& used, const SemanticGraph& a,
            const SemanticGraph& b, const EdgeGroups& ga, const EdgeGroups& gb) {
  if (t == map.size()) return true;
  const int ti = static_cast<int>(t);
  for (std::size_t k = 0; k < b.node_count(); ++k) {
    if (used[k] || b.nodes()[k].label != a.nodes()[t].label) continue;
    const int kk = static_cast<int>(k);
    map[t] = kk;
    bool ok = group_at(ga, ti, ti) == group_at(gb, kk, kk);
    for (int s = 0; ok && s < ti; ++s) {
      ok = group_at(ga, ti, s) == group_at(gb, kk, map[s]) && group_at(ga, s, ti) == group_at(gb, map[s], kk);
    }
    if (!ok) continue;
    used[k] = true;
    if (extend(t + 1, map, used, a, b, ga, gb)) return true;
    used[k] = false;
  }
  return false;
}

}  // namespace

bool label_isomorphic(const SemanticGraph& a, const SemanticGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  std::multiset<std::string> la, lb;
  for (const auto& n : a.nodes()) la.insert(n.label);
  for (const auto& n : b.nodes()) lb.insert(n.label);
  if (la != lb) return false;
  std::vector<int> map(a.node_count(), -1);
  std::vector<bool> used(b.node_count(), false);
  return extend(0, map, used, a, b, edge_groups(a), edge_groups(b));
}

}  // namespace sgce
