#include "sgce/ged.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "sgce/error.hpp"
#include "sgce/lsap.hpp"
#include "sgce/util.hpp"

namespace sgce {

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::NodeIns: return "NodeIns";
    case EditKind::NodeDel: return "NodeDel";
    case EditKind::NodeSub: return "NodeSub";
    case EditKind::EdgeIns: return "EdgeIns";
    case EditKind::EdgeDel: return "EdgeDel";
    case EditKind::EdgeSub: return "EdgeSub";
  }
  return "?";
}

EditKind edit_kind_from_string(std::string_view name) {
  for (EditKind k : {EditKind::NodeIns, EditKind::NodeDel, EditKind::NodeSub, EditKind::EdgeIns,
                     EditKind::EdgeDel, EditKind::EdgeSub}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown edit kind '" + std::string(name) + "'");
}

namespace {

// Edge indices grouped by (src position, dst position).
class EdgeTable {
 public:
  explicit EdgeTable(const SemanticGraph& g) : n_(g.node_count()), cells_(n_ * n_) {
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
      const auto& e = g.edges()[k];
      const std::size_t s = g.index_of(e.src);
      const std::size_t d = g.index_of(e.dst);
      auto& cell = cells_[s * n_ + d];
      if (cell.empty()) order_.emplace_back(s, d);
      cell.push_back(static_cast<int>(k));
    }
  }
  const std::vector<int>& at(std::size_t s, std::size_t d) const { return cells_[s * n_ + d]; }
  // Distinct (src, dst) keys in order of first appearance.
  const std::vector<std::pair<std::size_t, std::size_t>>& keys() const { return order_; }

 private:
  std::size_t n_;
  std::vector<std::vector<int>> cells_;
  std::vector<std::pair<std::size_t, std::size_t>> order_;
};

struct LabelMatch {
  double cost = 0.0;
  std::vector<int> a_to_b;  // -1: deleted
  std::vector<int> b_to_a;  // -1: inserted
};

// Optimal correspondence between two edge-label multisets.
template <typename LabelA, typename LabelB>
LabelMatch match_labels(const std::vector<int>& as, const std::vector<int>& bs, const LabelA& label_a,
                        const LabelB& label_b, const CostModel& costs) {
  LabelMatch m;
  const std::size_t p = as.size();
  const std::size_t q = bs.size();
  m.a_to_b.assign(p, -1);
  m.b_to_a.assign(q, -1);
  if (p == 0 || q == 0) {
    m.cost = static_cast<double>(p + q) * costs.edge_indel();
    return m;
  }
  if (p == 1 && q == 1) {
    const double sub = costs.edge_substitution(label_a(as[0]), label_b(bs[0]));
    if (sub <= 2.0 * costs.edge_indel()) {
      m.a_to_b[0] = 0;
      m.b_to_a[0] = 0;
      m.cost = sub;
    } else {
      m.cost = 2.0 * costs.edge_indel();
    }
    return m;
  }
  const std::size_t n = p + q;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) c(i, j) = costs.edge_substitution(label_a(as[i]), label_b(bs[j]));
    for (std::size_t k = 0; k < p; ++k) c(i, q + k) = i == k ? costs.edge_indel() : kForbidden;
  }
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t j = 0; j < q; ++j) c(p + k, j) = k == j ? costs.edge_indel() : kForbidden;
  }
  const Assignment sol = solve_lsap(c);
  m.cost = sol.cost;
  for (std::size_t i = 0; i < p; ++i) {
    const int j = sol.row_to_col[i];
    if (j < static_cast<int>(q)) {
      m.a_to_b[i] = j;
      m.b_to_a[j] = static_cast<int>(i);
    }
  }
  return m;
}

EditOp node_op(EditKind kind, const Node* src, const Node* dst, double cost) {
  EditOp op;
  op.kind = kind;
  if (src) op.source = NodeRef{src->id, src->label};
  if (dst) op.target = NodeRef{dst->id, dst->label};
  op.cost = cost;
  return op;
}

EditOp edge_op(EditKind kind, const Edge* src, const Edge* dst, double cost) {
  EditOp op;
  op.kind = kind;
  if (src) op.source = EdgeRef{src->src, src->dst, src->label};
  if (dst) op.target = EdgeRef{dst->src, dst->dst, dst->label};
  op.cost = cost;
  return op;
}

void finalize(EditPath& path) {
  path.total_cost = 0.0;
  path.node_edits = 0;
  path.edge_edits = 0;
  for (const auto& op : path.ops) {
    path.total_cost += op.cost;
    if (op.cost > 0.0) ++(is_node_op(op.kind) ? path.node_edits : path.edge_edits);
  }
}

}  // namespace

EditPath induced_path(const SemanticGraph& a, const SemanticGraph& b, const std::vector<int>& a_to_b,
                      const CostModel& costs) {
  if (a_to_b.size() != a.node_count()) throw InconsistencyError("node mapping size does not match source graph");
  EditPath path;
  path.source_id = a.instance_id();
  path.target_id = b.instance_id();

  std::vector<char> hit(b.node_count(), 0);
  for (std::size_t i = 0; i < a.node_count(); ++i) {
    const Node& u = a.nodes()[i];
    const int k = a_to_b[i];
    if (k < 0) {
      path.ops.push_back(node_op(EditKind::NodeDel, &u, nullptr, costs.node_indel()));
      continue;
    }
    if (k >= static_cast<int>(b.node_count()) || hit[k]) throw InconsistencyError("node mapping is not injective");
    hit[k] = 1;
    const Node& v = b.nodes()[k];
    path.ops.push_back(node_op(EditKind::NodeSub, &u, &v, costs.node_substitution(u.label, v.label)));
  }
  for (std::size_t k = 0; k < b.node_count(); ++k) {
    if (!hit[k]) path.ops.push_back(node_op(EditKind::NodeIns, nullptr, &b.nodes()[k], costs.node_indel()));
  }

  const EdgeTable ta(a);
  const EdgeTable tb(b);
  const auto label_a = [&](int e) -> const std::string& { return a.edges()[e].label; };
  const auto label_b = [&](int e) -> const std::string& { return b.edges()[e].label; };
  std::set<std::pair<std::size_t, std::size_t>> consumed;
  static const std::vector<int> kNone;
  for (const auto& [s, d] : ta.keys()) {
    const auto& as = ta.at(s, d);
    const int k = a_to_b[s];
    const int l = a_to_b[d];
    const auto& bs = (k >= 0 && l >= 0) ? tb.at(k, l) : kNone;
    if (k >= 0 && l >= 0) consumed.emplace(k, l);
    const LabelMatch m = match_labels(as, bs, label_a, label_b, costs);
    for (std::size_t i = 0; i < as.size(); ++i) {
      const Edge& ea = a.edges()[as[i]];
      if (m.a_to_b[i] >= 0) {
        const Edge& eb = b.edges()[bs[m.a_to_b[i]]];
        path.ops.push_back(edge_op(EditKind::EdgeSub, &ea, &eb, costs.edge_substitution(ea.label, eb.label)));
      } else {
        path.ops.push_back(edge_op(EditKind::EdgeDel, &ea, nullptr, costs.edge_indel()));
      }
    }
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (m.b_to_a[j] < 0) path.ops.push_back(edge_op(EditKind::EdgeIns, nullptr, &b.edges()[bs[j]], costs.edge_indel()));
    }
  }
  for (const Edge& e : b.edges()) {
    const std::pair<std::size_t, std::size_t> key(b.index_of(e.src), b.index_of(e.dst));
    if (!consumed.count(key)) path.ops.push_back(edge_op(EditKind::EdgeIns, nullptr, &e, costs.edge_indel()));
  }
  finalize(path);
  return path;
}

EditPath invert_path(const EditPath& path) {
  EditPath out;
  out.source_id = path.target_id;
  out.target_id = path.source_id;
  // node ops first, then edge ops, each in their original relative order
  for (const bool nodes : {true, false}) {
    for (const auto& op : path.ops) {
      if (is_node_op(op.kind) != nodes) continue;
      EditOp inv = op;
      std::swap(inv.source, inv.target);
      switch (op.kind) {
        case EditKind::NodeIns: inv.kind = EditKind::NodeDel; break;
        case EditKind::NodeDel: inv.kind = EditKind::NodeIns; break;
        case EditKind::EdgeIns: inv.kind = EditKind::EdgeDel; break;
        case EditKind::EdgeDel: inv.kind = EditKind::EdgeIns; break;
        default: break;
      }
      out.ops.push_back(std::move(inv));
    }
  }
  finalize(out);
  return out;
}

namespace {

// Edge labels incident to each node: out-edges (including self-loops) and in-edges.
struct Incidence {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;
  std::vector<int> degree;  // distinct incident edges
};

Incidence incidence(const SemanticGraph& g) {
  Incidence inc;
  inc.out.resize(g.node_count());
  inc.in.resize(g.node_count());
  inc.degree.assign(g.node_count(), 0);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    const int s = g.index_of(e.src);
    const int d = g.index_of(e.dst);
    inc.out[s].push_back(static_cast<int>(k));
    ++inc.degree[s];
    if (d != s) {
      inc.in[d].push_back(static_cast<int>(k));
      ++inc.degree[d];
    }
  }
  return inc;
}

std::vector<int> bipartite_mapping(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs) {
  const std::size_t n = a.node_count();
  const std::size_t m = b.node_count();
  const Incidence ia = incidence(a);
  const Incidence ib = incidence(b);
  const auto label_a = [&](int e) -> const std::string& { return a.edges()[e].label; };
  const auto label_b = [&](int e) -> const std::string& { return b.edges()[e].label; };

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      c(i, j) = costs.node_substitution(a.nodes()[i].label, b.nodes()[j].label) +
                match_labels(ia.out[i], ib.out[j], label_a, label_b, costs).cost +
                match_labels(ia.in[i], ib.in[j], label_a, label_b, costs).cost;
    }
    for (std::size_t k = 0; k < n; ++k) {
      c(i, m + k) = i == k ? costs.node_indel() + ia.degree[i] * costs.edge_indel() : kForbidden;
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      c(n + k, j) = k == j ? costs.node_indel() + ib.degree[j] * costs.edge_indel() : kForbidden;
    }
  }
  const Assignment sol = solve_lsap(c);
  std::vector<int> a_to_b(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.row_to_col[i] < static_cast<int>(m)) a_to_b[i] = sol.row_to_col[i];
  }
  return a_to_b;
}

}  // namespace

GedResult bipartite_ged(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs) {
  // cheaper of the forward and transposed assignments
  EditPath forward = induced_path(a, b, bipartite_mapping(a, b, costs), costs);
  EditPath backward = invert_path(induced_path(b, a, bipartite_mapping(b, a, costs), costs));
  GedResult r;
  r.path = backward.total_cost < forward.total_cost - 1e-12 ? std::move(backward) : std::move(forward);
  r.value = r.path.total_cost;
  r.exact = false;
  return r;
}

namespace {

struct SearchState {
  int parent = -1;
  int image = -1;  // target position for source node `depth - 1`, -1 = deleted
  int depth = 0;
  std::uint32_t used = 0;
  double g = 0.0;
  double f = 0.0;
  bool complete = false;
};

struct QueueEntry {
  double f;
  int depth;
  std::uint64_t seq;
  int state;
  // min-heap on f, deeper first, then first-generated first
  bool operator<(const QueueEntry& o) const {
    if (f != o.f) return f > o.f;
    if (depth != o.depth) return depth < o.depth;
    return seq > o.seq;
  }
};

class ExactSearch {
 public:
  ExactSearch(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs)
      : a_(a), b_(b), costs_(costs), ta_(a), tb_(b) {}

  std::vector<int> run(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    const int n = static_cast<int>(a_.node_count());
    states_.push_back({});
    states_[0].f = heuristic(0, 0);
    if (n == 0) states_[0].f = states_[0].g = completion(0);
    states_[0].complete = n == 0;
    std::priority_queue<QueueEntry> open;
    std::uint64_t seq = 0;
    open.push({states_[0].f, 0, seq++, 0});
    double best_bound = 0.0;
    std::uint64_t expansions = 0;
    while (!open.empty()) {
      const QueueEntry top = open.top();
      open.pop();
      best_bound = std::max(best_bound, top.f);
      if (states_[top.state].complete) return mapping_of(top.state);
      if ((++expansions & 255U) == 0 && std::chrono::steady_clock::now() > deadline) {
        throw TimeoutError("exact GED search timed out", best_bound);
      }
      const SearchState parent = states_[top.state];
      const int t = parent.depth;
      std::vector<int> map = mapping_of(top.state);
      map.resize(t + 1);
      for (int k = -1; k < static_cast<int>(b_.node_count()); ++k) {
        if (k >= 0 && (parent.used >> k) & 1U) continue;
        map[t] = k;
        SearchState child;
        child.parent = top.state;
        child.image = k;
        child.depth = t + 1;
        child.used = k >= 0 ? parent.used | (1U << k) : parent.used;
        child.g = parent.g + step_cost(map, t);
        if (child.depth == n) {
          child.g += completion(child.used);
          child.f = child.g;
          child.complete = true;
        } else {
          child.f = child.g + heuristic(child.depth, child.used);
        }
        states_.push_back(child);
        open.push({child.f, child.depth, seq++, static_cast<int>(states_.size() - 1)});
      }
    }
    throw NumericalError("exact GED search exhausted without a solution");
  }

 private:
  std::vector<int> mapping_of(int state) const {
    std::vector<int> map(states_[state].depth);
    for (int s = state; s > 0; s = states_[s].parent) map[states_[s].depth - 1] = states_[s].image;
    return map;
  }

  double group_cost(std::size_t s, std::size_t d, int k, int l) const {
    static const std::vector<int> kNone;
    const auto& as = ta_.at(s, d);
    const auto& bs = (k >= 0 && l >= 0) ? tb_.at(k, l) : kNone;
    if (as.empty() && bs.empty()) return 0.0;
    const auto label_a = [&](int e) -> const std::string& { return a_.edges()[e].label; };
    const auto label_b = [&](int e) -> const std::string& { return b_.edges()[e].label; };
    return match_labels(as, bs, label_a, label_b, costs_).cost;
  }

  // Cost added by fixing source node t: its node op plus every edge group
  // between t and already-fixed nodes (and its self-loops).
  double step_cost(const std::vector<int>& map, int t) const {
    const int k = map[t];
    double c = k >= 0 ? costs_.node_substitution(a_.nodes()[t].label, b_.nodes()[k].label) : costs_.node_indel();
    c += group_cost(t, t, k, k);
    for (int s = 0; s < t; ++s) {
      c += group_cost(t, s, k, map[s]);
      c += group_cost(s, t, map[s], k);
    }
    return c;
  }

  // Insert unused target nodes and every target edge touching one of them.
  double completion(std::uint32_t used) const {
    double c = 0.0;
    for (std::size_t k = 0; k < b_.node_count(); ++k) {
      if (!((used >> k) & 1U)) c += costs_.node_indel();
    }
    for (const auto& e : b_.edges()) {
      const int s = b_.index_of(e.src);
      const int d = b_.index_of(e.dst);
      if (!((used >> s) & 1U) || !((used >> d) & 1U)) c += costs_.edge_indel();
    }
    return c;
  }

  // LSAP over the remaining node operations only, edge costs ignored
  double heuristic(int depth, std::uint32_t used) const {
    std::vector<int> rest_a, rest_b;
    for (int i = depth; i < static_cast<int>(a_.node_count()); ++i) rest_a.push_back(i);
    for (int k = 0; k < static_cast<int>(b_.node_count()); ++k) {
      if (!((used >> k) & 1U)) rest_b.push_back(k);
    }
    const std::size_t r = rest_a.size();
    const std::size_t s = rest_b.size();
    if (r == 0 || s == 0) return static_cast<double>(r + s) * costs_.node_indel();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(r + s, r + s);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        c(i, j) = costs_.node_substitution(a_.nodes()[rest_a[i]].label, b_.nodes()[rest_b[j]].label);
      }
      for (std::size_t k = 0; k < r; ++k) c(i, s + k) = i == k ? costs_.node_indel() : kForbidden;
    }
    for (std::size_t k = 0; k < s; ++k) {
      for (std::size_t j = 0; j < s; ++j) c(r + k, j) = k == j ? costs_.node_indel() : kForbidden;
    }
    return solve_lsap(c).cost;
  }

  const SemanticGraph& a_;
  const SemanticGraph& b_;
  const CostModel& costs_;
  EdgeTable ta_;
  EdgeTable tb_;
  std::vector<SearchState> states_;
};

}  // namespace

GedResult exact_ged(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs,
                    const ExactLimits& limits) {
  const std::size_t largest = std::max(a.node_count(), b.node_count());
  if (largest > limits.max_nodes || largest > 32) {
    throw LimitError("graph pair (" + std::to_string(a.node_count()) + ", " + std::to_string(b.node_count()) +
                     " nodes) exceeds exact-solver limit of " + std::to_string(limits.max_nodes));
  }
  GedResult r;
  r.exact = true;
  // Branch over the smaller graph's nodes.
  if (a.node_count() > b.node_count()) {
    ExactSearch search(b, a, costs);
    r.path = invert_path(induced_path(b, a, search.run(limits.timeout), costs));
  } else {
    ExactSearch search(a, b, costs);
    r.path = induced_path(a, b, search.run(limits.timeout), costs);
  }
  r.value = r.path.total_cost;
  return r;
}

namespace {

struct WorkNode {
  int source_id;  // id in the source graph, or INT_MIN for inserted nodes
  std::optional<int> target_id;
  std::string label;
  bool deleted = false;
};

struct WorkEdge {
  int src;
  int dst;
  std::string label;
  bool alive = true;
};

}  // namespace

SemanticGraph apply_path(const SemanticGraph& a, const EditPath& path) {
  constexpr int kInserted = std::numeric_limits<int>::min();
  std::vector<WorkNode> nodes;
  std::map<int, int> by_source;
  std::map<int, int> by_target;
  for (const auto& n : a.nodes()) {
    by_source[n.id] = static_cast<int>(nodes.size());
    nodes.push_back({n.id, std::nullopt, n.label});
  }
  std::vector<WorkEdge> edges;
  for (const auto& e : a.edges()) edges.push_back({by_source[e.src], by_source[e.dst], e.label});

  auto fail = [](const std::string& what) { throw InconsistencyError("edit path inconsistent: " + what); };
  auto source_node = [&](int id) {
    auto it = by_source.find(id);
    if (it == by_source.end() || nodes[it->second].deleted) fail("no source node " + std::to_string(id));
    return it->second;
  };
  auto target_node = [&](int id) {
    auto it = by_target.find(id);
    if (it == by_target.end()) fail("no node for target id " + std::to_string(id));
    return it->second;
  };
  // edges may still hang on a node whose deletion was already recorded
  auto source_endpoint = [&](int id) {
    auto it = by_source.find(id);
    if (it == by_source.end()) fail("no source node " + std::to_string(id));
    return it->second;
  };
  auto find_edge = [&](const EdgeRef& ref) {
    const int s = source_endpoint(ref.src);
    const int d = source_endpoint(ref.dst);
    for (auto& e : edges) {
      if (e.alive && e.src == s && e.dst == d && e.label == ref.label) return &e;
    }
    fail("no source edge (" + std::to_string(ref.src) + ", " + std::to_string(ref.dst) + ", " + ref.label + ")");
    return static_cast<WorkEdge*>(nullptr);
  };
  auto bind_target = [&](int id, int node) {
    if (!by_target.emplace(id, node).second) fail("target node " + std::to_string(id) + " produced twice");
    nodes[node].target_id = id;
  };

  for (const auto& op : path.ops) {
    const bool node_kind = is_node_op(op.kind);
    const bool needs_source = op.kind != EditKind::NodeIns && op.kind != EditKind::EdgeIns;
    const bool needs_target = op.kind != EditKind::NodeDel && op.kind != EditKind::EdgeDel;
    if (needs_source != op.source.has_value() || needs_target != op.target.has_value()) {
      fail(std::string(to_string(op.kind)) + " has malformed references");
    }
    const bool refs_ok = (!op.source || std::holds_alternative<NodeRef>(*op.source) == node_kind) &&
                         (!op.target || std::holds_alternative<NodeRef>(*op.target) == node_kind);
    if (!refs_ok) fail(std::string(to_string(op.kind)) + " has references of the wrong type");
    switch (op.kind) {
      case EditKind::NodeSub: {
        const auto& src = std::get<NodeRef>(*op.source);
        const auto& dst = std::get<NodeRef>(*op.target);
        const int w = source_node(src.id);
        if (nodes[w].target_id) fail("source node " + std::to_string(src.id) + " substituted twice");
        nodes[w].label = dst.label;
        bind_target(dst.id, w);
        break;
      }
      case EditKind::NodeDel: {
        const int w = source_node(std::get<NodeRef>(*op.source).id);
        if (nodes[w].target_id) fail("deleting a substituted node");
        nodes[w].deleted = true;
        break;
      }
      case EditKind::NodeIns: {
        const auto& dst = std::get<NodeRef>(*op.target);
        nodes.push_back({kInserted, std::nullopt, dst.label});
        bind_target(dst.id, static_cast<int>(nodes.size() - 1));
        break;
      }
      case EditKind::EdgeDel: find_edge(std::get<EdgeRef>(*op.source))->alive = false; break;
      case EditKind::EdgeSub: {
        WorkEdge* e = find_edge(std::get<EdgeRef>(*op.source));
        const auto& dst = std::get<EdgeRef>(*op.target);
        if (target_node(dst.src) != e->src || target_node(dst.dst) != e->dst) fail("edge substitution moves endpoints");
        e->label = dst.label;
        break;
      }
      case EditKind::EdgeIns: {
        const auto& dst = std::get<EdgeRef>(*op.target);
        edges.push_back({target_node(dst.src), target_node(dst.dst), dst.label});
        break;
      }
    }
  }

  std::set<int> taken;
  for (const auto& n : nodes) {
    if (!n.deleted && n.target_id) taken.insert(*n.target_id);
  }
  int fresh = taken.empty() ? 0 : *taken.rbegin() + 1;
  std::vector<int> final_id(nodes.size(), 0);
  std::vector<Node> out_nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.deleted) continue;
    int id = n.target_id ? *n.target_id : n.source_id;
    if (!n.target_id && taken.count(id)) id = fresh++;
    if (!n.target_id) taken.insert(id);
    fresh = std::max(fresh, id + 1);
    final_id[i] = id;
    out_nodes.push_back({id, n.label});
  }
  std::vector<Edge> out_edges;
  for (const auto& e : edges) {
    if (!e.alive) continue;
    if (nodes[e.src].deleted || nodes[e.dst].deleted) fail("edge left dangling on a deleted node");
    out_edges.push_back({final_id[e.src], final_id[e.dst], e.label});
  }
  try {
    return SemanticGraph(path.target_id.empty() ? a.instance_id() : path.target_id, a.class_true(), a.class_pred(),
                         std::move(out_nodes), std::move(out_edges));
  } catch (const ValidationError& e) {
    fail(e.what());
  }
  return {};
}

GedMatrix::GedMatrix(std::vector<std::string> ids)
    : ids_(std::move(ids)), values_(ids_.size() * ids_.size(), 0.0), computed_(ids_.size() * ids_.size(), 0) {}

std::optional<double> GedMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw ValidationError("GED matrix index out of range");
  if (i == j) return 0.0;
  if (!computed_[i * size() + j]) return std::nullopt;
  return values_[i * size() + j];
}

double GedMatrix::value(std::size_t i, std::size_t j) const {
  auto v = at(i, j);
  if (!v) throw ValidationError("GED for pair (" + ids_[i] + ", " + ids_[j] + ") was not computed");
  return *v;
}

void GedMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= size() || j >= size()) throw ValidationError("GED matrix index out of range");
  if (i == j) return;
  values_[i * size() + j] = values_[j * size() + i] = v;
  computed_[i * size() + j] = computed_[j * size() + i] = 1;
}

GedMatrix ged_matrix(const GraphDataset& ds, const CostModel& costs,
                     const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& pairs, unsigned threads) {
  std::vector<std::string> ids;
  for (const auto& g : ds.graphs) ids.push_back(g.instance_id());
  GedMatrix out(std::move(ids));
  std::set<std::pair<std::size_t, std::size_t>> wanted;
  if (pairs) {
    for (auto [i, j] : *pairs) {
      if (i >= ds.size() || j >= ds.size()) throw ValidationError("GED pair index out of range");
      if (i != j) wanted.emplace(std::min(i, j), std::max(i, j));
    }
  } else {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t j = i + 1; j < ds.size(); ++j) wanted.emplace(i, j);
    }
  }
  const std::vector<std::pair<std::size_t, std::size_t>> work(wanted.begin(), wanted.end());
  std::vector<double> values(work.size());
  parallel_for(work.size(), threads, [&](std::size_t w) {
    values[w] = bipartite_ged(ds.graphs[work[w].first], ds.graphs[work[w].second], costs).value;
  });
  for (std::size_t w = 0; w < work.size(); ++w) out.set(work[w].first, work[w].second, values[w]);
  return out;
}

}  // namespace sgce
