#include "sgce/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "sgce/util.hpp"

namespace sgce {

std::vector<std::size_t> eligible_order(const GraphDataset& ds, const Ranking& ranking, std::size_t query,
                                        const std::optional<std::string>& target) {
  std::vector<std::size_t> out;
  for (const auto& c : ranking) {
    if (is_eligible(ds, query, c.index, target)) out.push_back(c.index);
  }
  return out;
}

std::vector<std::size_t> ground_truth_order(const GraphDataset& ds, const GedMatrix& ged, std::size_t query,
                                            const std::optional<std::string>& target) {
  return eligible_order(ds, rank_by_ged(ged, query), query, target);
}

EditStatistics edit_statistics(const std::vector<RankedRetrieval>& results, const GraphDataset& ds,
                               const CostModel& costs) {
  if (results.empty()) throw ValidationError("edit statistics need at least one retrieval result");
  EditStatistics s;
  for (const auto& r : results) {
    const int q = ds.index_of(r.query_id);
    if (q < 0) throw ValidationError("unknown query id '" + r.query_id + "'");
    const auto ged = bipartite_ged(ds.graphs[q], ds.graphs.at(r.counterfactual_index), costs);
    s.avg_node_edits += ged.path.node_edits;
    s.avg_edge_edits += ged.path.edge_edits;
    s.avg_top1_ged += ged.value;
  }
  const double n = static_cast<double>(results.size());
  s.avg_node_edits /= n;
  s.avg_edge_edits /= n;
  s.avg_total_edits = s.avg_node_edits + s.avg_edge_edits;
  s.avg_top1_ged /= n;
  return s;
}

EvalReport evaluate(const std::vector<RankedRetrieval>& results, const GraphDataset& ds, const GedMatrix& ged,
                    const CostModel& costs, const std::vector<std::size_t>& ks) {
  EvalReport report;
  report.num_queries = results.size();
  report.edits = edit_statistics(results, ds, costs);
  for (std::size_t k : ks) {
    report.avg_precision_at_k[k] = 0.0;
    report.binary_precision_at_k[k] = 0.0;
    report.binary_ndcg_at_k[k] = 0.0;
  }
  for (const auto& r : results) {
    const auto query = static_cast<std::size_t>(ds.index_of(r.query_id));
    const auto pred = eligible_order(ds, r.candidates, query, r.requested_target);
    const auto gt = ground_truth_order(ds, ged, query, r.requested_target);
    for (std::size_t k : ks) {
      report.avg_precision_at_k[k] += avg_precision_at_k(gt, pred, k);
      report.binary_precision_at_k[k] += binary_precision_at_k(gt, pred, k);
      report.binary_ndcg_at_k[k] += binary_ndcg_at_k(gt, pred, k);
    }
  }
  const double n = static_cast<double>(results.size());
  for (std::size_t k : ks) {
    report.avg_precision_at_k[k] /= n;
    report.binary_precision_at_k[k] /= n;
    report.binary_ndcg_at_k[k] /= n;
  }
  return report;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json per_k = nlohmann::json::array();
  for (const auto& [k, v] : r.avg_precision_at_k) {
    per_k.push_back({{"k", k},
                     {"avg_precision", v},
                     {"binary_precision", r.binary_precision_at_k.at(k)},
                     {"binary_ndcg", r.binary_ndcg_at_k.at(k)}});
  }
  return {{"num_queries", r.num_queries},
          {"ranking", std::move(per_k)},
          {"avg_node_edits", r.edits.avg_node_edits},
          {"avg_edge_edits", r.edits.avg_edge_edits},
          {"avg_total_edits", r.edits.avg_total_edits},
          {"avg_top1_ged", r.edits.avg_top1_ged}};
}

std::string to_markdown(const EvalReport& r, const std::string& method) {
  std::ostringstream out;
  char buf[160];
  out << "| Method | k | P@k | P@k binary | NDCG@k binary |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& [k, v] : r.avg_precision_at_k) {
    std::snprintf(buf, sizeof buf, "| %s | %zu | %.3f | %.3f | %.3f |\n", method.c_str(), k, v,
                  r.binary_precision_at_k.at(k), r.binary_ndcg_at_k.at(k));
    out << buf;
  }
  out << "\n| Method | Queries | Node edits | Edge edits | Total edits | Top-1 GED |\n";
  out << "|---|---|---|---|---|---|\n";
  std::snprintf(buf, sizeof buf, "| %s | %zu | %.2f | %.2f | %.2f | %.2f |\n", method.c_str(), r.num_queries,
                r.edits.avg_node_edits, r.edits.avg_edge_edits, r.edits.avg_total_edits, r.edits.avg_top1_ged);
  out << buf;
  return out.str();
}

namespace {

using Counts = std::map<std::pair<std::string, std::string>, double>;

std::string triple(const std::string& s, const std::string& r, const std::string& o) {
  return "(" + s + ", " + r + ", " + o + ")";
}

void normalize(Counts& c) {
  double max = 0.0;
  for (const auto& [key, v] : c) max = std::max(max, v);
  if (max > 0.0) {
    for (auto& [key, v] : c) v /= max;
  }
}

}  // namespace

GlobalEdits aggregate_global_edits(const std::vector<RankedRetrieval>& results, const GraphDataset& ds) {
  if (results.empty()) throw ValidationError("no retrieval results for the requested class transition");
  GlobalEdits out;
  out.from_class = results.front().query_class;
  out.to_class = results.front().target_class;
  out.num_results = results.size();
  for (const auto& r : results) {
    if (r.query_class != out.from_class || r.target_class != out.to_class) {
      throw ValidationError("retrieval results span more than one class transition");
    }
    const int qi = ds.index_of(r.edit_path.source_id.empty() ? r.query_id : r.edit_path.source_id);
    const int ti = ds.index_of(r.edit_path.target_id.empty() ? r.counterfactual_id : r.edit_path.target_id);
    if (qi < 0 || ti < 0) throw ValidationError("edit path references graphs outside the dataset");
    const auto& src = ds.graphs[qi];
    const auto& dst = ds.graphs[ti];
    auto src_label = [&](int id) { return src.nodes().at(src.index_of(id)).label; };
    auto dst_label = [&](int id) { return dst.nodes().at(dst.index_of(id)).label; };
    for (const auto& op : r.edit_path.ops) {
      switch (op.kind) {
        case EditKind::NodeIns: out.concepts[{"insert", std::get<NodeRef>(*op.target).label}] += 1; break;
        case EditKind::NodeDel: out.concepts[{"delete", std::get<NodeRef>(*op.source).label}] += 1; break;
        case EditKind::NodeSub:
          if (op.cost > 0.0) {
            out.concepts[{"substitute",
                          std::get<NodeRef>(*op.source).label + " -> " + std::get<NodeRef>(*op.target).label}] += 1;
          }
          break;
        case EditKind::EdgeIns: {
          const auto& e = std::get<EdgeRef>(*op.target);
          out.triples[{"insert", triple(dst_label(e.src), e.label, dst_label(e.dst))}] += 1;
          out.relations[{"insert", e.label}] += 1;
          break;
        }
        case EditKind::EdgeDel: {
          const auto& e = std::get<EdgeRef>(*op.source);
          out.triples[{"delete", triple(src_label(e.src), e.label, src_label(e.dst))}] += 1;
          out.relations[{"delete", e.label}] += 1;
          break;
        }
        case EditKind::EdgeSub: {
          const auto& a = std::get<EdgeRef>(*op.source);
          const auto& b = std::get<EdgeRef>(*op.target);
          const auto before = triple(src_label(a.src), a.label, src_label(a.dst));
          const auto after = triple(dst_label(b.src), b.label, dst_label(b.dst));
          // a relabeled endpoint changes the triple even when the edge op is free
          if (before != after) out.triples[{"substitute", before + " -> " + after}] += 1;
          if (op.cost > 0.0) out.relations[{"substitute", a.label + " -> " + b.label}] += 1;
          break;
        }
      }
    }
  }
  normalize(out.triples);
  normalize(out.concepts);
  normalize(out.relations);
  return out;
}

namespace {

nlohmann::json counts_json(const Counts& c) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [key, v] : c) a.push_back({{"kind", key.first}, {"item", key.second}, {"normalized_count", v}});
  return a;
}

}  // namespace

nlohmann::json to_json(const GlobalEdits& g) {
  return {{"from_class", g.from_class},
          {"to_class", g.to_class},
          {"num_results", g.num_results},
          {"triples", counts_json(g.triples)},
          {"concepts", counts_json(g.concepts)},
          {"relations", counts_json(g.relations)}};
}

std::string global_edits_csv(const GlobalEdits& g) {
  struct Row {
    std::string category, kind, item;
    double value;
  };
  std::vector<Row> rows;
  for (const auto& [name, table] : {std::pair<const char*, const Counts*>{"triple", &g.triples},
                                    {"concept", &g.concepts},
                                    {"relation", &g.relations}}) {
    for (const auto& [key, v] : *table) rows.push_back({name, key.first, key.second, v});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.value > b.value; });
  std::ostringstream out;
  out << "item,kind,normalized_count,category\n";
  for (const auto& r : rows) {
    std::string item = r.item;
    if (item.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : item) {
        if (c == '"') q.push_back('"');
        q.push_back(c);
      }
      item = q + "\"";
    }
    out << item << ',' << r.kind << ',' << format_double(r.value) << ',' << r.category << '\n';
  }
  return out.str();
}

}  // namespace sgce
