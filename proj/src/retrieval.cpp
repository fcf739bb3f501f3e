#include "sgce/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "sgce/error.hpp"
#include "sgce/ged_io.hpp"

namespace sgce {

Similarity similarity_from_string(std::string_view name) {
  if (name == "cosine") return Similarity::Cosine;
  if (name == "euclidean") return Similarity::Euclidean;
  throw ConfigError("unknown similarity '" + std::string(name) + "'");
}

namespace {

void sort_ranking(Ranking& r, const std::vector<std::string>& ids) {
  std::sort(r.begin(), r.end(), [&](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return ids[a.index] < ids[b.index];
  });
}

}  // namespace

Ranking rank_candidates(const Eigen::MatrixXd& embeddings, std::size_t query, const std::vector<std::string>& ids,
                        Similarity mode, std::vector<std::string>* warnings) {
  const auto n = static_cast<std::size_t>(embeddings.rows());
  if (query >= n) throw ValidationError("query index out of range");
  if (ids.size() != n) throw ValidationError("embedding ids and rows differ");
  const Eigen::VectorXd q = embeddings.row(query).transpose();
  const double qn = q.norm();
  Ranking r;
  r.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == query) continue;
    const auto row = embeddings.row(i);
    double s;
    if (mode == Similarity::Euclidean) {
      s = -(row.transpose() - q).squaredNorm();
    } else {
      const double rn = row.norm();
      if (qn == 0.0 || rn == 0.0) {
        s = -1.0;
        if (warnings) warnings->push_back("zero-norm embedding for '" + ids[qn == 0.0 ? query : i] + "'");
      } else {
        s = row.dot(q) / (rn * qn);
      }
    }
    r.push_back({i, s});
  }
  sort_ranking(r, ids);
  return r;
}

Ranking rank_by_scores(const std::vector<double>& scores, std::size_t query, const std::vector<std::string>& ids) {
  if (query >= scores.size() || ids.size() != scores.size()) throw ValidationError("score row does not match ids");
  Ranking r;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != query) r.push_back({i, scores[i]});
  }
  sort_ranking(r, ids);
  return r;
}

Ranking rank_by_ged(const GedMatrix& ged, std::size_t query) {
  if (query >= ged.size()) throw ValidationError("query index out of range");
  Ranking r;
  for (std::size_t i = 0; i < ged.size(); ++i) {
    if (i == query) continue;
    if (auto v = ged.at(query, i)) r.push_back({i, -*v});
  }
  sort_ranking(r, ged.ids());
  return r;
}

bool is_eligible(const GraphDataset& ds, std::size_t query, std::size_t candidate,
                 const std::optional<std::string>& target) {
  const auto& qc = ds.graphs.at(query).class_pred();
  const auto& cc = ds.graphs.at(candidate).class_pred();
  return candidate != query && cc != qc && (!target || cc == *target);
}

RankedRetrieval select_counterfactual(const GraphDataset& ds, const Ranking& ranking, std::size_t query,
                                      const std::optional<std::string>& target, const CostModel& costs) {
  if (query >= ds.size()) throw ValidationError("query index out of range");
  const auto& q = ds.graphs[query];
  RankedRetrieval out;
  out.query_id = q.instance_id();
  out.query_class = q.class_pred();
  out.candidates = ranking;
  out.requested_target = target;
  for (const auto& c : ranking) {
    if (!is_eligible(ds, query, c.index, target)) continue;
    const auto& cls = ds.graphs[c.index].class_pred();
    out.counterfactual_index = c.index;
    out.counterfactual_id = ds.graphs[c.index].instance_id();
    out.target_class = cls;
    const auto ged = bipartite_ged(q, ds.graphs[c.index], costs);
    out.ged_value = ged.value;
    out.edit_path = ged.path;
    return out;
  }
  throw ValidationError("no counterfactual in target class" + (target ? " '" + *target + "'" : std::string()) +
                        " for query '" + q.instance_id() + "'");
}

ConfusionMap parse_confusion_map(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("confusion file: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw ValidationError("confusion file must be an object of class -> class");
  ConfusionMap m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw ValidationError("confusion target for '" + k + "' must be a string");
    m[k] = v.get<std::string>();
  }
  return m;
}

std::string confusion_target(const ConfusionMap& confusions, const std::string& query_class) {
  auto it = confusions.find(query_class);
  if (it == confusions.end()) throw ValidationError("class '" + query_class + "' missing from confusion map");
  return it->second;
}

nlohmann::json retrieval_report(const std::string& method, const GraphDataset& ds,
                                const std::vector<RankedRetrieval>& results, std::size_t k) {
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json top = nlohmann::json::array();
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
      const auto& c = r.candidates[i];
      if (i < k) top.push_back({{"id", ds.graphs[c.index].instance_id()}, {"similarity", c.similarity}});
      order.push_back(ds.graphs[c.index].instance_id());
    }
    queries.push_back({{"query_id", r.query_id},
                       {"query_class", r.query_class},
                       {"top_k", std::move(top)},
                       {"ranking", std::move(order)},
                       {"counterfactual_id", r.counterfactual_id},
                       {"target_class", r.target_class},
                       {"requested_target", r.requested_target ? nlohmann::json(*r.requested_target)
                                                               : nlohmann::json(nullptr)},
                       {"ged", r.ged_value},
                       {"edit_path", edit_path_to_json(r.edit_path)}});
  }
  return {{"method", method}, {"k", k}, {"queries", std::move(queries)}};
}

ParsedRetrieval parse_retrieval_report(const nlohmann::json& j, const GraphDataset& ds) {
  ParsedRetrieval out;
  try {
    out.method = j.value("method", "");
    for (const auto& q : j.at("queries")) {
      RankedRetrieval r;
      r.query_id = q.at("query_id").get<std::string>();
      if (ds.index_of(r.query_id) < 0) throw ValidationError("unknown query id '" + r.query_id + "'");
      r.query_class = q.at("query_class").get<std::string>();
      // similarities beyond the top-k are not stored; rank order is what matters downstream
      std::map<std::string, double> sims;
      for (const auto& t : q.at("top_k")) sims[t.at("id").get<std::string>()] = t.at("similarity").get<double>();
      for (const auto& id : q.at("ranking")) {
        const int idx = ds.index_of(id.get<std::string>());
        if (idx < 0) throw ValidationError("unknown candidate id '" + id.get<std::string>() + "'");
        auto it = sims.find(id.get<std::string>());
        r.candidates.push_back({static_cast<std::size_t>(idx), it == sims.end() ? std::nan("") : it->second});
      }
      r.counterfactual_id = q.at("counterfactual_id").get<std::string>();
      const int cf = ds.index_of(r.counterfactual_id);
      if (cf < 0) throw ValidationError("unknown counterfactual id '" + r.counterfactual_id + "'");
      r.counterfactual_index = static_cast<std::size_t>(cf);
      r.target_class = q.at("target_class").get<std::string>();
      if (auto it = q.find("requested_target"); it != q.end() && !it->is_null()) {
        r.requested_target = it->get<std::string>();
      }
      r.ged_value = q.at("ged").get<double>();
      r.edit_path = edit_path_from_json(q.at("edit_path"));
      out.results.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed retrieval report: ") + e.what());
  }
  return out;
}

}  // namespace sgce
