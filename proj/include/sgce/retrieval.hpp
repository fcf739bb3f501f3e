#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "sgce/ged.hpp"
#include "sgce/graph.hpp"

namespace sgce {

struct RankedCandidate {
  std::size_t index = 0;
  double similarity = 0.0;
};

using Ranking = std::vector<RankedCandidate>;

enum class Similarity { Cosine, Euclidean };
Similarity similarity_from_string(std::string_view name);

// Every other row scored against the query row, best first; ties break by
// instance id ascending. Cosine against a zero-norm vector scores -1 (a
// warning is appended when `warnings` is given). Euclidean mode scores the
// negated squared distance.
Ranking rank_candidates(const Eigen::MatrixXd& embeddings, std::size_t query, const std::vector<std::string>& ids,
                        Similarity mode = Similarity::Cosine, std::vector<std::string>* warnings = nullptr);

// Ranking from a precomputed score row (larger is better), same tie-break.
Ranking rank_by_scores(const std::vector<double>& scores, std::size_t query, const std::vector<std::string>& ids);

// Ranking by ascending GED (score = -GED). Uncomputed pairs are skipped.
Ranking rank_by_ged(const GedMatrix& ged, std::size_t query);

struct RankedRetrieval {
  std::string query_id;
  std::string query_class;
  Ranking candidates;
  std::string counterfactual_id;
  std::size_t counterfactual_index = 0;
  std::string target_class;
  // Class constraint used for selection; nullopt means "any class but the query's".
  std::optional<std::string> requested_target;
  double ged_value = 0.0;
  EditPath edit_path;
};

// Highest-ranked candidate whose predicted class differs from the query's (or
// equals `target` when given); its GED and edit path come from bipartite_ged.
RankedRetrieval select_counterfactual(const GraphDataset& ds, const Ranking& ranking, std::size_t query,
                                      const std::optional<std::string>& target, const CostModel& costs);

bool is_eligible(const GraphDataset& ds, std::size_t query, std::size_t candidate,
                 const std::optional<std::string>& target);

// Classifier confusion data supplied as {"class": "most confused class"}.
using ConfusionMap = std::map<std::string, std::string>;
ConfusionMap parse_confusion_map(std::string_view json_text);
std::string confusion_target(const ConfusionMap& confusions, const std::string& query_class);

// Retrieval report for a set of queries. Each entry lists the top-k with
// similarities, the full ranking order, the counterfactual, and its path.
nlohmann::json retrieval_report(const std::string& method, const GraphDataset& ds,
                                const std::vector<RankedRetrieval>& results, std::size_t k);

struct ParsedRetrieval {
  std::string method;
  std::vector<RankedRetrieval> results;
};
ParsedRetrieval parse_retrieval_report(const nlohmann::json& j, const GraphDataset& ds);

}  // namespace sgce
