#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgce/error.hpp"
#include "sgce/ged.hpp"
#include "sgce/retrieval.hpp"

namespace sgce {

namespace detail {
inline void check_k(std::size_t k, std::size_t gt_size, std::size_t pred_size) {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (k > gt_size || k > pred_size) throw ValidationError("k exceeds the ranking length");
}
}  // namespace detail

// |top-k(pred) ∩ top-k(gt)| / k
template <typename T>
double avg_precision_at_k(const std::vector<T>& gt, const std::vector<T>& pred, std::size_t k) {
  detail::check_k(k, gt.size(), pred.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::find(gt.begin(), gt.begin() + k, pred[i]) != gt.begin() + k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

// 1 when the ground-truth best item appears in pred's top k.
template <typename T>
double binary_precision_at_k(const std::vector<T>& gt, const std::vector<T>& pred, std::size_t k) {
  detail::check_k(k, gt.size(), pred.size());
  return std::find(pred.begin(), pred.begin() + k, gt.front()) != pred.begin() + k ? 1.0 : 0.0;
}

// 1 / log2(1 + position) of the ground-truth best item within pred's top k.
template <typename T>
double binary_ndcg_at_k(const std::vector<T>& gt, const std::vector<T>& pred, std::size_t k) {
  detail::check_k(k, gt.size(), pred.size());
  const auto it = std::find(pred.begin(), pred.begin() + k, gt.front());
  if (it == pred.begin() + k) return 0.0;
  const double position = static_cast<double>(it - pred.begin()) + 1.0;
  return 1.0 / std::log2(1.0 + position);
}

// Candidate indices of `ranking` that satisfy the class constraint, in order.
std::vector<std::size_t> eligible_order(const GraphDataset& ds, const Ranking& ranking, std::size_t query,
                                        const std::optional<std::string>& target);

// Ground-truth ranking for a query: eligible candidates by ascending GED.
std::vector<std::size_t> ground_truth_order(const GraphDataset& ds, const GedMatrix& ged, std::size_t query,
                                            const std::optional<std::string>& target);

struct EditStatistics {
  double avg_node_edits = 0.0;
  double avg_edge_edits = 0.0;
  double avg_total_edits = 0.0;
  double avg_top1_ged = 0.0;
};

// Paths are recomputed with bipartite_ged so every method is scored the same way.
EditStatistics edit_statistics(const std::vector<RankedRetrieval>& results, const GraphDataset& ds,
                               const CostModel& costs);

struct EvalReport {
  std::map<std::size_t, double> avg_precision_at_k;
  std::map<std::size_t, double> binary_precision_at_k;
  std::map<std::size_t, double> binary_ndcg_at_k;
  EditStatistics edits;
  std::size_t num_queries = 0;
};

// Ranking metrics of each retrieval result against GED ground truth under the
// same class constraint, plus edit statistics.
EvalReport evaluate(const std::vector<RankedRetrieval>& results, const GraphDataset& ds, const GedMatrix& ged,
                    const CostModel& costs, const std::vector<std::size_t>& ks);

nlohmann::json to_json(const EvalReport& r);
std::string to_markdown(const EvalReport& r, const std::string& method);

struct GlobalEdits {
  std::string from_class;
  std::string to_class;
  std::size_t num_results = 0;
  // (edit kind, item) -> count / max count
  std::map<std::pair<std::string, std::string>, double> triples;
  std::map<std::pair<std::string, std::string>, double> concepts;
  std::map<std::pair<std::string, std::string>, double> relations;
};

// Counts nonzero-cost edits over all results of one class transition and
// normalizes each table by its largest count.
GlobalEdits aggregate_global_edits(const std::vector<RankedRetrieval>& results, const GraphDataset& ds);

nlohmann::json to_json(const GlobalEdits& g);
// Rows "category,kind,item,normalized_count", highest counts first.
std::string global_edits_csv(const GlobalEdits& g);

}  // namespace sgce
