#pragma once

// Fixtures and independent oracles shared by the unit and acceptance suites.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sgce/embedding.hpp"
#include "sgce/graph.hpp"
#include "sgce/taxonomy.hpp"
#include "sgce/util.hpp"

namespace sgce::testing {

SemanticGraph make_graph(const std::string& id, const std::string& cls, const std::vector<std::string>& labels,
                         const std::vector<std::tuple<int, int, std::string>>& edges = {});

// root -> animal -> bird ; root -> animal -> mammal -> dog
std::shared_ptr<const Taxonomy> five_node_taxonomy();

// Ten concepts in a three-level tree.
std::shared_ptr<const Taxonomy> ten_concept_taxonomy();

// Random graph with 1..max_nodes nodes and at most max_edges edges, no two
// edges sharing an ordered endpoint pair.
SemanticGraph random_graph(Rng& rng, const std::string& id, const std::vector<std::string>& labels,
                           int max_nodes, int max_edges);

// Minimum cost over every injective partial node mapping, evaluated directly
// from the operation definitions. Requires unique (src, dst) pairs per graph.
double brute_force_ged(const SemanticGraph& a, const SemanticGraph& b, const CostModel& costs);

// All-pairs shortest paths on the undirected concept graph.
std::vector<std::vector<double>> floyd_warshall(const Taxonomy& t);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// |G_a - G_n|_F / max(|G_a|_F, |G_n|_F) between loss_and_gradient's analytic
// gradient and central differences of the loss with the given step.
double gradient_relative_error(const EmbeddingModel& m, const GraphFeatures& x, const GraphFeatures& y, double ged,
                               LossKind loss, double step);

}  // namespace sgce::testing
