#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "sgce/ged.hpp"
#include "sgce/graph.hpp"

namespace sgce {

// Token -> vector table in the whitespace-separated "token v1 ... vd" format.
// Multi-word labels average their token vectors; tokens missing from the table
// get a pseudo-random unit vector derived from (token, fallback_seed).
class WordVectorTable {
 public:
  WordVectorTable(int dimension, std::uint64_t fallback_seed = 0);

  static WordVectorTable parse(std::string_view text, std::uint64_t fallback_seed = 0);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::uint64_t fallback_seed() const noexcept { return fallback_seed_; }
  bool contains(std::string_view token) const;

  void add(const std::string& token, const Eigen::VectorXd& vector);
  Eigen::VectorXd token_vector(std::string_view token) const;
  Eigen::VectorXd lookup(std::string_view label) const;

  std::uint64_t content_hash() const;

 private:
  int dimension_;
  std::uint64_t fallback_seed_;
  std::unordered_map<std::string, Eigen::VectorXd> entries_;
  std::vector<std::string> order_;
};

enum class Activation { Identity, Relu };
enum class LossKind { Mse, Mae };

std::string_view to_string(Activation a);
std::string_view to_string(LossKind l);
Activation activation_from_string(std::string_view name);
LossKind loss_from_string(std::string_view name);

// Node features of one graph plus its undirected message-passing structure.
struct GraphFeatures {
  Eigen::MatrixXd features;                // rows: nodes, then reified edges
  std::vector<std::vector<int>> neighbors;  // undirected, deduplicated, no self entries
  Eigen::MatrixXd aggregated;              // row i: x_i + sum of neighbour rows
};

GraphFeatures init_features(const SemanticGraph& g, const WordVectorTable& wv, bool reify_edges);

struct TrainConfig {
  double learning_rate = 0.04;
  int batch_size = 32;
  int epochs = 50;
  int d_out = 128;
  std::optional<std::uint64_t> seed;
  // Number of sampled training pairs; default half of all unordered pairs.
  std::optional<std::size_t> pairs;
  Activation activation = Activation::Relu;
  LossKind loss = LossKind::Mse;
  bool reify_edges = false;
  bool normalize_ged_max = false;

  static TrainConfig large_preset() {
    TrainConfig c;
    c.d_out = 2048;
    return c;
  }
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

// One trainable graph-convolution layer u_i = act(W^T (x_i + sum_{j in N(i)} x_j))
// followed by a mean readout over all feature rows.
class EmbeddingModel {
 public:
  EmbeddingModel(Eigen::MatrixXd weight, Activation activation, bool reify_edges, TrainConfig config = {},
                 double ged_scale = 1.0);

  const Eigen::MatrixXd& weight() const noexcept { return weight_; }
  Eigen::MatrixXd& weight() noexcept { return weight_; }
  Activation activation() const noexcept { return activation_; }
  bool reify_edges() const noexcept { return reify_edges_; }
  int d_in() const noexcept { return static_cast<int>(weight_.rows()); }
  int d_out() const noexcept { return static_cast<int>(weight_.cols()); }
  const TrainConfig& config() const noexcept { return config_; }
  // Divisor applied to GED targets during training (1 unless normalized).
  double ged_scale() const noexcept { return ged_scale_; }

  Eigen::VectorXd embed(const GraphFeatures& f) const;
  Eigen::VectorXd embed(const SemanticGraph& g, const WordVectorTable& wv) const;

 private:
  Eigen::MatrixXd weight_;
  Activation activation_;
  bool reify_edges_;
  TrainConfig config_;
  double ged_scale_;
};

struct LossAndGradient {
  double loss = 0.0;
  Eigen::MatrixXd grad;
};

// Pair loss (|h_x - h_y|^2 - ged)^2 (or its absolute value for MAE) and its
// gradient with respect to the shared weight through both branches.
LossAndGradient loss_and_gradient(const EmbeddingModel& m, const GraphFeatures& x, const GraphFeatures& y,
                                  double ged, LossKind loss = LossKind::Mse);

struct PairSample {
  std::size_t i = 0;
  std::size_t j = 0;
  double ged = 0.0;
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> epoch_loss;  // mean pair loss per epoch
  std::vector<PairSample> samples;
  std::vector<std::string> warnings;
};

// Uniformly samples pairs without replacement, initializes W with Xavier
// uniform from the seed, and runs Adam over shuffled mini-batches.
TrainResult train(const GraphDataset& ds, const GedMatrix& ged, const WordVectorTable& wv, const TrainConfig& cfg);

// Pairs i < j not used in training, in row-major order.
std::vector<std::pair<std::size_t, std::size_t>> held_out_pairs(std::size_t n, const std::vector<PairSample>& used);

Eigen::MatrixXd embed_all(const EmbeddingModel& m, const GraphDataset& ds, const WordVectorTable& wv,
                          unsigned threads = 1);

// Binary model: magic, d_in, d_out, activation, reify flag, seed, row-major W,
// then a length-prefixed JSON trailer with the training configuration.
void save_model(const std::filesystem::path& file, const EmbeddingModel& m);
EmbeddingModel load_model(const std::filesystem::path& file);

// Binary embedding matrix with instance ids.
void save_embeddings(const std::filesystem::path& file, const std::vector<std::string>& ids, const Eigen::MatrixXd& e);
std::pair<std::vector<std::string>, Eigen::MatrixXd> load_embeddings(const std::filesystem::path& file);

std::string loss_trace_csv(const std::vector<double>& epoch_loss);

}  // namespace sgce
