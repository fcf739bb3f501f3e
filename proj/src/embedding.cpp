#include "sgce/embedding.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

WordVectorTable::WordVectorTable(int dimension, std::uint64_t fallback_seed)
    : dimension_(dimension), fallback_seed_(fallback_seed) {
  if (dimension < 1) throw ConfigError("word vector dimension must be positive");
}

WordVectorTable WordVectorTable::parse(std::string_view text, std::uint64_t fallback_seed) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<WordVectorTable> table;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string item;
    while (fields >> item) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("word vectors line " + std::to_string(line_no) + ": bad number '" + item + "'");
      }
    }
    // word2vec-style "<count> <dim>" header
    if (line_no == 1 && values.size() == 1 && token.find_first_not_of("0123456789") == std::string::npos) continue;
    if (values.empty()) throw ValidationError("word vectors line " + std::to_string(line_no) + ": no values");
    if (!table) table.emplace(static_cast<int>(values.size()), fallback_seed);
    if (static_cast<int>(values.size()) != table->dimension()) {
      throw ValidationError("word vectors line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table->dimension()) + " values, got " + std::to_string(values.size()));
    }
    table->add(token, Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (!table) throw ValidationError("word vectors: no entries");
  return std::move(*table);
}

bool WordVectorTable::contains(std::string_view token) const {
  return entries_.count(normalize_label(token)) > 0;
}

void WordVectorTable::add(const std::string& token, const Eigen::VectorXd& vector) {
  if (vector.size() != dimension_) throw ConfigError("word vector has the wrong dimension");
  const std::string key = normalize_label(token);
  if (entries_.insert_or_assign(key, vector).second) order_.push_back(key);
}

Eigen::VectorXd WordVectorTable::token_vector(std::string_view token) const {
  const std::string key = normalize_label(token);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  Fnv1a h;
  h.add(key).add(fallback_seed_);
  Rng rng(h.digest());
  Eigen::VectorXd v(dimension_);
  for (int i = 0; i < dimension_; ++i) v[i] = rng.normal();
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : v;
}

Eigen::VectorXd WordVectorTable::lookup(std::string_view label) const {
  const auto tokens = split_tokens(normalize_label(label));
  if (tokens.empty()) return token_vector("");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dimension_);
  for (const auto& t : tokens) sum += token_vector(t);
  return sum / static_cast<double>(tokens.size());
}

std::uint64_t WordVectorTable::content_hash() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(dimension_)).add(fallback_seed_);
  for (const auto& key : order_) {
    h.add(key);
    const auto& v = entries_.at(key);
    for (Eigen::Index i = 0; i < v.size(); ++i) h.add(v[i]);
  }
  return h.digest();
}

std::string_view to_string(Activation a) { return a == Activation::Identity ? "identity" : "relu"; }
std::string_view to_string(LossKind l) { return l == LossKind::Mse ? "mse" : "mae"; }

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu" || name == "rectifier") return Activation::Relu;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

LossKind loss_from_string(std::string_view name) {
  if (name == "mse") return LossKind::Mse;
  if (name == "mae") return LossKind::Mae;
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

GraphFeatures init_features(const SemanticGraph& g, const WordVectorTable& wv, bool reify_edges) {
  const std::size_t n = g.node_count();
  const std::size_t rows = n + (reify_edges ? g.edge_count() : 0);
  GraphFeatures f;
  f.features.resize(static_cast<Eigen::Index>(rows), wv.dimension());
  for (std::size_t i = 0; i < n; ++i) f.features.row(i) = wv.lookup(g.nodes()[i].label).transpose();
  std::vector<std::set<int>> links(rows);
  auto link = [&](int a, int b) {
    if (a == b) return;
    links[a].insert(b);
    links[b].insert(a);
  };
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    const int s = g.index_of(e.src);
    const int d = g.index_of(e.dst);
    if (reify_edges) {
      const int r = static_cast<int>(n + k);
      f.features.row(r) = wv.lookup(e.label).transpose();
      link(s, r);
      link(r, d);
    } else {
      link(s, d);
    }
  }
  f.neighbors.resize(rows);
  f.aggregated = f.features;
  for (std::size_t i = 0; i < rows; ++i) {
    f.neighbors[i].assign(links[i].begin(), links[i].end());
    for (int j : f.neighbors[i]) f.aggregated.row(i) += f.features.row(j);
  }
  return f;
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["d_out"] = c.d_out;
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  j["pairs"] = c.pairs ? nlohmann::json(*c.pairs) : nlohmann::json(nullptr);
  j["activation"] = to_string(c.activation);
  j["loss"] = to_string(c.loss);
  j["reify_edges"] = c.reify_edges;
  j["normalize_ged"] = c.normalize_ged_max ? "max" : "none";
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.d_out = j.at("d_out").get<int>();
    if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("pairs").is_null()) c.pairs = j.at("pairs").get<std::size_t>();
    c.activation = activation_from_string(j.at("activation").get<std::string>());
    c.loss = loss_from_string(j.at("loss").get<std::string>());
    c.reify_edges = j.at("reify_edges").get<bool>();
    c.normalize_ged_max = j.at("normalize_ged").get<std::string>() == "max";
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed training config: ") + e.what());
  }
  return c;
}

EmbeddingModel::EmbeddingModel(Eigen::MatrixXd weight, Activation activation, bool reify_edges, TrainConfig config,
                               double ged_scale)
    : weight_(std::move(weight)),
      activation_(activation),
      reify_edges_(reify_edges),
      config_(std::move(config)),
      ged_scale_(ged_scale) {
  if (weight_.cols() < 1 || weight_.rows() < 1) throw ConfigError("embedding weight must be non-empty");
  if (!weight_.allFinite()) throw NumericalError("embedding weight has non-finite entries");
}

namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& pre, Activation a) {
  return a == Activation::Relu ? Eigen::MatrixXd(pre.cwiseMax(0.0)) : pre;
}

void check_dims(const EmbeddingModel& m, const GraphFeatures& f) {
  if (f.aggregated.cols() != m.d_in()) {
    throw ConfigError("feature dimension " + std::to_string(f.aggregated.cols()) + " does not match model input " +
                      std::to_string(m.d_in()));
  }
}

}  // namespace

Eigen::VectorXd EmbeddingModel::embed(const GraphFeatures& f) const {
  check_dims(*this, f);
  if (f.aggregated.rows() == 0) return Eigen::VectorXd::Zero(d_out());
  if (activation_ == Activation::Identity) return (f.aggregated.colwise().mean() * weight_).transpose();
  return activate(f.aggregated * weight_, activation_).colwise().mean().transpose();
}

Eigen::VectorXd EmbeddingModel::embed(const SemanticGraph& g, const WordVectorTable& wv) const {
  if (wv.dimension() != d_in()) {
    throw ConfigError("word vector dimension " + std::to_string(wv.dimension()) + " does not match model input " +
                      std::to_string(d_in()));
  }
  return embed(init_features(g, wv, reify_edges_));
}

namespace {

// Adds dl/dW for one branch given dl/dh.
void accumulate_branch(const EmbeddingModel& m, const GraphFeatures& f, const Eigen::RowVectorXd& grad_h,
                       Eigen::MatrixXd& grad) {
  const auto rows = f.aggregated.rows();
  if (rows == 0) return;
  const double inv_n = 1.0 / static_cast<double>(rows);
  if (m.activation() == Activation::Identity) {
    grad.noalias() += f.aggregated.colwise().sum().transpose() * (grad_h * inv_n);
    return;
  }
  const Eigen::MatrixXd pre = f.aggregated * m.weight();
  Eigen::MatrixXd grad_pre = (pre.array() > 0.0).cast<double>().matrix();
  grad_pre.array().rowwise() *= (grad_h * inv_n).array();
  grad.noalias() += f.aggregated.transpose() * grad_pre;
}

}  // namespace

LossAndGradient loss_and_gradient(const EmbeddingModel& m, const GraphFeatures& x, const GraphFeatures& y,
                                  double ged, LossKind loss) {
  const Eigen::VectorXd hx = m.embed(x);
  const Eigen::VectorXd hy = m.embed(y);
  const Eigen::VectorXd diff = hx - hy;
  const double residual = diff.squaredNorm() - ged;
  LossAndGradient out;
  double dl_dd;
  if (loss == LossKind::Mse) {
    out.loss = residual * residual;
    dl_dd = 2.0 * residual;
  } else {
    out.loss = std::abs(residual);
    dl_dd = residual > 0.0 ? 1.0 : (residual < 0.0 ? -1.0 : 0.0);
  }
  if (!std::isfinite(out.loss)) throw NumericalError("non-finite loss");
  const Eigen::RowVectorXd grad_hx = (2.0 * dl_dd) * diff.transpose();
  out.grad = Eigen::MatrixXd::Zero(m.d_in(), m.d_out());
  accumulate_branch(m, x, grad_hx, out.grad);
  accumulate_branch(m, y, -grad_hx, out.grad);
  if (!out.grad.allFinite()) throw NumericalError("non-finite gradient");
  return out;
}

}  // namespace sgce
