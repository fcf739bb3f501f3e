#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "sgce/embedding.hpp"
#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

namespace {

struct Adam {
  double lr;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Eigen::MatrixXd m1;
  Eigen::MatrixXd m2;
  int step = 0;

  Adam(double learning_rate, Eigen::Index rows, Eigen::Index cols)
      : lr(learning_rate), m1(Eigen::MatrixXd::Zero(rows, cols)), m2(Eigen::MatrixXd::Zero(rows, cols)) {}

  void update(Eigen::MatrixXd& w, const Eigen::MatrixXd& g) {
    ++step;
    m1 = beta1 * m1 + (1.0 - beta1) * g;
    m2 = beta2 * m2 + (1.0 - beta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(beta1, step);
    const double c2 = 1.0 - std::pow(beta2, step);
    w.array() -= lr * (m1.array() / c1) / ((m2.array() / c2).sqrt() + eps);
  }
};

}  // namespace

TrainResult train(const GraphDataset& ds, const GedMatrix& ged, const WordVectorTable& wv, const TrainConfig& cfg) {
  if (!cfg.seed) throw ConfigError("training requires an explicit seed");
  if (cfg.d_out < 1 || cfg.batch_size < 1 || cfg.epochs < 0 || !(cfg.learning_rate > 0.0)) {
    throw ConfigError("invalid training hyperparameters");
  }
  const std::size_t n = ds.size();
  if (n < 2) throw ConfigError("training needs at least two graphs");
  if (ged.size() != n) throw ConfigError("GED matrix size does not match the dataset");
  for (std::size_t i = 0; i < n; ++i) {
    if (ged.ids()[i] != ds.graphs[i].instance_id()) throw ConfigError("GED matrix ids do not match the dataset order");
  }

  std::vector<std::string> warnings;
  const std::size_t total = n * (n - 1) / 2;
  std::size_t p = cfg.pairs.value_or((total + 1) / 2);
  if (p > total) {
    warnings.push_back("requested " + std::to_string(p) + " pairs but only " + std::to_string(total) +
                       " exist; clamped");
    p = total;
  }
  if (p == 0) throw ConfigError("training needs at least one pair");

  Rng rng(*cfg.seed);
  std::vector<std::pair<std::size_t, std::size_t>> all;
  all.reserve(total);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  rng.shuffle(all);

  double scale = 1.0;
  if (cfg.normalize_ged_max) {
    double max_ged = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (auto v = ged.at(i, j)) max_ged = std::max(max_ged, *v);
      }
    }
    if (max_ged > 0.0) scale = max_ged;
  }

  std::vector<PairSample> samples;
  samples.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    const auto [i, j] = all[k];
    samples.push_back({i, j, ged.value(i, j)});
  }

  std::vector<GraphFeatures> features;
  features.reserve(n);
  for (const auto& g : ds.graphs) features.push_back(init_features(g, wv, cfg.reify_edges));

  const int d_in = wv.dimension();
  const double limit = std::sqrt(6.0 / static_cast<double>(d_in + cfg.d_out));
  Eigen::MatrixXd w(d_in, cfg.d_out);
  for (int r = 0; r < d_in; ++r) {
    for (int c = 0; c < cfg.d_out; ++c) w(r, c) = rng.uniform(-limit, limit);
  }
  EmbeddingModel model(std::move(w), cfg.activation, cfg.reify_edges, cfg, scale);
  Adam adam(cfg.learning_rate, d_in, cfg.d_out);

  std::vector<std::size_t> order(samples.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::vector<double> trace;
  Eigen::MatrixXd grad(d_in, cfg.d_out);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      grad.setZero();
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = samples[order[k]];
        LossAndGradient lg;
        try {
          lg = loss_and_gradient(model, features[s.i], features[s.j], s.ged / scale, cfg.loss);
        } catch (const NumericalError& e) {
          throw NumericalError(std::string(e.what()) + " for pair (" + ds.graphs[s.i].instance_id() + ", " +
                               ds.graphs[s.j].instance_id() + ")");
        }
        epoch_loss += lg.loss;
        grad += lg.grad;
      }
      grad /= static_cast<double>(end - start);
      adam.update(model.weight(), grad);
      if (!model.weight().allFinite()) throw NumericalError("training diverged: non-finite weights");
    }
    trace.push_back(epoch_loss / static_cast<double>(samples.size()));
  }
  return {std::move(model), std::move(trace), std::move(samples), std::move(warnings)};
}

std::vector<std::pair<std::size_t, std::size_t>> held_out_pairs(std::size_t n, const std::vector<PairSample>& used) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& s : used) seen.emplace(std::min(s.i, s.j), std::max(s.i, s.j));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!seen.count({i, j})) out.emplace_back(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd embed_all(const EmbeddingModel& m, const GraphDataset& ds, const WordVectorTable& wv,
                          unsigned threads) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ds.size()), m.d_out());
  parallel_for(ds.size(), threads, [&](std::size_t i) { out.row(i) = m.embed(ds.graphs[i], wv).transpose(); });
  return out;
}

namespace {

constexpr char kModelMagic[8] = {'S', 'G', 'C', 'E', 'M', 'D', 'L', '1'};
constexpr char kEmbMagic[8] = {'S', 'G', 'C', 'E', 'E', 'M', 'B', '1'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& file) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ValidationError("truncated file " + file.string());
  return v;
}

std::ifstream open_in(const std::filesystem::path& file, const char (&magic)[8]) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw MissingArtifactError(file.string());
  char got[8];
  if (!in.read(got, sizeof got) || std::memcmp(got, magic, sizeof got) != 0) {
    throw ValidationError("unrecognized file format: " + file.string());
  }
  return in;
}

}  // namespace

void save_model(const std::filesystem::path& file, const EmbeddingModel& m) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + file.string());
  out.write(kModelMagic, sizeof kModelMagic);
  put(out, static_cast<std::uint32_t>(m.d_in()));
  put(out, static_cast<std::uint32_t>(m.d_out()));
  put(out, static_cast<std::uint8_t>(m.activation() == Activation::Relu));
  put(out, static_cast<std::uint8_t>(m.reify_edges()));
  put(out, m.config().seed.value_or(0));
  const auto& w = m.weight();
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) put(out, w(r, c));
  }
  nlohmann::json trailer = to_json(m.config());
  trailer["ged_scale"] = m.ged_scale();
  const std::string text = trailer.dump();
  put(out, static_cast<std::uint64_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

EmbeddingModel load_model(const std::filesystem::path& file) {
  auto in = open_in(file, kModelMagic);
  const auto d_in = get<std::uint32_t>(in, file);
  const auto d_out = get<std::uint32_t>(in, file);
  const auto relu = get<std::uint8_t>(in, file);
  const auto reify = get<std::uint8_t>(in, file);
  get<std::uint64_t>(in, file);  // seed, repeated in the trailer
  if (d_in == 0 || d_out == 0 || d_in > (1U << 16) || d_out > (1U << 16)) {
    throw ValidationError("implausible model dimensions in " + file.string());
  }
  Eigen::MatrixXd w(d_in, d_out);
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = get<double>(in, file);
  }
  const auto len = get<std::uint64_t>(in, file);
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw ValidationError("truncated " + file.string());
  nlohmann::json trailer;
  try {
    trailer = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("model trailer: " + std::string(e.what()), e.byte);
  }
  return EmbeddingModel(std::move(w), relu ? Activation::Relu : Activation::Identity, reify != 0,
                        train_config_from_json(trailer), trailer.value("ged_scale", 1.0));
}

void save_embeddings(const std::filesystem::path& file, const std::vector<std::string>& ids, const Eigen::MatrixXd& e) {
  if (static_cast<Eigen::Index>(ids.size()) != e.rows()) throw ConfigError("embedding ids and rows differ");
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + file.string());
  out.write(kEmbMagic, sizeof kEmbMagic);
  put(out, static_cast<std::uint64_t>(e.rows()));
  put(out, static_cast<std::uint64_t>(e.cols()));
  for (const auto& id : ids) {
    put(out, static_cast<std::uint64_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.cols(); ++c) put(out, e(r, c));
  }
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> load_embeddings(const std::filesystem::path& file) {
  auto in = open_in(file, kEmbMagic);
  const auto rows = get<std::uint64_t>(in, file);
  const auto cols = get<std::uint64_t>(in, file);
  if (rows > (1U << 24) || cols > (1U << 16)) throw ValidationError("implausible embedding shape in " + file.string());
  std::vector<std::string> ids(rows);
  for (auto& id : ids) {
    const auto len = get<std::uint64_t>(in, file);
    if (len > (1U << 20)) throw ValidationError("corrupt id in " + file.string());
    id.resize(len);
    if (!in.read(id.data(), static_cast<std::streamsize>(len))) throw ValidationError("truncated " + file.string());
  }
  Eigen::MatrixXd e(rows, cols);
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.cols(); ++c) e(r, c) = get<double>(in, file);
  }
  return {std::move(ids), std::move(e)};
}

std::string loss_trace_csv(const std::vector<double>& epoch_loss) {
  std::ostringstream out;
  out << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < epoch_loss.size(); ++e) out << (e + 1) << ',' << format_double(epoch_loss[e]) << '\n';
  return out.str();
}

}  // namespace sgce
