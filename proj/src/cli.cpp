#include "sgce/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgce/embedding.hpp"
#include "sgce/error.hpp"
#include "sgce/ged.hpp"
#include "sgce/ged_io.hpp"
#include "sgce/graph.hpp"
#include "sgce/kernel.hpp"
#include "sgce/metrics.hpp"
#include "sgce/retrieval.hpp"
#include "sgce/synthetic.hpp"
#include "sgce/taxonomy.hpp"
#include "sgce/util.hpp"

namespace fs = std::filesystem;

namespace sgce {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError(path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

void require(const fs::path& path) {
  if (!fs::exists(path)) throw MissingArtifactError(path.string());
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Options {
  std::string out_dir;
  std::string dataset;
  std::string taxonomy;
  std::string relation_taxonomy;
  std::string vectors;
  std::optional<double> node_indel;
  std::optional<double> edge_indel;
  std::optional<double> unknown_cost;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;

  // train
  std::optional<double> lr;
  std::optional<int> batch;
  std::optional<int> epochs;
  std::optional<int> d_out;
  std::optional<std::size_t> pairs;
  std::string activation = "relu";
  std::string loss = "mse";
  std::string normalize_ged = "none";
  bool reify_edges = false;
  bool large_preset = false;

  // retrieval / eval
  std::string method = "gnn";
  std::string similarity = "cosine";
  std::size_t k = 5;
  std::string target_class;
  std::string confusion_file;
  std::string query;
  std::string counterfactual;
  std::string report;
  std::vector<std::size_t> ks{1, 2, 4};
  std::string from_class;
  std::string to_class;

  // ged / kernel / synth / star
  bool exact = false;
  std::size_t exact_max_nodes = 8;
  int kernel_d = 6;
  int kernel_levels = 4;
  bool kernel_no_labels = false;
  std::string records;
};

class Session {
 public:
  Session(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  fs::path out_path(const std::string& name) const { return fs::path(o_.out_dir) / name; }

  void timing(const std::string& command, const std::string& phase, double seconds) const {
    const auto path = out_path("timings.csv");
    fs::create_directories(path.parent_path());
    const bool fresh = !fs::exists(path);
    std::ofstream f(path, std::ios::app);
    if (fresh) f << "command,phase,seconds\n";
    f << command << ',' << phase << ',' << format_double(seconds) << '\n';
  }

  const GraphDataset& dataset() {
    if (!dataset_) {
      if (o_.dataset.empty()) throw ConfigError("--dataset is required");
      const auto text = read_file(o_.dataset);
      dataset_ = parse_dataset(text);
      dataset_->validate();
      dataset_hash_ = Fnv1a().add(serialize_dataset(*dataset_)).digest();
    }
    return *dataset_;
  }

  std::uint64_t dataset_hash() {
    dataset();
    return dataset_hash_;
  }

  const CostModel& costs() {
    if (!costs_) {
      if (o_.taxonomy.empty()) throw ConfigError("--taxonomy is required");
      auto nodes = std::make_shared<const Taxonomy>(load_taxonomy(read_file(o_.taxonomy)));
      std::shared_ptr<const Taxonomy> rels;
      if (!o_.relation_taxonomy.empty()) {
        rels = std::make_shared<const Taxonomy>(load_taxonomy(read_file(o_.relation_taxonomy)));
      }
      CostModel::Options opts;
      opts.node_indel = o_.node_indel;
      if (o_.edge_indel) opts.edge_indel = *o_.edge_indel;
      opts.unknown_cost = o_.unknown_cost;
      costs_ = std::make_unique<CostModel>(std::move(nodes), std::move(rels), opts);
    }
    return *costs_;
  }

  const WordVectorTable& vectors() {
    if (!vectors_) {
      if (o_.vectors.empty()) throw ConfigError("--vectors is required");
      vectors_ = std::make_unique<WordVectorTable>(WordVectorTable::parse(read_file(o_.vectors)));
    }
    return *vectors_;
  }

  // GED matrix written by the `ged` command, checked against the dataset.
  GedMatrix ged() {
    const auto path = out_path("ged.csv");
    auto m = ged_matrix_from_csv(read_file(path));
    check_ids(m.ids(), path.string());
    return m;
  }

  std::vector<std::string> ids() {
    std::vector<std::string> out;
    for (const auto& g : dataset().graphs) out.push_back(g.instance_id());
    return out;
  }

  void check_ids(const std::vector<std::string>& found, const std::string& what) {
    if (found != ids()) throw InconsistencyError(what + " does not match the dataset's instance ids");
  }

  std::vector<std::size_t> queries() {
    const auto& ds = dataset();
    if (o_.query.empty()) {
      std::vector<std::size_t> all(ds.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return all;
    }
    const int q = ds.index_of(o_.query);
    if (q < 0) throw ValidationError("unknown query id '" + o_.query + "'");
    return {static_cast<std::size_t>(q)};
  }

  std::optional<std::string> target_for(std::size_t q, const ConfusionMap* confusion) {
    if (!o_.target_class.empty()) return o_.target_class;
    if (confusion) return confusion_target(*confusion, dataset().graphs[q].class_pred());
    return std::nullopt;
  }

  void print(const nlohmann::json& j) const { out_ << j.dump(2) << '\n'; }

 private:
  const Options& o_;
  std::ostream& out_;
  std::optional<GraphDataset> dataset_;
  std::uint64_t dataset_hash_ = 0;
  std::unique_ptr<CostModel> costs_;
  std::unique_ptr<WordVectorTable> vectors_;
};

std::uint64_t ged_key(Session& s, bool exact, std::size_t max_nodes) {
  return Fnv1a()
      .add(s.dataset_hash())
      .add(s.costs().content_hash())
      .add(std::string_view(exact ? "exact" : "bipartite"))
      .add(static_cast<std::uint64_t>(max_nodes))
      .digest();
}

void cmd_validate(const Options& o, Session& s) {
  const auto& ds = s.dataset();
  nlohmann::json summary{{"name", ds.name}, {"graphs", ds.size()}};
  std::size_t nodes = 0, edges = 0;
  std::map<std::string, std::size_t> classes;
  for (const auto& g : ds.graphs) {
    nodes += g.node_count();
    edges += g.edge_count();
    ++classes[g.class_pred()];
  }
  summary["nodes"] = nodes;
  summary["edges"] = edges;
  summary["classes"] = classes;
  if (!o.taxonomy.empty()) {
    std::set<std::string> unknown;
    for (const auto& g : ds.graphs)
      for (const auto& n : g.nodes())
        if (!s.costs().node_taxonomy().contains(n.label)) unknown.insert(n.label);
    summary["unknown_concepts"] = unknown;
  }
  summary["valid"] = true;
  s.print(summary);
}

void cmd_ged(const Options& o, Session& s) {
  const auto& ds = s.dataset();
  const auto& costs = s.costs();
  const auto key = ged_key(s, o.exact, o.exact_max_nodes);
  const auto cache = s.out_path("ged.bin");
  Stopwatch clock;
  auto cached = read_ged_cache(cache, key);
  GedMatrix m;
  if (cached) {
    m = std::move(*cached);
  } else if (o.exact) {
    m = GedMatrix(s.ids());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i + 1; j < ds.size(); ++j) pairs.emplace_back(i, j);
    std::vector<double> values(pairs.size());
    ExactLimits limits;
    limits.max_nodes = o.exact_max_nodes;
    parallel_for(pairs.size(), o.threads, [&](std::size_t p) {
      values[p] = exact_ged(ds.graphs[pairs[p].first], ds.graphs[pairs[p].second], costs, limits).value;
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) m.set(pairs[p].first, pairs[p].second, values[p]);
  } else {
    m = ged_matrix(ds, costs, std::nullopt, o.threads);
  }
  const double seconds = clock.seconds();
  if (!cached) write_ged_cache(cache, m, key);
  write_file(s.out_path("ged.csv"), ged_matrix_to_csv(m));
  s.timing("ged", cached ? "ged_cached" : "ged", seconds);
  s.print({{"ged_csv", s.out_path("ged.csv").string()}, {"cached", cached.has_value()}, {"graphs", ds.size()}});
}

void cmd_train(const Options& o, Session& s) {
  if (!o.seed) throw ConfigError("--seed is required for train");
  TrainConfig cfg = o.large_preset ? TrainConfig::large_preset() : TrainConfig{};
  if (o.lr) cfg.learning_rate = *o.lr;
  if (o.batch) cfg.batch_size = *o.batch;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.d_out) cfg.d_out = *o.d_out;
  cfg.pairs = o.pairs;
  cfg.seed = o.seed;
  cfg.activation = activation_from_string(o.activation);
  cfg.loss = loss_from_string(o.loss);
  cfg.reify_edges = o.reify_edges;
  if (o.normalize_ged == "max") {
    cfg.normalize_ged_max = true;
  } else if (o.normalize_ged != "none") {
    throw ConfigError("--normalize-ged must be 'none' or 'max'");
  }
  const auto ged = s.ged();
  const auto& ds = s.dataset();
  const auto& wv = s.vectors();
  Stopwatch clock;
  auto result = train(ds, ged, wv, cfg);
  s.timing("train", "train", clock.seconds());
  save_model(s.out_path("model.bin"), result.model);
  write_file(s.out_path("loss.csv"), loss_trace_csv(result.epoch_loss));
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& p : result.samples) samples.push_back({ds.graphs[p.i].instance_id(), ds.graphs[p.j].instance_id()});
  write_file(s.out_path("train_pairs.json"), samples.dump() + "\n");
  s.print({{"model", s.out_path("model.bin").string()},
           {"pairs", result.samples.size()},
           {"first_epoch_loss", result.epoch_loss.front()},
           {"final_epoch_loss", result.epoch_loss.back()},
           {"warnings", result.warnings}});
}

void cmd_embed(const Options& o, Session& s) {
  const auto model_path = s.out_path("model.bin");
  require(model_path);
  const auto& ds = s.dataset();
  const auto& wv = s.vectors();
  const auto model_bytes = read_file(model_path);
  const auto key = Fnv1a().add(s.dataset_hash()).add(model_bytes).add(wv.content_hash()).hex();
  const auto emb_path = s.out_path("embeddings.bin");
  const auto key_path = s.out_path("embeddings.key");
  if (fs::exists(emb_path) && fs::exists(key_path) && read_file(key_path) == key + "\n") {
    s.timing("embed", "inference_cached", 0.0);
    s.print({{"embeddings", emb_path.string()}, {"cached", true}});
    return;
  }
  const auto model = load_model(model_path);
  Stopwatch clock;
  const auto e = embed_all(model, ds, wv, o.threads);
  const double seconds = clock.seconds();
  save_embeddings(emb_path, s.ids(), e);
  write_file(key_path, key + "\n");
  s.timing("embed", "inference_per_graph", seconds / static_cast<double>(ds.size()));
  s.print({{"embeddings", emb_path.string()}, {"cached", false}, {"dimension", e.cols()}});
}

std::vector<RankedRetrieval> select_all(Session& s, const Options& o, const std::vector<Ranking>& rankings,
                                        const std::vector<std::size_t>& queries) {
  std::optional<ConfusionMap> confusion;
  if (!o.confusion_file.empty()) confusion = parse_confusion_map(read_file(o.confusion_file));
  std::vector<RankedRetrieval> out;
  for (std::size_t n = 0; n < queries.size(); ++n) {
    const auto q = queries[n];
    out.push_back(
        select_counterfactual(s.dataset(), rankings[n], q, s.target_for(q, confusion ? &*confusion : nullptr), s.costs()));
  }
  return out;
}

void write_report(Session& s, const std::string& method, const nlohmann::json& report) {
  const auto path = s.out_path("retrieval_" + method + ".json");
  write_file(path, report.dump(1) + "\n");
  s.print({{"report", path.string()}, {"queries", report["queries"].size()}});
}

void cmd_retrieve(const Options& o, Session& s) {
  const auto& ds = s.dataset();
  s.costs();
  const auto queries = s.queries();
  std::vector<Ranking> rankings;
  std::vector<std::string> warnings;
  Stopwatch clock;
  if (o.method == "gnn") {
    const auto path = s.out_path("embeddings.bin");
    auto [ids, e] = load_embeddings(path);
    s.check_ids(ids, path.string());
    const auto mode = similarity_from_string(o.similarity);
    clock = Stopwatch();
    for (auto q : queries) rankings.push_back(rank_candidates(e, q, ids, mode, &warnings));
  } else if (o.method == "ged") {
    const auto ged = s.ged();
    clock = Stopwatch();
    for (auto q : queries) rankings.push_back(rank_by_ged(ged, q));
  } else {
    throw ConfigError("--method must be 'gnn' or 'ged'");
  }
  const double rank_seconds = clock.seconds();
  const auto results = select_all(s, o, rankings, queries);
  s.timing("retrieve", o.method + "_retrieval_per_query", rank_seconds / static_cast<double>(queries.size()));
  auto report = retrieval_report(o.method, ds, results, o.k);
  if (!warnings.empty()) report["warnings"] = warnings;
  write_report(s, o.method, report);
}

void cmd_kernel(const Options& o, Session& s) {
  const auto& ds = s.dataset();
  s.costs();
  PyramidConfig cfg;
  cfg.d = o.kernel_d;
  cfg.L = o.kernel_levels;
  cfg.use_labels = !o.kernel_no_labels;
  cfg.validate();
  Stopwatch clock;
  const auto gram = pyramid_gram(ds, cfg, o.threads);
  s.timing("kernel", "gram", clock.seconds());
  std::ostringstream csv;
  csv << "id";
  for (const auto& g : ds.graphs) csv << ',' << g.instance_id();
  csv << '\n';
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    csv << ds.graphs[i].instance_id();
    for (Eigen::Index j = 0; j < gram.cols(); ++j) csv << ',' << format_double(gram(i, j));
    csv << '\n';
  }
  write_file(s.out_path("gram.csv"), csv.str());
  const auto all = kernel_rank(ds, gram);
  const auto queries = s.queries();
  std::vector<Ranking> rankings;
  for (auto q : queries) rankings.push_back(all[q]);
  write_report(s, "kernel", retrieval_report("kernel", ds, select_all(s, o, rankings, queries), o.k));
}

ParsedRetrieval load_report(const Options& o, Session& s) {
  if (o.report.empty()) throw ConfigError("--report is required");
  const auto text = read_file(o.report);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("retrieval report: ") + e.what(), e.byte);
  }
  return parse_retrieval_report(j, s.dataset());
}

void cmd_explain(const Options& o, Session& s) {
  const auto& ds = s.dataset();
  if (o.query.empty()) throw ConfigError("--query is required for explain");
  const int q = ds.index_of(o.query);
  if (q < 0) throw ValidationError("unknown query id '" + o.query + "'");
  std::string cf = o.counterfactual;
  if (cf.empty()) {
    const auto parsed = load_report(o, s);
    for (const auto& r : parsed.results)
      if (r.query_id == o.query) cf = r.counterfactual_id;
    if (cf.empty()) throw ValidationError("query '" + o.query + "' is not in the report");
  }
  const int c = ds.index_of(cf);
  if (c < 0) throw ValidationError("unknown counterfactual id '" + cf + "'");
  const auto r = bipartite_ged(ds.graphs[q], ds.graphs[c], s.costs());
  const auto stem = "explain_" + o.query + "_" + cf;
  write_file(s.out_path(stem + ".json"), edit_path_to_json(r.path).dump(1) + "\n");
  write_file(s.out_path(stem + ".dot"), edit_path_to_dot(r.path));
  s.print({{"query", o.query},
           {"counterfactual", cf},
           {"ged", r.value},
           {"node_edits", r.path.node_edits},
           {"edge_edits", r.path.edge_edits},
           {"dot", s.out_path(stem + ".dot").string()}});
}

void cmd_eval(const Options& o, Session& s) {
  const auto parsed = load_report(o, s);
  const auto ged = s.ged();
  const auto report = evaluate(parsed.results, s.dataset(), ged, s.costs(), o.ks);
  const auto stem = "eval_" + parsed.method;
  write_file(s.out_path(stem + ".json"), to_json(report).dump(1) + "\n");
  write_file(s.out_path(stem + ".md"), to_markdown(report, parsed.method));
  s.print(to_json(report));
}

void cmd_aggregate(const Options& o, Session& s) {
  const auto parsed = load_report(o, s);
  if (o.from_class.empty() || o.to_class.empty()) throw ConfigError("--from and --to are required");
  const auto& from = o.from_class;
  const auto& to = o.to_class;
  std::vector<RankedRetrieval> filtered;
  for (const auto& r : parsed.results)
    if (r.query_class == from && r.target_class == to) filtered.push_back(r);
  const auto g = aggregate_global_edits(filtered, s.dataset());
  const auto stem = "global_" + parsed.method + "_" + from + "_" + to;
  write_file(s.out_path(stem + ".json"), to_json(g).dump(1) + "\n");
  write_file(s.out_path(stem + ".csv"), global_edits_csv(g));
  s.print({{"json", s.out_path(stem + ".json").string()}, {"results", g.num_results}});
}

void cmd_synth(const Options& o, Session& s) {
  SyntheticConfig cfg;
  if (o.seed) cfg.seed = *o.seed;
  const auto corpus = make_synthetic_corpus(cfg);
  write_file(s.out_path("dataset.json"), serialize_dataset(corpus.dataset));
  write_file(s.out_path("taxonomy.tsv"), corpus.taxonomy_text);
  write_file(s.out_path("vectors.txt"), corpus.vectors_text);
  s.print({{"dataset", s.out_path("dataset.json").string()}, {"graphs", corpus.dataset.size()}});
}

void cmd_star(const Options& o, Session& s) {
  if (o.records.empty()) throw ConfigError("--records is required");
  GraphDataset ds;
  ds.name = "star";
  for (const auto& in : parse_attribute_records(read_file(o.records))) {
    ds.graphs.push_back(build_star_graph(in.record, in.id, in.class_pred));
  }
  ds.validate();
  write_file(s.out_path("dataset.json"), serialize_dataset(ds));
  s.print({{"dataset", s.out_path("dataset.json").string()}, {"graphs", ds.size()}});
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  const char* env_out = std::getenv("SGCE_OUT");
  o.out_dir = env_out && *env_out ? env_out : "sgce_out";

  CLI::App app{"Semantic-graph counterfactual explanations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out_dir, "Output directory (default $SGCE_OUT or ./sgce_out)");
    c->add_option("--threads", o.threads, "Worker threads; 1 is bitwise deterministic")->check(CLI::PositiveNumber);
  };
  auto data = [&](CLI::App* c) { c->add_option("--dataset", o.dataset, "Dataset JSON")->required(); };
  auto costs = [&](CLI::App* c, bool required) {
    auto* t = c->add_option("--taxonomy", o.taxonomy, "Concept taxonomy file");
    if (required) t->required();
    c->add_option("--relation-taxonomy", o.relation_taxonomy, "Relation taxonomy file");
    c->add_option("--node-indel", o.node_indel, "Node insertion/deletion cost");
    c->add_option("--edge-indel", o.edge_indel, "Edge insertion/deletion cost");
    c->add_option("--unknown-cost", o.unknown_cost, "Substitution cost for concepts outside the taxonomy");
  };
  auto selection = [&](CLI::App* c) {
    c->add_option("--k", o.k, "Top-k entries listed per query")->check(CLI::PositiveNumber);
    c->add_option("--target-class", o.target_class, "Only retrieve counterfactuals of this class");
    c->add_option("--confusion-file", o.confusion_file, "JSON map class -> most confused class");
    c->add_option("--query", o.query, "Single query instance id (default: all)");
  };

  std::function<void(Session&)> action;
  auto bind = [&](CLI::App* c, void (*fn)(const Options&, Session&)) {
    c->callback([&action, &o, fn] { action = [&o, fn](Session& s) { fn(o, s); }; });
  };

  auto* validate = app.add_subcommand("validate", "Parse and validate a dataset");
  common(validate);
  data(validate);
  costs(validate, false);
  bind(validate, cmd_validate);

  auto* ged = app.add_subcommand("ged", "Pairwise GED matrix (ged.csv, ged.bin cache)");
  common(ged);
  data(ged);
  costs(ged, true);
  ged->add_flag("--exact", o.exact, "Exact A* GED instead of the bipartite approximation");
  ged->add_option("--exact-max-nodes", o.exact_max_nodes, "Node limit for exact GED");
  bind(ged, cmd_ged);

  auto* tr = app.add_subcommand("train", "Train the graph embedding model on GED targets");
  common(tr);
  data(tr);
  tr->add_option("--vectors", o.vectors, "Word vector file")->required();
  tr->add_option("--seed", o.seed, "Random seed")->required();
  tr->add_option("--lr", o.lr, "Adam learning rate");
  tr->add_option("--batch-size", o.batch, "Pairs per mini-batch");
  tr->add_option("--epochs", o.epochs, "Training epochs");
  tr->add_option("--d-out", o.d_out, "Embedding dimension");
  tr->add_option("--pairs", o.pairs, "Number of sampled training pairs");
  tr->add_option("--activation", o.activation, "identity or relu");
  tr->add_option("--loss", o.loss, "mse or mae");
  tr->add_option("--normalize-ged", o.normalize_ged, "none or max");
  tr->add_flag("--reify-edges", o.reify_edges, "Turn edges into feature-carrying nodes");
  tr->add_flag("--large-preset", o.large_preset, "Use the 2048-dimensional preset");
  bind(tr, cmd_train);

  auto* embed = app.add_subcommand("embed", "Embed every graph with the trained model");
  common(embed);
  data(embed);
  embed->add_option("--vectors", o.vectors, "Word vector file")->required();
  bind(embed, cmd_embed);

  auto* retrieve = app.add_subcommand("retrieve", "Rank candidates and select counterfactuals");
  common(retrieve);
  data(retrieve);
  costs(retrieve, true);
  selection(retrieve);
  retrieve->add_option("--method", o.method, "gnn (embeddings) or ged (GED matrix)");
  retrieve->add_option("--similarity", o.similarity, "cosine or euclidean");
  bind(retrieve, cmd_retrieve);

  auto* kernel = app.add_subcommand("kernel", "Pyramid-match kernel baseline retrieval");
  common(kernel);
  data(kernel);
  costs(kernel, true);
  selection(kernel);
  kernel->add_option("--d", o.kernel_d, "Spectral embedding dimension");
  kernel->add_option("--levels", o.kernel_levels, "Histogram levels");
  kernel->add_flag("--no-labels", o.kernel_no_labels, "Ignore node labels");
  bind(kernel, cmd_kernel);

  auto* explain = app.add_subcommand("explain", "Edit path of one query and its counterfactual (JSON, DOT)");
  common(explain);
  data(explain);
  costs(explain, true);
  explain->add_option("--query", o.query, "Query instance id")->required();
  explain->add_option("--counterfactual", o.counterfactual, "Counterfactual id (default: from --report)");
  explain->add_option("--report", o.report, "Retrieval report JSON");
  bind(explain, cmd_explain);

  auto* ev = app.add_subcommand("eval", "Ranking metrics and edit statistics of a retrieval report");
  common(ev);
  data(ev);
  costs(ev, true);
  ev->add_option("--report", o.report, "Retrieval report JSON")->required();
  ev->add_option("--ks", o.ks, "Cutoffs")->delimiter(',');
  bind(ev, cmd_eval);

  auto* agg = app.add_subcommand("aggregate", "Global edits for one class transition");
  common(agg);
  data(agg);
  agg->add_option("--report", o.report, "Retrieval report JSON")->required();
  agg->add_option("--from", o.from_class, "Query class")->required();
  agg->add_option("--to", o.to_class, "Counterfactual class")->required();
  bind(agg, cmd_aggregate);

  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus (dataset, taxonomy, vectors)");
  common(synth);
  synth->add_option("--seed", o.seed, "Generator seed");
  bind(synth, cmd_synth);

  auto* star = app.add_subcommand("star", "Build star graphs from attribute records");
  common(star);
  star->add_option("--records", o.records, "Attribute record JSON")->required();
  bind(star, cmd_star);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return 3;
  }

  try {
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + o.out_dir + ": " + ec.message());
    Session session(o, out);
    action(session);
    return 0;
  } catch (const MissingArtifactError& e) {
    print_error(err, e.kind(), e.what());
    return 2;
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return 3;
  }
}

}  // namespace sgce
