#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sgce/cli.hpp"
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

namespace py = pybind11;
using namespace sgce;

namespace {

// JSON values cross the boundary as text; the Python side decodes them.
py::object json_value(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict ged_result(const GedResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["exact"] = r.exact;
  d["node_edits"] = r.path.node_edits;
  d["edge_edits"] = r.path.edge_edits;
  d["path"] = json_value(edit_path_to_json(r.path));
  return d;
}

Eigen::MatrixXd dense(const GedMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m.at(i, j).value_or(std::nan(""));
  return out;
}

GedMatrix from_dense(const Eigen::MatrixXd& values, const std::vector<std::string>& ids) {
  if (values.rows() != values.cols() || static_cast<std::size_t>(values.rows()) != ids.size()) {
    throw ValidationError("GED matrix must be square with one row per id");
  }
  GedMatrix m(ids);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (!std::isnan(values(i, j))) m.set(i, j, values(i, j));
  return m;
}

std::vector<std::string> ids_of(const GraphDataset& ds) {
  std::vector<std::string> out;
  for (const auto& g : ds.graphs) out.push_back(g.instance_id());
  return out;
}

}  // namespace

PYBIND11_MODULE(_sgce, m) {
  m.doc() = "Semantic-graph counterfactual explanations";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (e.kind() + ": " + e.what()).c_str());
    }
  });

  py::class_<SemanticGraph>(m, "Graph")
      .def_property_readonly("id", &SemanticGraph::instance_id)
      .def_property_readonly("class_pred", &SemanticGraph::class_pred)
      .def_property_readonly("labels",
                             [](const SemanticGraph& g) {
                               std::vector<std::string> out;
                               for (const auto& n : g.nodes()) out.push_back(n.label);
                               return out;
                             })
      .def_property_readonly("node_count", &SemanticGraph::node_count)
      .def_property_readonly("edge_count", &SemanticGraph::edge_count)
      .def("__repr__", [](const SemanticGraph& g) {
        return "<Graph " + g.instance_id() + " nodes=" + std::to_string(g.node_count()) + ">";
      });

  py::class_<GraphDataset>(m, "Dataset")
      .def_readonly("name", &GraphDataset::name)
      .def_readonly("graphs", &GraphDataset::graphs)
      .def_property_readonly("ids", &ids_of)
      .def("__len__", &GraphDataset::size)
      .def("__getitem__", [](const GraphDataset& ds, std::size_t i) { return ds.graphs.at(i); })
      .def("to_json", &serialize_dataset);

  m.def("parse_dataset", [](const std::string& text) {
    auto ds = parse_dataset(text);
    ds.validate();
    return ds;
  }, py::arg("text"));

  py::class_<Taxonomy, std::shared_ptr<Taxonomy>>(m, "Taxonomy")
      .def_property_readonly("root", &Taxonomy::root)
      .def_property_readonly("concepts", &Taxonomy::concepts)
      .def_property_readonly("diameter", &Taxonomy::diameter)
      .def("distance", &Taxonomy::distance);
  m.def("load_taxonomy", [](const std::string& text) { return std::make_shared<Taxonomy>(load_taxonomy(text)); },
        py::arg("text"));

  py::class_<CostModel>(m, "CostModel")
      .def(py::init([](std::shared_ptr<Taxonomy> nodes, std::shared_ptr<Taxonomy> relations,
                       std::optional<double> node_indel, double edge_indel, std::optional<double> unknown_cost) {
             return CostModel(std::move(nodes), std::move(relations), {node_indel, edge_indel, unknown_cost});
           }),
           py::arg("taxonomy"), py::arg("relation_taxonomy") = nullptr, py::arg("node_indel") = py::none(),
           py::arg("edge_indel") = 1.0, py::arg("unknown_cost") = py::none())
      .def_property_readonly("node_indel", &CostModel::node_indel)
      .def_property_readonly("edge_indel", &CostModel::edge_indel)
      .def_property_readonly("unknown_cost", &CostModel::unknown_cost)
      .def("node_substitution", &CostModel::node_substitution)
      .def("edge_substitution", &CostModel::edge_substitution);

  m.def("bipartite_ged", [](const SemanticGraph& a, const SemanticGraph& b, const CostModel& c) {
    return ged_result(bipartite_ged(a, b, c));
  }, py::arg("a"), py::arg("b"), py::arg("costs"));
  m.def("exact_ged",
        [](const SemanticGraph& a, const SemanticGraph& b, const CostModel& c, std::size_t max_nodes,
           double timeout_seconds) {
          ExactLimits limits;
          limits.max_nodes = max_nodes;
          limits.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
          return ged_result(exact_ged(a, b, c, limits));
        },
        py::arg("a"), py::arg("b"), py::arg("costs"), py::arg("max_nodes") = 8, py::arg("timeout") = 5.0);
  m.def("ged_matrix",
        [](const GraphDataset& ds, const CostModel& c, unsigned threads) {
          py::gil_scoped_release release;
          return dense(ged_matrix(ds, c, std::nullopt, threads));
        },
        py::arg("dataset"), py::arg("costs"), py::arg("threads") = 1);

  py::class_<WordVectorTable>(m, "WordVectors")
      .def_static("parse", &WordVectorTable::parse, py::arg("text"), py::arg("fallback_seed") = 0)
      .def_property_readonly("dimension", &WordVectorTable::dimension)
      .def("__len__", &WordVectorTable::size)
      .def("lookup", &WordVectorTable::lookup);

  py::class_<EmbeddingModel>(m, "EmbeddingModel")
      .def_property_readonly("weight", [](const EmbeddingModel& e) { return e.weight(); })
      .def_property_readonly("d_in", &EmbeddingModel::d_in)
      .def_property_readonly("d_out", &EmbeddingModel::d_out)
      .def("embed", py::overload_cast<const SemanticGraph&, const WordVectorTable&>(&EmbeddingModel::embed, py::const_))
      .def("save", [](const EmbeddingModel& e, const std::string& path) { save_model(path, e); })
      .def_static("load", [](const std::string& path) { return load_model(path); });

  m.def("train",
        [](const GraphDataset& ds, const Eigen::MatrixXd& ged, const WordVectorTable& wv, std::uint64_t seed,
           int d_out, int epochs, int batch_size, double learning_rate, std::optional<std::size_t> pairs,
           const std::string& activation, const std::string& loss, bool reify_edges, bool normalize_ged) {
          TrainConfig cfg;
          cfg.seed = seed;
          cfg.d_out = d_out;
          cfg.epochs = epochs;
          cfg.batch_size = batch_size;
          cfg.learning_rate = learning_rate;
          cfg.pairs = pairs;
          cfg.activation = activation_from_string(activation);
          cfg.loss = loss_from_string(loss);
          cfg.reify_edges = reify_edges;
          cfg.normalize_ged_max = normalize_ged;
          const auto matrix = from_dense(ged, ids_of(ds));
          std::optional<TrainResult> result;
          {
            py::gil_scoped_release release;
            result.emplace(train(ds, matrix, wv, cfg));
          }
          const auto& r = *result;
          std::vector<std::pair<std::size_t, std::size_t>> samples;
          for (const auto& s : r.samples) samples.emplace_back(s.i, s.j);
          return py::make_tuple(r.model, r.epoch_loss, samples, r.warnings);
        },
        py::arg("dataset"), py::arg("ged"), py::arg("vectors"), py::arg("seed"), py::arg("d_out") = 128,
        py::arg("epochs") = 50, py::arg("batch_size") = 32, py::arg("learning_rate") = 0.04,
        py::arg("pairs") = py::none(), py::arg("activation") = "relu", py::arg("loss") = "mse",
        py::arg("reify_edges") = false, py::arg("normalize_ged") = false);

  m.def("embed_all", &embed_all, py::arg("model"), py::arg("dataset"), py::arg("vectors"), py::arg("threads") = 1);

  m.def("rank_candidates",
        [](const Eigen::MatrixXd& e, std::size_t query, const std::vector<std::string>& ids,
           const std::string& similarity) {
          std::vector<std::pair<std::size_t, double>> out;
          for (const auto& c : rank_candidates(e, query, ids, similarity_from_string(similarity)))
            out.emplace_back(c.index, c.similarity);
          return out;
        },
        py::arg("embeddings"), py::arg("query"), py::arg("ids"), py::arg("similarity") = "cosine");

  m.def("retrieve",
        [](const GraphDataset& ds, const std::vector<std::vector<std::pair<std::size_t, double>>>& rankings,
           const CostModel& c, std::optional<std::string> target, const std::string& method, std::size_t k) {
          if (rankings.size() != ds.size()) throw ValidationError("one ranking per graph is required");
          std::vector<RankedRetrieval> results;
          for (std::size_t q = 0; q < ds.size(); ++q) {
            Ranking r;
            for (const auto& [i, s] : rankings[q]) r.push_back({i, s});
            results.push_back(select_counterfactual(ds, r, q, target, c));
          }
          return json_value(retrieval_report(method, ds, results, k));
        },
        py::arg("dataset"), py::arg("rankings"), py::arg("costs"), py::arg("target_class") = py::none(),
        py::arg("method") = "gnn", py::arg("k") = 5);

  m.def("evaluate",
        [](const GraphDataset& ds, const std::string& report_json, const Eigen::MatrixXd& ged, const CostModel& c,
           const std::vector<std::size_t>& ks) {
          const auto parsed = parse_retrieval_report(nlohmann::json::parse(report_json), ds);
          return json_value(to_json(evaluate(parsed.results, ds, from_dense(ged, ids_of(ds)), c, ks)));
        },
        py::arg("dataset"), py::arg("report_json"), py::arg("ged"), py::arg("costs"),
        py::arg("ks") = std::vector<std::size_t>{1, 2, 4});

  m.def("pyramid_gram",
        [](const GraphDataset& ds, int d, int levels, bool use_labels, unsigned threads) {
          return pyramid_gram(ds, {d, levels, use_labels}, threads);
        },
        py::arg("dataset"), py::arg("d") = 6, py::arg("levels") = 4, py::arg("use_labels") = true,
        py::arg("threads") = 1);

  m.def("synthetic_corpus",
        [](std::uint64_t seed) {
          SyntheticConfig cfg;
          cfg.seed = seed;
          auto c = make_synthetic_corpus(cfg);
          return py::make_tuple(c.dataset, c.taxonomy_text, c.vectors_text);
        },
        py::arg("seed") = 1);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"sgce"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
