#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sgce/cli.hpp"
#include "sgce/graph.hpp"
#include "sgce/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sgce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sgce::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

const char* kTaxonomy = "!root entity\nanimal\tentity\ndog\tanimal\ncat\tanimal\nvehicle\tentity\ncar\tvehicle\n";

const char* kTwoGraphs = R"({"name": "pair", "graphs": [
  {"id": "x", "class_true": null, "class_pred": "a", "nodes": [{"id": 0, "label": "dog"}], "edges": []},
  {"id": "y", "class_true": null, "class_pred": "b", "nodes": [{"id": 0, "label": "cat"}, {"id": 1, "label": "car"}],
   "edges": [{"src": 0, "dst": 1, "label": "near"}]}]})";

}  // namespace

TEST_CASE("ged on a two-graph dataset") {
  TempDir dir("sgce_cli_ged");
  spit(dir / "d.json", kTwoGraphs);
  spit(dir / "t.tsv", kTaxonomy);
  const auto r = run({"ged", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv", "--out", dir / "out"});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "out/ged.csv");
  // dog->cat costs 2, inserting car costs 2 (half the diameter 4), the edge 1
  CHECK(csv == "id,x,y\nx,0,5\ny,5,0\n");
  CHECK(fs::exists(dir / "out/timings.csv"));
  CHECK(nlohmann::json::parse(r.out)["cached"] == false);

  const auto again = run({"ged", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv", "--out", dir / "out"});
  CHECK(nlohmann::json::parse(again.out)["cached"] == true);
  CHECK(slurp(dir / "out/ged.csv") == csv);

  const auto overridden = run({"ged", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv", "--out",
                               dir / "out", "--node-indel", "3", "--edge-indel", "0.5"});
  CHECK(nlohmann::json::parse(overridden.out)["cached"] == false);
  CHECK(slurp(dir / "out/ged.csv") == "id,x,y\nx,0,5.5\ny,5.5,0\n");

  const auto exact = run({"ged", "--exact", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv", "--out",
                          dir / "exact"});
  CHECK(exact.code == 0);
  CHECK(slurp(dir / "exact/ged.csv") == csv);
}

TEST_CASE("exit codes and error JSON") {
  TempDir dir("sgce_cli_errors");
  spit(dir / "t.tsv", kTaxonomy);

  const auto missing = run({"ged", "--dataset", dir / "none.json", "--taxonomy", dir / "t.tsv", "--out", dir / "o"});
  CHECK(missing.code == 2);
  const auto err = nlohmann::json::parse(missing.err);
  CHECK(err["error"] == "missing_artifact");
  CHECK(err["message"].get<std::string>().rfind("missing artifact: ", 0) == 0);

  spit(dir / "d.json", kTwoGraphs);
  const auto no_embeddings = run({"retrieve", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv", "--out",
                                  dir / "o"});
  CHECK(no_embeddings.code == 2);
  const auto no_ged = run({"retrieve", "--method", "ged", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv",
                           "--out", dir / "o"});
  CHECK(no_ged.code == 2);

  spit(dir / "bad.json", R"({"name": "b", "graphs": [{"id": "g", "class_pred": "a",
      "nodes": [{"id": 0, "label": "dog"}], "edges": [{"src": 0, "dst": 3, "label": "on"}]}]})");
  const auto invalid = run({"validate", "--dataset", dir / "bad.json", "--out", dir / "o"});
  CHECK(invalid.code == 3);
  CHECK(nlohmann::json::parse(invalid.err)["error"] == "validation_error");

  spit(dir / "broken.json", "{\"name\": ");
  const auto parse = run({"validate", "--dataset", dir / "broken.json", "--out", dir / "o"});
  CHECK(parse.code == 3);
  CHECK(nlohmann::json::parse(parse.err)["error"] == "parse_error");

  const auto no_seed = run({"train", "--dataset", dir / "d.json", "--vectors", dir / "v.txt", "--out", dir / "o"});
  CHECK(no_seed.code == 3);
  CHECK(nlohmann::json::parse(no_seed.err)["error"] == "usage");

  CHECK(run({"bogus"}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output directory from the environment") {
  TempDir dir("sgce_cli_env");
  spit(dir / "d.json", kTwoGraphs);
  spit(dir / "t.tsv", kTaxonomy);
  ::setenv("SGCE_OUT", (dir / "envout").c_str(), 1);
  const auto r = run({"ged", "--dataset", dir / "d.json", "--taxonomy", dir / "t.tsv"});
  ::unsetenv("SGCE_OUT");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "envout/ged.csv"));
}

TEST_CASE("full pipeline on the synthetic corpus") {
  TempDir dir("sgce_cli_pipeline");
  REQUIRE(run({"synth", "--out", dir / "data"}).code == 0);
  const std::string d = dir / "data/dataset.json", t = dir / "data/taxonomy.tsv", v = dir / "data/vectors.txt";

  auto pipeline = [&](const std::string& out) {
    const std::vector<std::vector<std::string>> steps{
        {"validate", "--dataset", d, "--taxonomy", t},
        {"ged", "--dataset", d, "--taxonomy", t},
        {"train", "--dataset", d, "--vectors", v, "--seed", "1", "--epochs", "5"},
        {"embed", "--dataset", d, "--vectors", v},
        {"retrieve", "--dataset", d, "--taxonomy", t},
        {"retrieve", "--method", "ged", "--dataset", d, "--taxonomy", t},
        {"kernel", "--dataset", d, "--taxonomy", t},
        {"eval", "--dataset", d, "--taxonomy", t, "--report", out + "/retrieval_gnn.json"},
        {"eval", "--dataset", d, "--taxonomy", t, "--report", out + "/retrieval_ged.json"},
        {"explain", "--dataset", d, "--taxonomy", t, "--query", "g00", "--report", out + "/retrieval_gnn.json"},
        {"aggregate", "--dataset", d, "--report", out + "/retrieval_ged.json", "--from", "class_a", "--to",
         "class_b"},
    };
    for (auto step : steps) {
      step.push_back("--out");
      step.push_back(out);
      const auto r = run(step);
      INFO(step[0], " ", r.err);
      REQUIRE(r.code == 0);
    }
  };
  pipeline(dir / "one");
  pipeline(dir / "two");

  for (const char* f : {"ged.csv", "ged.bin", "model.bin", "loss.csv", "embeddings.bin", "retrieval_gnn.json",
                        "retrieval_ged.json", "retrieval_kernel.json", "gram.csv", "eval_gnn.json", "eval_gnn.md",
                        "eval_ged.json", "global_ged_class_a_class_b.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir / ("one/" + std::string(f))));
    CHECK(slurp(dir / ("one/" + std::string(f))) == slurp(dir / ("two/" + std::string(f))));
  }

  bool explained = false;
  for (const auto& e : fs::directory_iterator(dir.path / "one"))
    explained |= e.path().filename().string().rfind("explain_g00_", 0) == 0 && e.path().extension() == ".dot";
  CHECK(explained);

  const auto self = nlohmann::json::parse(slurp(dir / "one/eval_ged.json"));
  for (const auto& row : self["ranking"]) {
    CHECK(row["avg_precision"] == 1.0);
    CHECK(row["binary_precision"] == 1.0);
    CHECK(row["binary_ndcg"] == 1.0);
  }
  const auto report = nlohmann::json::parse(slurp(dir / "one/retrieval_gnn.json"));
  CHECK(report["queries"].size() == 60);
  CHECK(report["queries"][0]["top_k"].size() == 5);

  // an unchanged model reuses cached embeddings
  const auto cached = run({"embed", "--dataset", d, "--vectors", v, "--out", dir / "one"});
  CHECK(nlohmann::json::parse(cached.out)["cached"] == true);

  // confusion-driven target classes
  spit(dir / "conf.json", R"({"class_a": "class_c", "class_b": "class_c", "class_c": "class_a"})");
  const auto conf = run({"retrieve", "--dataset", d, "--taxonomy", t, "--confusion-file", dir / "conf.json",
                         "--out", dir / "one"});
  REQUIRE(conf.code == 0);
  const auto cr = nlohmann::json::parse(slurp(dir / "one/retrieval_gnn.json"));
  for (const auto& q : cr["queries"]) {
    CHECK(q["target_class"] == (q["query_class"] == "class_c" ? "class_a" : "class_c"));
  }
}

TEST_CASE("star graphs from attribute records") {
  TempDir dir("sgce_cli_star");
  spit(dir / "r.json", R"([{"id": "b1", "class_pred": "auklet", "entity": "bird",
      "attributes": [{"part": "wing", "type": "color", "value": "grey"}, {"part": "bill", "type": "shape", "value": "cone"}]}])");
  const auto r = run({"star", "--records", dir / "r.json", "--out", dir / "o"});
  REQUIRE(r.code == 0);
  const auto ds = sgce::parse_dataset(slurp(dir / "o/dataset.json"));
  CHECK(ds.size() == 1);
  CHECK(ds.graphs[0].node_count() == 5);
}
