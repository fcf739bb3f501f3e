#include <filesystem>

#include "doctest.h"
#include "sgce/error.hpp"
#include "sgce/ged.hpp"
#include "sgce/ged_io.hpp"
#include "test_support.hpp"

using namespace sgce;
using sgce::testing::make_graph;

namespace {

const std::vector<std::string> kConcepts{"animal", "vehicle", "person", "dog", "cat",
                                         "car",    "bike",    "man",    "woman", "entity"};

CostModel ten_concept_costs() { return CostModel(testing::ten_concept_taxonomy(), nullptr, {1.5, 1.0, std::nullopt}); }

}  // namespace

TEST_CASE("exact_ged basic cases") {
  const CostModel cm = ten_concept_costs();
  const auto g = make_graph("g", "A", {"man", "bike", "dog"}, {{0, 1, "riding"}, {2, 0, "near"}});

  SUBCASE("identity") {
    const auto r = exact_ged(g, g, cm);
    CHECK(r.exact);
    CHECK(r.value == 0.0);
    CHECK(r.path.total_edits() == 0);
  }
  SUBCASE("forced deletion") {
    const auto dog = make_graph("d", "A", {"dog"});
    const SemanticGraph empty("e", std::nullopt, "A", {}, {});
    const auto r = exact_ged(dog, empty, cm);
    CHECK(r.value == cm.node_indel());
    REQUIRE(r.path.ops.size() == 1);
    CHECK(r.path.ops[0].kind == EditKind::NodeDel);
    CHECK(std::get<NodeRef>(*r.path.ops[0].source).label == "dog");
  }
  SUBCASE("size limit") {
    const auto big = make_graph("b", "A", std::vector<std::string>(9, "dog"));
    CHECK_THROWS_AS(exact_ged(big, g, cm), LimitError);
    CHECK_NOTHROW(exact_ged(big, g, cm, {9, std::chrono::milliseconds(5000)}));
  }
  SUBCASE("timeout carries a bound") {
    Rng rng(5);
    const auto a = testing::random_graph(rng, "a", kConcepts, 8, 8);
    auto b8 = make_graph("b", "A", {"dog", "cat", "car", "bike", "man", "woman", "animal", "vehicle"},
                         {{0, 1, "on"}, {2, 3, "near"}, {4, 5, "has"}, {6, 7, "on"}});
    auto a8 = make_graph("a", "A", {"woman", "man", "bike", "car", "cat", "dog", "person", "entity"},
                         {{1, 0, "on"}, {3, 2, "riding"}, {5, 4, "near"}, {7, 6, "has"}});
    try {
      exact_ged(a8, b8, cm, {8, std::chrono::milliseconds(0)});
      // a fast machine may finish before the first clock check; that is fine
    } catch (const TimeoutError& e) {
      CHECK(e.best_bound() >= 0.0);
      CHECK(e.best_bound() <= bipartite_ged(a8, b8, cm).value);
    }
    (void)a;
  }
}

TEST_CASE("exact_ged equals brute-force enumeration on 3-node pairs") {
  const CostModel cm = ten_concept_costs();
  Rng rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = testing::random_graph(rng, "a", kConcepts, 3, 4);
    const auto b = testing::random_graph(rng, "b", kConcepts, 3, 4);
    const auto r = exact_ged(a, b, cm);
    CHECK(r.value == doctest::Approx(testing::brute_force_ged(a, b, cm)).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(r.path.total_cost));
  }
}

TEST_CASE("bipartite_ged") {
  const CostModel cm = ten_concept_costs();
  SUBCASE("identity") {
    const auto g = make_graph("g", "A", {"man", "bike", "dog"}, {{0, 1, "riding"}, {2, 0, "near"}});
    CHECK(bipartite_ged(g, g, cm).value == 0.0);
    CHECK_FALSE(bipartite_ged(g, g, cm).exact);
  }
  SUBCASE("upper bound on random pairs") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = testing::random_graph(rng, "a", kConcepts, 4, 4);
      const auto b = testing::random_graph(rng, "b", kConcepts, 4, 4);
      const auto approx = bipartite_ged(a, b, cm);
      const auto exact = exact_ged(a, b, cm);
      CHECK(approx.value >= exact.value - 1e-9);
      CHECK(approx.value == doctest::Approx(approx.path.total_cost));
    }
  }
  SUBCASE("star graph with one changed attribute value") {
    const auto taxonomy = std::make_shared<const Taxonomy>(load_taxonomy(
        "!root thing\ncolor\tthing\ndark\tcolor\nblack\tdark\ngrey\tdark\nwhite\tcolor\nbird\tthing\nwing\tthing\n"
        "beak\tthing\nshape\tthing\nhooked\tshape\n"));
    const CostModel star_costs(taxonomy, nullptr, {2.0, 1.0, std::nullopt});
    const auto a = build_star_graph({"bird", {{"wing", "color", "black"}, {"beak", "shape", "hooked"}}}, "a", "A");
    const auto b = build_star_graph({"bird", {{"wing", "color", "grey"}, {"beak", "shape", "hooked"}}}, "b", "B");
    const auto r = bipartite_ged(a, b, star_costs);
    CHECK(r.value == star_costs.node_substitution("black", "grey"));
    CHECK(r.value == 2.0);
    CHECK(r.path.node_edits == 1);
    CHECK(r.path.edge_edits == 0);
    int changed = 0;
    for (const auto& op : r.path.ops) {
      if (op.cost > 0) {
        ++changed;
        CHECK(op.kind == EditKind::NodeSub);
      }
    }
    CHECK(changed == 1);
    CHECK(exact_ged(a, b, star_costs).value == r.value);
  }
}

TEST_CASE("GED invariants on random graphs") {
  const CostModel cm = ten_concept_costs();
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::random_graph(rng, "a", kConcepts, 4, 4);
    const auto b = testing::random_graph(rng, "b", kConcepts, 4, 4);
    const auto c = testing::random_graph(rng, "c", kConcepts, 4, 4);
    const double ab = exact_ged(a, b, cm).value;
    CHECK(ab == doctest::Approx(exact_ged(b, a, cm).value).epsilon(1e-12));
    CHECK(bipartite_ged(a, b, cm).value == doctest::Approx(bipartite_ged(b, a, cm).value).epsilon(1e-12));
    CHECK(ab <= exact_ged(a, c, cm).value + exact_ged(c, b, cm).value + 1e-9);
    CHECK((ab == 0.0) == label_isomorphic(a, b));
    CHECK(bipartite_ged(a, b, cm).path == bipartite_ged(a, b, cm).path);
  }
}

TEST_CASE("multigraph edges between the same pair") {
  const CostModel cm = ten_concept_costs();
  const auto a = make_graph("a", "A", {"man", "bike"}, {{0, 1, "on"}, {0, 1, "riding"}});
  const auto b = make_graph("b", "A", {"man", "bike"}, {{0, 1, "riding"}});
  const auto r = exact_ged(a, b, cm);
  CHECK(r.value == cm.edge_indel());
  CHECK(label_isomorphic(apply_path(a, r.path), b));
  CHECK(bipartite_ged(a, b, cm).value == cm.edge_indel());
}

TEST_CASE("apply_path") {
  const CostModel cm = ten_concept_costs();
  const auto g = make_graph("g", "A", {"man", "bike"}, {{0, 1, "riding"}});
  SUBCASE("empty path") {
    EditPath empty;
    CHECK(label_isomorphic(apply_path(g, empty), g));
  }
  SUBCASE("bipartite paths reach the target") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = testing::random_graph(rng, "a", kConcepts, 8, 10);
      const auto b = testing::random_graph(rng, "b", kConcepts, 8, 10);
      CHECK(label_isomorphic(apply_path(a, bipartite_ged(a, b, cm).path), b));
    }
  }
  SUBCASE("deleting a missing node") {
    EditPath bad;
    bad.ops.push_back({EditKind::NodeDel, NodeRef{42, "x"}, std::nullopt, 1.0});
    CHECK_THROWS_AS(apply_path(g, bad), InconsistencyError);
  }
  SUBCASE("deleting a node but not its edges") {
    EditPath bad;
    bad.ops.push_back({EditKind::NodeDel, NodeRef{0, "man"}, std::nullopt, 1.0});
    CHECK_THROWS_AS(apply_path(g, bad), InconsistencyError);
  }
  SUBCASE("inverted path goes back") {
    const auto b = make_graph("b", "A", {"woman", "car", "dog"}, {{0, 1, "on"}, {2, 2, "near"}});
    const auto p = bipartite_ged(g, b, cm).path;
    CHECK(label_isomorphic(apply_path(b, invert_path(p)), g));
    CHECK(invert_path(p).total_cost == doctest::Approx(p.total_cost));
  }
}

TEST_CASE("ged_matrix") {
  const CostModel cm = ten_concept_costs();
  const auto g = make_graph("x", "A", {"man", "bike"}, {{0, 1, "riding"}});
  SUBCASE("identical graphs") {
    GraphDataset ds{"d", {}};
    for (int i = 0; i < 3; ++i) {
      ds.graphs.emplace_back("g" + std::to_string(i), std::nullopt, "A", g.nodes(), g.edges());
    }
    const auto m = ged_matrix(ds, cm);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(m.value(i, j) == 0.0);
    }
  }
  Rng rng(8);
  GraphDataset ds{"d", {}};
  for (int i = 0; i < 10; ++i) {
    const auto r = testing::random_graph(rng, "g" + std::to_string(i), kConcepts, 7, 9);
    ds.graphs.emplace_back(r.instance_id(), std::nullopt, "A", r.nodes(), r.edges());
  }
  SUBCASE("requested pairs only, mirrored and deduplicated") {
    const auto m = ged_matrix(GraphDataset{"d", {ds.graphs[0], ds.graphs[1], ds.graphs[2]}}, cm,
                              std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}, {0, 1}});
    CHECK(m.at(0, 1) == m.at(1, 0));
    CHECK(m.at(0, 1).has_value());
    CHECK_FALSE(m.at(0, 2).has_value());
    CHECK_FALSE(m.at(1, 2).has_value());
    CHECK_THROWS_AS(m.value(1, 2), ValidationError);
  }
  SUBCASE("full matrix equals per-pair calls, any thread count") {
    const auto m1 = ged_matrix(ds, cm, std::nullopt, 1);
    const auto m4 = ged_matrix(ds, cm, std::nullopt, 4);
    CHECK(m1 == m4);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t j = 0; j < ds.size(); ++j) {
        if (i != j) CHECK(m1.value(i, j) == bipartite_ged(ds.graphs[i], ds.graphs[j], cm).value);
      }
    }
  }
  SUBCASE("CSV and binary cache round-trip") {
    const auto m = ged_matrix(ds, cm, std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 5}});
    const auto csv = ged_matrix_to_csv(m);
    CHECK(csv.rfind("id,g0,g1,", 0) == 0);
    CHECK(ged_matrix_from_csv(csv) == m);
    const auto file = std::filesystem::temp_directory_path() / "sgce_test_cache.bin";
    write_ged_cache(file, m, 123);
    CHECK(read_ged_cache(file, 123) == m);
    CHECK_FALSE(read_ged_cache(file, 124).has_value());
    std::filesystem::remove(file);
  }
}

TEST_CASE("edit path export") {
  const CostModel cm = ten_concept_costs();
  const auto a = make_graph("a", "A", {"man", "bike", "dog"}, {{0, 1, "riding"}, {2, 0, "near"}});
  const auto b = make_graph("b", "B", {"woman", "bike", "helmet"}, {{0, 1, "on"}, {0, 2, "wearing"}});
  const auto p = bipartite_ged(a, b, cm).path;
  CHECK(edit_path_from_json(edit_path_to_json(p)) == p);
  const auto dot = edit_path_to_dot(p);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("color=green") != std::string::npos);
  CHECK(dot.find("color=red") != std::string::npos);
  CHECK(dot.find("color=blue") != std::string::npos);
}
