#include "doctest.h"
#include "sgce/error.hpp"
#include "sgce/taxonomy.hpp"
#include "test_support.hpp"

using namespace sgce;

TEST_CASE("load_taxonomy") {
  SUBCASE("simple hierarchy") {
    const auto t = load_taxonomy("!root root\nanimal\troot\nbird\tanimal\ndog\tanimal\n");
    CHECK(t.size() == 4);
    CHECK(t.root() == "root");
  }
  SUBCASE("comments, blank lines, and whitespace-separated pairs") {
    const auto t = load_taxonomy("# header\n!root root\n\nanimal root  # trailing\nbird\tanimal\n");
    CHECK(t.size() == 3);
  }
  SUBCASE("multi-word concepts need a tab") {
    const auto t = load_taxonomy("!root entity\ntraffic light\tentity\n");
    CHECK(t.contains("traffic light"));
    CHECK_THROWS_AS(load_taxonomy("!root entity\ntraffic light entity\n"), ValidationError);
  }
  SUBCASE("cycle") {
    try {
      load_taxonomy("!root root\na\tb\nb\ta\n");
      FAIL("expected a cycle error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("cycle") != std::string::npos);
      CHECK(msg.find("a") != std::string::npos);
    }
  }
  SUBCASE("DAG with two parents") {
    const auto t = load_taxonomy("!root root\nmammal\troot\nswimmer\troot\nseal\tmammal\nseal\tswimmer\n");
    CHECK(t.parents_of("seal") == std::vector<std::string>{"mammal", "swimmer"});
  }
  SUBCASE("unreachable concept") {
    CHECK_THROWS_WITH_AS(load_taxonomy("!root root\nanimal\troot\nrock\tmineral\n"),
                         doctest::Contains("unreachable"), ValidationError);
  }
  SUBCASE("missing root line") { CHECK_THROWS_AS(load_taxonomy("a\tb\n"), ValidationError); }
}

TEST_CASE("concept distance on the five-node hierarchy") {
  const auto t = testing::five_node_taxonomy();
  const auto oracle = testing::floyd_warshall(*t);
  CHECK(t->distance("bird", "bird") == 0.0);
  CHECK(t->distance("bird", "dog") == 3.0);
  CHECK(oracle[2][4] == 3.0);  // bird, dog in interning order
  CHECK(t->distance("Bird ", "DOG") == 3.0);
  CHECK_FALSE(t->distance("bird", "helicopter").has_value());
  CHECK(t->diameter() == 3);
}

TEST_CASE("substitution costs") {
  const auto t = testing::five_node_taxonomy();
  SUBCASE("identical labels") {
    const CostModel cm(t, nullptr, {3.0, 1.0, std::nullopt});
    CHECK(cm.node_substitution("bird", "bird") == 0.0);
  }
  SUBCASE("below the clamp") {
    const CostModel cm(t, nullptr, {3.0, 1.0, std::nullopt});
    CHECK(cm.node_substitution("bird", "dog") == 3.0);
  }
  SUBCASE("clamped to delete plus insert") {
    const CostModel cm(t, nullptr, {1.0, 1.0, std::nullopt});
    CHECK(cm.node_substitution("bird", "dog") == 2.0);
  }
  SUBCASE("unknown concepts") {
    const CostModel cm(t, nullptr, {1.5, 1.0, std::nullopt});
    CHECK(cm.unknown_cost() == 3.0);
    CHECK(cm.node_substitution("bird", "helicopter") == 3.0);
    const CostModel cheap(t, nullptr, {1.5, 1.0, 0.5});
    CHECK(cheap.node_substitution("bird", "helicopter") == 0.5);
  }
  SUBCASE("defaults from the diameter") {
    const CostModel cm(t);
    CHECK(cm.node_indel() == 1.5);
    CHECK(cm.edge_indel() == 1.0);
    CHECK(cm.unknown_cost() == 3.0);
  }
  SUBCASE("edges without a relation taxonomy") {
    const CostModel cm(t, nullptr, {1.0, 1.0, std::nullopt});
    CHECK(cm.edge_substitution("riding", "riding") == 0.0);
    CHECK(cm.edge_substitution("riding", "on") == 1.0);
  }
  SUBCASE("edges with a relation taxonomy") {
    auto rel = std::make_shared<const Taxonomy>(load_taxonomy("!root relation\nmoving\trelation\nriding\tmoving\ndriving\tmoving\n"));
    const CostModel cm(t, rel, {1.0, 3.0, std::nullopt});
    CHECK(cm.edge_substitution("riding", "driving") == 2.0);
    CHECK(cm.edge_substitution("riding", "riding") == 0.0);
  }
  SUBCASE("negative costs rejected") {
    CHECK_THROWS_AS(CostModel(t, nullptr, {-1.0, 1.0, std::nullopt}), ConfigError);
  }
}

TEST_CASE("concept distance is a metric matching Floyd-Warshall on random trees") {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(19));
    std::vector<Taxonomy::ParentLink> links;
    for (int c = 1; c < n; ++c) {
      links.push_back({"c" + std::to_string(c), "c" + std::to_string(rng.below(c))});
      // occasional second parent keeps it a DAG
      if (c > 2 && rng.below(5) == 0) links.push_back({"c" + std::to_string(c), "c" + std::to_string(rng.below(c))});
    }
    const Taxonomy t("c0", links);
    const auto oracle = testing::floyd_warshall(t);
    const auto& names = t.concepts();
    const CostModel cm(std::make_shared<const Taxonomy>("c0", links));
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = 0; j < names.size(); ++j) {
        const double dij = *t.distance(names[i], names[j]);
        CHECK(dij == oracle[i][j]);
        CHECK(dij == *t.distance(names[j], names[i]));
        CHECK((dij == 0.0) == (i == j));
        const double sub = cm.node_substitution(names[i], names[j]);
        CHECK(sub >= 0.0);
        CHECK(sub <= 2.0 * cm.node_indel());
        for (std::size_t k = 0; k < names.size(); ++k) {
          CHECK(dij <= *t.distance(names[i], names[k]) + *t.distance(names[k], names[j]));
        }
      }
    }
  }
}
