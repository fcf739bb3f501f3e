#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "sgce/error.hpp"
#include "sgce/kernel.hpp"
#include "sgce/synthetic.hpp"
#include "test_support.hpp"

using namespace sgce;
using sgce::testing::make_graph;

TEST_CASE("jacobi eigen-solver agrees with a library solver") {
  Rng rng(9);
  for (int n : {1, 2, 5, 12}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
    const auto mine = jacobi_eigen(a);
    Eigen::VectorXd sorted = mine.values;
    std::sort(sorted.data(), sorted.data() + n);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    CHECK((sorted - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd recon = mine.vectors * mine.values.asDiagonal() * mine.vectors.transpose();
    CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((mine.vectors.transpose() * mine.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(jacobi_eigen(Eigen::MatrixXd(2, 3)), NumericalError);
}

TEST_CASE("spectral node points") {
  SUBCASE("isolated node") {
    const auto p = spectral_node_points(make_graph("g", "A", {"dog"}), 6);
    CHECK(p.rows() == 1);
    CHECK(p.cols() == 6);
    CHECK(p.isZero());
  }
  SUBCASE("single edge") {
    const auto p = spectral_node_points(make_graph("g", "A", {"dog", "cat"}, {{0, 1, "on"}}), 6);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) CHECK(p(r, c) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(p.rightCols(4).isZero());
  }
  SUBCASE("triangle") {
    const auto p = spectral_node_points(
        make_graph("g", "A", {"a", "b", "c"}, {{0, 1, "r"}, {1, 2, "r"}, {2, 0, "r"}}), 6);
    for (int r = 0; r < 3; ++r) CHECK(p(r, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("unit hypercube") {
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
      const auto g = testing::random_graph(rng, "g", {"a", "b"}, 9, 12);
      const auto p = spectral_node_points(g, 4);
      CHECK(p.minCoeff() >= 0.0);
      CHECK(p.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("half-open cells") {
  CHECK(pyramid_cell(0.0, 2) == 0);
  CHECK(pyramid_cell(0.5, 2) == 0);
  CHECK(pyramid_cell(0.50001, 2) == 1);
  CHECK(pyramid_cell(1.0, 2) == 1);
  CHECK(pyramid_cell(0.25, 4) == 0);
  CHECK(pyramid_cell(0.3, 4) == 1);
  CHECK(pyramid_cell(0.7, 1) == 0);
}

TEST_CASE("hand-placed points, one dimension, one extra level") {
  // finest level: cells [0, .5] and (.5, 1]; x has counts (2, 1), y has (1, 2)
  Eigen::MatrixXd px(3, 1), py(3, 1);
  px << 0.1, 0.5, 0.9;
  py << 0.2, 0.6, 0.7;
  const std::vector<std::string> l(3, "x");
  const PyramidConfig cfg{1, 1, true};
  const auto I = pyramid_intersections(px, l, py, l, cfg);
  REQUIRE(I.size() == 2);
  CHECK(I[0] == 2.0);
  CHECK(I[1] == 3.0);
  CHECK(pyramid_match_points(px, l, py, l, cfg) == 2.5);
  CHECK(pyramid_match_points(py, l, px, l, cfg) == 2.5);

  // labels split the coarse cell
  const std::vector<std::string> ly{"x", "y", "y"};
  const auto J = pyramid_intersections(px, l, py, ly, cfg);
  CHECK(J[0] == 1.0);
  CHECK(J[1] == 1.0);
  CHECK(pyramid_match_points(px, l, py, ly, PyramidConfig{1, 1, false}) == 2.5);
}

TEST_CASE("pyramid match properties") {
  Rng rng(6);
  const std::vector<std::string> labels{"dog", "cat", "bird"};
  for (int t = 0; t < 25; ++t) {
    const auto a = testing::random_graph(rng, "a", labels, 8, 10);
    const auto b = testing::random_graph(rng, "b", labels, 8, 10);
    for (bool use_labels : {true, false}) {
      const PyramidConfig cfg{6, 4, use_labels};
      CHECK(pyramid_match(a, a, cfg) == static_cast<double>(a.node_count()));
      CHECK(pyramid_match(a, b, cfg) == pyramid_match(b, a, cfg));
      CHECK(pyramid_match(a, b, cfg) >= 0.0);
      const auto I = pyramid_intersections(spectral_node_points(a, 6), std::vector<std::string>(a.node_count()),
                                           spectral_node_points(b, 6), std::vector<std::string>(b.node_count()), cfg);
      for (std::size_t l = 1; l < I.size(); ++l) CHECK(I[l] >= I[l - 1]);
    }
  }
  const auto x = make_graph("x", "A", {"dog", "cat"}, {{0, 1, "on"}});
  const auto y = make_graph("y", "A", {"car", "bus"}, {{0, 1, "on"}});
  CHECK(pyramid_match(x, y) == 0.0);
  CHECK(pyramid_match(x, y, {6, 4, false}) == 2.0);
  CHECK_THROWS_AS(pyramid_match(x, y, {0, 4, true}), ConfigError);
  CHECK_THROWS_AS(pyramid_match(x, y, {6, -1, true}), ConfigError);
}

TEST_CASE("gram matrix and kernel ranking") {
  SUBCASE("identical graphs") {
    GraphDataset ds;
    for (const char* id : {"d", "b", "c", "a"}) ds.graphs.push_back(make_graph(id, "A", {"dog", "cat"}, {{0, 1, "on"}}));
    const auto gram = pyramid_gram(ds);
    CHECK((gram.array() == 2.0).all());
    const auto ranks = kernel_rank(ds, gram);
    REQUIRE(ranks[0].size() == 3);
    CHECK(ds.graphs[ranks[0][0].index].instance_id() == "a");
    CHECK(ds.graphs[ranks[0][1].index].instance_id() == "b");
    CHECK(ds.graphs[ranks[0][2].index].instance_id() == "c");
  }
  SUBCASE("synthetic corpus") {
    const auto ds = make_synthetic_corpus().dataset;
    const auto gram = pyramid_gram(ds);
    CHECK(gram == gram.transpose());
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(gram(i, i) == static_cast<double>(ds.graphs[i].node_count()));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    CHECK(pyramid_gram(ds, {}, 4) == gram);
    CHECK(gram(3, 17) == pyramid_match(ds.graphs[3], ds.graphs[17]));
    const auto ranks = kernel_rank(ds, gram);
    for (std::size_t q = 0; q < ds.size(); ++q) {
      for (std::size_t r = 1; r < ranks[q].size(); ++r) CHECK(ranks[q][r - 1].similarity >= ranks[q][r].similarity);
    }
  }
}
