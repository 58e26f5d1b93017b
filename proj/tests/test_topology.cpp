#include <gtest/gtest.h>

#include <cmath>

#include "gridconc/topology.hpp"
#include "oracles.hpp"

using namespace gridconc;

TEST(Topology, BuildsMinimalAndPathGraphs) {
  const auto single = build_topology(2, {{0, 1}});
  EXPECT_EQ(single.num_edges(), 1u);
  const auto p3 = build_topology(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(p3, Topology::path(3));
}

TEST(Topology, RejectsInvalidInput) {
  EXPECT_THROW(build_topology(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(build_topology(3, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(build_topology(0, {}), std::invalid_argument);
  EXPECT_THROW(Topology(3, {}, 5), std::invalid_argument);
}

TEST(Topology, IncidenceRows) {
  const auto a = incidence_matrix(Topology::path(3)).matrix;
  Eigen::MatrixXd expected(2, 3);
  expected << 1, -1, 0, 0, 1, -1;
  EXPECT_EQ(a, expected);
  const auto single = incidence_matrix(build_topology(2, {{0, 1}})).matrix;
  EXPECT_EQ(single(0, 0), 1.0);
  EXPECT_EQ(single(0, 1), -1.0);
  for (Eigen::Index l = 0; l < a.rows(); ++l) EXPECT_EQ(a.row(l).squaredNorm(), 2.0);
}

TEST(Topology, ReducedIncidenceNeedsReference) {
  const auto p3 = Topology::path(3);
  EXPECT_THROW(incidence_matrix(p3, true), std::invalid_argument);
  const auto red = incidence_matrix(p3.with_reference(0), true);
  EXPECT_TRUE(red.reduced);
  ASSERT_EQ(red.matrix.cols(), 2);
  Eigen::MatrixXd expected(2, 2);
  expected << -1, 0, 1, -1;
  EXPECT_EQ(red.matrix, expected);
  EXPECT_FALSE(reduced_index(p3.with_reference(0), 0).has_value());
  EXPECT_EQ(*reduced_index(p3.with_reference(0), 2), 1u);
}

TEST(Topology, PathLaplacianSpectrum) {
  const auto l = laplacian(Topology::path(3));
  Eigen::MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(l, expected);
  oracle::Mat m = oracle::zeros(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = l(i, j);
  const auto ev = oracle::jacobi_eigenvalues(m);
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 1.0, 1e-12);
  EXPECT_NEAR(ev[2], 3.0, 1e-12);
}

TEST(Topology, Degrees) {
  EXPECT_EQ(degrees(Topology::path(3)), (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(max_degree(Topology::path(3)), 2u);
  EXPECT_EQ(degrees(Topology::complete(3)), (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(max_degree(Topology::star(4)), 4u);
}

TEST(Topology, TreeDetection) {
  EXPECT_TRUE(is_tree(Topology::path(3)));
  EXPECT_FALSE(is_tree(Topology::complete(3)));
  EXPECT_FALSE(is_tree(build_topology(4, {{0, 1}, {2, 3}})));
  EXPECT_FALSE(is_connected(build_topology(4, {{0, 1}, {2, 3}})));
  EXPECT_TRUE(is_tree(Topology(1, {})));
}

TEST(Topology, LaplacianMatchesCombinatorialDefinitionWithParallelLines) {
  const auto t = build_topology(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {0, 3}});
  const auto l = laplacian(t);
  const auto deg = degrees(t);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(l(i, i), static_cast<double>(deg[i]));
    EXPECT_NEAR(l.row(i).sum(), 0.0, 0.0);
  }
  EXPECT_EQ(l(0, 1), -2.0);
  EXPECT_EQ(l(1, 3), 0.0);
}

TEST(Topology, LaplacianIsPsdOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto pairs = oracle::random_connected_edges(n, 0.3, rng);
    const auto l = laplacian(build_topology(n, pairs));
    oracle::Mat m = oracle::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = l(i, j);
    EXPECT_GE(oracle::jacobi_eigenvalues(m).front(), -1e-10);
  }
}

TEST(Topology, ErDegenerateProbabilities) {
  Rng rng(1);
  EXPECT_EQ(sample_er_topology(5, 0.0, rng).num_edges(), 0u);
  EXPECT_EQ(sample_er_topology(5, 1.0, rng).num_edges(), 10u);
  EXPECT_THROW(sample_er_topology(5, 1.5, rng), std::invalid_argument);
  EXPECT_THROW(sample_er_topology(5, -0.1, rng), std::invalid_argument);
}

TEST(Topology, ErMeanEdgeCount) {
  Rng rng(split_seed(42, 0));
  const int samples = 10000;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double m = static_cast<double>(sample_er_topology(20, 0.3, rng).num_edges());
    sum += m;
    sq += m * m;
  }
  const double mean = sum / samples;
  // Binomial(190, 0.3): variance 190 * 0.3 * 0.7.
  const double se = std::sqrt(190 * 0.3 * 0.7 / samples);
  EXPECT_LT(std::abs(mean - 57.0), 3.0 * se);
}

TEST(Topology, ErIsReproducible) {
  Rng a(99), b(99);
  EXPECT_EQ(sample_er_topology(12, 0.4, a), sample_er_topology(12, 0.4, b));
}

TEST(Topology, RandomTreeIsTree) {
  Rng rng(3);
  for (std::size_t n = 1; n < 30; ++n) {
    const auto t = sample_random_tree(n, rng);
    EXPECT_TRUE(is_tree(t));
    EXPECT_EQ(t.reference(), std::optional<std::size_t>(0));
  }
}

TEST(Topology, JsonRoundTrip) {
  const auto t = Topology::complete(4).with_reference(2);
  nlohmann::json j = t;
  EXPECT_EQ(topology_from_json(j), t);
  EXPECT_THROW(topology_from_json(nlohmann::json{{"n", 2}, {"edges", {{0, 2}}}}), std::invalid_argument);
}
