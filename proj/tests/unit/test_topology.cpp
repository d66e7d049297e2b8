#include <doctest.h>

#include <cmath>

#include "plbench/topology.hpp"

using namespace plbench;

TEST_CASE("two-node path mixes to the averaging matrix with gap 1") {
  const auto m = laplacian_mixing(Graph::path(2));
  CHECK(m.w(0, 0) == doctest::Approx(0.5));
  CHECK(m.w(0, 1) == doctest::Approx(0.5));
  CHECK(m.gap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("32-node path hits the closed-form gap") {
  const auto m = laplacian_mixing(Graph::path(32));
  const double expected = (1.0 - std::cos(M_PI / 32)) / (1.0 + std::cos(M_PI / 32));
  CHECK(std::abs(m.gap - expected) < 1e-10);
  CHECK(m.gap == doctest::Approx(0.0024).epsilon(0.01));
}

TEST_CASE("complete graph of three nodes has gap 1") {
  const auto m = laplacian_mixing(Graph::complete(3));
  CHECK(m.gap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disconnected graphs are rejected") {
  CHECK_THROWS_AS(laplacian_mixing(Graph(4, {{0, 1}, {2, 3}})), topology_error);
}

TEST_CASE("iota closed forms") {
  CHECK(iota(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(iota(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const double s = std::sqrt(2.0) / 2.0;
  CHECK(iota(4) == doctest::Approx((1 - s) / (1 + s)).epsilon(1e-14));
  CHECK(iota(4) == doctest::Approx(0.17157).epsilon(1e-4));
  for (int m = 2; m < 40; ++m) CHECK(iota(m) > iota(m + 1));
}

TEST_CASE("mixing_for_gap lands on the plain path at an exact iota") {
  const auto res = mixing_for_gap(iota(5));
  CHECK(res.graph.size() == 5);
  CHECK(res.weight_l == doctest::Approx(0.0));
  CHECK(std::abs(res.mixing.gap - iota(5)) <= 1e-10);
}

TEST_CASE("mixing_for_gap at gamma=1 is the fully averaged triangle") {
  const auto res = mixing_for_gap(1.0);
  CHECK(res.graph.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(res.mixing.w(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(res.mixing.gap == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mixing_for_gap near the 32-path gap picks 32 nodes") {
  const auto res = mixing_for_gap(0.0024);
  CHECK(res.graph.size() == 32);
  CHECK(std::abs(res.mixing.gap - 0.0024) <= 1e-8);
}

TEST_CASE("mixing_for_gap hits log-spaced targets and passes validation") {
  for (int k = 0; k < 8; ++k) {
    const double gamma = std::pow(10.0, -2.5 * (7 - k) / 7.0);
    const auto res = mixing_for_gap(gamma, 1e-10);
    CHECK(std::abs(res.mixing.gap - gamma) <= 1e-8);
    const auto rep = validate_mixing(res.mixing, res.graph, gamma - 1e-9);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("mixing_for_gap is deterministic") {
  const auto a = mixing_for_gap(0.017);
  const auto b = mixing_for_gap(0.017);
  REQUIRE(a.mixing.size() == b.mixing.size());
  for (int i = 0; i < a.mixing.size(); ++i)
    for (int j = 0; j < a.mixing.size(); ++j)
      CHECK(a.mixing.w(i, j) == b.mixing.w(i, j));
}

TEST_CASE("validate_mixing flags a negated off-diagonal") {
  auto m = laplacian_mixing(Graph::path(4));
  m.w(1, 2) = -m.w(1, 2);
  m.w(2, 1) = m.w(1, 2);
  const auto rep = validate_mixing(m, Graph::path(4), 0.0);
  CHECK_FALSE((rep.symmetric_stochastic && rep.pattern_matches_graph));
}

TEST_CASE("validate_mixing flags the identity for any positive gamma") {
  MixingMatrix m;
  m.w = DenseMatrix::identity(5);
  m.lambda2 = 1.0;
  m.gap = 0.0;
  const auto rep = validate_mixing(m, Graph::path(5), 0.01);
  CHECK(rep.symmetric_stochastic);
  CHECK(rep.pattern_matches_graph);
  CHECK_FALSE(rep.gap_at_least);
}

TEST_CASE("graph presets and BFS distances") {
  const auto g = Graph::from_preset("linear:6");
  CHECK(g.size() == 6);
  const auto dist = g.bfs_distances({0});
  CHECK(dist[5] == 5);
  const auto ring = Graph::from_preset("ring:6");
  CHECK(ring.bfs_distances({0})[3] == 3);
  CHECK(Graph::from_preset("complete:4").edges().size() == 6);
  CHECK_THROWS_AS(Graph::from_preset("torus:4"), topology_error);
  CHECK_THROWS_AS(Graph::from_preset("linear"), topology_error);
}

TEST_CASE("edge list parsing with weights") {
  EdgeWeights w;
  const auto g = Graph::from_edge_list("1 2 0.5\n2 3\n", &w);
  CHECK(g.size() == 3);
  CHECK(g.has_edge(0, 1));
  CHECK(w.at({0, 1}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Graph::from_edge_list("1\n"), topology_error);
  CHECK_THROWS_AS(Graph::from_edge_list("0 1\n"), topology_error);
}
