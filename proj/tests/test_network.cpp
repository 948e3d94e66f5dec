#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "krontrace/network.hpp"

using namespace kt;

namespace {

// 0 -- 1 -- 2 with boundary ends, conductances 2 and 3, unit interior mass
ResistanceNetwork tiny_path() {
  return build_network({"a", "b", "c"}, {{0, 1, 2.0}, {1, 2, 3.0}},
                       {0.0, 1.0, 0.0}, {1, 0, 1});
}

}  // namespace

TEST_CASE("build_network partitions and adjacency") {
  ResistanceNetwork net = tiny_path();
  CHECK(net.n == 3);
  CHECK(net.boundary == std::vector<int>{0, 2});
  CHECK(net.interior == std::vector<int>{1});
  CHECK(net.part_pos[0] == 0);
  CHECK(net.part_pos[1] == 0);
  CHECK(net.part_pos[2] == 1);
  CHECK_FALSE(net.has_ghost());

  REQUIRE(net.adj[1].size() == 2);
  double to_a = 0, to_c = 0;
  for (auto [w, c] : net.adj[1]) (w == 0 ? to_a : to_c) = c;
  CHECK(to_a == 2.0);
  CHECK(to_c == 3.0);
}

TEST_CASE("energy matches the hand-expanded sum") {
  ResistanceNetwork net = tiny_path();
  VertexFunction f = {1.0, 0.5, -1.0};
  // 2*(1-0.5)^2 + 3*(0.5+1)^2 = 0.5 + 6.75
  CHECK(energy(net, f) == doctest::Approx(7.25).epsilon(1e-15));

  ResistanceNetwork leaky = build_network(
      {"a", "b", "c"}, {{0, 1, 2.0}, {1, 2, 3.0}}, {0.0, 1.0, 0.0}, {1, 0, 1},
      {0.0, 0.5, 0.0});
  // ghost pinned at 0 adds 0.5 * f_b^2
  CHECK(energy(leaky, f) == doctest::Approx(7.25 + 0.5 * 0.25).epsilon(1e-15));
}

TEST_CASE("bilinear energy by polarization") {
  ResistanceNetwork net = tiny_path();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int k = 0; k < 10; ++k) {
    VertexFunction f = {g(rng), g(rng), g(rng)};
    VertexFunction h = {g(rng), g(rng), g(rng)};
    VertexFunction fp(3), fm(3);
    for (int i = 0; i < 3; ++i) {
      fp[i] = f[i] + h[i];
      fm[i] = f[i] - h[i];
    }
    double polarized = (energy(net, fp) - energy(net, fm)) / 4.0;
    CHECK(energy(net, f, h) == doctest::Approx(polarized).epsilon(1e-12));
  }
}

TEST_CASE("laplacian quadratic form equals the energy") {
  ResistanceNetwork net = build_network(
      {"a", "b", "c", "d"},
      {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {0, 3, 4.0}},
      {0.0, 1.0, 1.0, 0.0}, {1, 0, 0, 1}, {0.0, 0.25, 0.0, 0.0});
  Eigen::MatrixXd L = Eigen::MatrixXd(laplacian(net));
  CHECK((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int k = 0; k < 8; ++k) {
    Eigen::VectorXd f(4);
    VertexFunction fv(4);
    for (int i = 0; i < 4; ++i) fv[i] = f[i] = g(rng);
    CHECK(f.dot(L * f) == doctest::Approx(energy(net, fv)).epsilon(1e-12));
  }

  // row sums recover the ghost conductances
  for (int v = 0; v < 4; ++v)
    CHECK(L.row(v).sum() == doctest::Approx(net.ghost_c[v]).epsilon(1e-14));
}

TEST_CASE("validate reports structure") {
  NetworkDiagnostics d = validate(tiny_path());
  CHECK(d.connected);
  CHECK(d.boundary_count == 2);
  CHECK(d.interior_count == 1);
  CHECK(d.min_degree == 1);
  CHECK(d.max_degree == 2);
  CHECK(d.m0_interior_total == 1.0);
  CHECK(d.c_min == 2.0);
  CHECK(d.c_max == 3.0);
}

TEST_CASE("construction rejects malformed input") {
  CHECK_THROWS_AS(build_network({}, {}, {}, {}), InvalidNetwork);
  CHECK_THROWS_AS(
      build_network({"a", "b"}, {{0, 1, -1.0}}, {0.0, 1.0}, {1, 0}),
      NonpositiveConductance);
  CHECK_THROWS_AS(build_network({"a", "b"}, {{0, 0, 1.0}}, {0.0, 1.0}, {1, 0}),
                  InvalidNetwork);
  CHECK_THROWS_AS(build_network({"a", "b"}, {{0, 1, 1.0}, {1, 0, 2.0}},
                                {0.0, 1.0}, {1, 0}),
                  DuplicateEdge);
  // boundary must not carry reference mass
  CHECK_THROWS_AS(build_network({"a", "b"}, {{0, 1, 1.0}}, {0.5, 1.0}, {1, 0}),
                  InvalidNetwork);
  // two components
  CHECK_THROWS_AS(
      build_network({"a", "b", "c", "d"}, {{0, 1, 1.0}, {2, 3, 1.0}},
                    {0.0, 1.0, 1.0, 0.0}, {1, 0, 0, 1}),
      DisconnectedGraph);
  CHECK_THROWS_AS(
      build_network({"a", "b"}, {{0, 1, 1.0}}, {0.0, 0.0}, {1, 1}),
      EmptyInterior);
}

TEST_CASE("measure total") {
  VertexMeasure m;
  m.mass = {0.25, 0.5, 0.125};
  CHECK(m.total() == doctest::Approx(0.875).epsilon(1e-15));
}
