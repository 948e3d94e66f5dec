#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "krontrace/generators.hpp"
#include "krontrace/potential.hpp"

using namespace kt;

TEST_CASE("harmonic measure of a star is the conductance profile") {
  GeneratedDomain star = gen_star({1.0, 2.0, 3.0});
  int center = star.net.interior[0];
  VertexMeasure om = harmonic_measure(star.net, center);
  REQUIRE(om.mass.size() == 3);
  CHECK(om.mass[0] == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(om.mass[1] == doctest::Approx(2.0 / 6).epsilon(1e-14));
  CHECK(om.mass[2] == doctest::Approx(3.0 / 6).epsilon(1e-14));
  CHECK(om.total() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(om.role == MeasureRole::omega);
}

TEST_CASE("harmonic measure requires an interior pole") {
  GeneratedDomain star = gen_star({1.0, 1.0});
  CHECK_THROWS_AS(harmonic_measure(star.net, star.net.boundary[0]),
                  NotInterior);
}

TEST_CASE("harmonic extension obeys the maximum principle") {
  GeneratedDomain dom = gen_sg_slit(2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(-2.0, 2.0);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> g(dom.net.boundary_count());
    for (double& v : g) v = u01(rng);
    double lo = *std::min_element(g.begin(), g.end());
    double hi = *std::max_element(g.begin(), g.end());
    VertexFunction h = harmonic_extension(dom.net, g);
    for (int v = 0; v < dom.net.n; ++v) {
      CHECK(h[v] >= lo - 1e-12);
      CHECK(h[v] <= hi + 1e-12);
    }
    // boundary data passes through untouched
    for (int i = 0; i < dom.net.boundary_count(); ++i)
      CHECK(h[dom.net.boundary[i]] == g[i]);
  }
}

TEST_CASE("extension through a prebuilt solver matches") {
  GeneratedDomain dom = gen_sg_slit(2);
  ConstrainedSolver interior(dom.net, dom.net.interior);
  std::vector<double> g(dom.net.boundary_count());
  for (int i = 0; i < (int)g.size(); ++i) g[i] = std::sin(1.0 + i);
  VertexFunction a = harmonic_extension(dom.net, g);
  VertexFunction b = harmonic_extension(interior, g);
  for (int v = 0; v < dom.net.n; ++v)
    CHECK(a[v] == doctest::Approx(b[v]).epsilon(1e-14));
}

TEST_CASE("series capacity on a path") {
  // 0 -2- 1 -3- 2: grounding everything outside {0,1} pins vertex 2
  ResistanceNetwork net =
      build_network({"a", "b", "c"}, {{0, 1, 2.0}, {1, 2, 3.0}},
                    {0.0, 1.0, 0.0}, {1, 0, 1});
  double cap = capacity(net, {0}, {0, 1});
  CHECK(cap == doctest::Approx(1.0 / (1.0 / 2 + 1.0 / 3)).epsilon(1e-12));
  // enlarging the allowed region cannot raise the energy minimum
  CHECK(capacity(net, {0}, {0}) >= cap - 1e-12);
}

TEST_CASE("green function on a short path") {
  ResistanceNetwork net =
      build_network({"a", "b", "c"}, {{0, 1, 2.0}, {1, 2, 3.0}},
                    {0.0, 1.0, 0.0}, {1, 0, 1});
  // single free vertex: g = 1 / (c_ab + c_bc)
  CHECK(green_function(net, {1}, 1, 1) ==
        doctest::Approx(1.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("green function symmetry and interior row") {
  GeneratedDomain dom = gen_sg_slit(2);
  const std::vector<int>& I = dom.net.interior;
  int x = I[1], y = I[I.size() / 2];
  double gxy = green_function(dom.net, I, x, y);
  double gyx = green_function(dom.net, I, y, x);
  CHECK(gxy == doctest::Approx(gyx).epsilon(1e-11));
  CHECK(gxy > 0);

  // full-length row, zero on the boundary
  std::vector<double> row = green_row_interior(dom.net, x);
  CHECK(row[y] == doctest::Approx(gxy).epsilon(1e-11));
  for (int i = 0; i < dom.net.boundary_count(); ++i)
    CHECK(row[dom.net.boundary[i]] == 0.0);
}

TEST_CASE("equilibrium potential ranges over [0,1]") {
  GeneratedDomain dom = gen_sg_slit(2);
  std::vector<int> K = {dom.deep_vertex};
  VertexFunction e = equilibrium_potential(dom.net, K);
  CHECK(e[dom.deep_vertex] == 1.0);
  for (int i = 0; i < dom.net.boundary_count(); ++i)
    CHECK(e[dom.net.boundary[i]] == 0.0);
  for (int v = 0; v < dom.net.n; ++v) {
    CHECK(e[v] >= -1e-13);
    CHECK(e[v] <= 1.0 + 1e-13);
  }
}

TEST_CASE("sweeping is dominated by the harmonic extension") {
  GeneratedDomain dom = gen_sg_slit(2);
  std::vector<int> K = {dom.deep_vertex};
  std::vector<double> h(dom.net.boundary_count());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (double& v : h) v = u01(rng);

  VertexFunction Hh = harmonic_extension(dom.net, h);
  VertexFunction sw = sweep(dom.net, h, K);
  for (int v = 0; v < dom.net.n; ++v) CHECK(sw[v] <= Hh[v] + 1e-12);
  for (int v : K) CHECK(sw[v] == 0.0);

  // the swept-out mass functional lies between the extremes of Hh on K
  double c = c_functional(dom.net, h, K);
  double lo = 1e300, hi = -1e300;
  for (int v : K) {
    lo = std::min(lo, Hh[v]);
    hi = std::max(hi, Hh[v]);
  }
  CHECK(c >= lo - 1e-11);
  CHECK(c <= hi + 1e-11);
}

TEST_CASE("equilibrium boundary measure splits a symmetric star evenly") {
  GeneratedDomain star = gen_star({1.0, 1.0});
  std::vector<int> K = {star.net.interior[0]};
  VertexMeasure mu = equilibrium_boundary_measure(star.net, K);
  CHECK(mu.mass[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(mu.mass[1] == doctest::Approx(0.5).epsilon(1e-13));

  // total mass is the constant-data functional
  std::vector<double> ones(star.net.boundary_count(), 1.0);
  CHECK(mu.total() ==
        doctest::Approx(c_functional(star.net, ones, K)).epsilon(1e-12));
}

TEST_CASE("solver validates its free set") {
  GeneratedDomain star = gen_star({1.0, 1.0});
  CHECK_THROWS_AS(ConstrainedSolver(star.net, {0, 0}), BadSet);
  CHECK_THROWS_AS(ConstrainedSolver(star.net, {99}), BadSet);
}

TEST_CASE("cg and direct solves agree") {
  GeneratedDomain dom = gen_half_strip(8, 12, FarMode::absorbing);
  std::vector<double> g(dom.net.boundary_count());
  for (int i = 0; i < (int)g.size(); ++i) g[i] = std::cos(0.7 * i);

  SolverConfig direct;
  direct.method = SolverConfig::Method::direct;
  SolverConfig cg;
  cg.method = SolverConfig::Method::cg;
  cg.tol = 1e-13;

  VertexFunction a = harmonic_extension(dom.net, g, direct);
  VertexFunction b = harmonic_extension(dom.net, g, cg);
  double worst = 0;
  for (int v = 0; v < dom.net.n; ++v) worst = std::max(worst, std::abs(a[v] - b[v]));
  CHECK(worst < 1e-9);
}
