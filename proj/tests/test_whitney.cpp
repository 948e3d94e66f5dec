#include <doctest.h>

#include <cmath>
#include <vector>

#include "krontrace/sampling.hpp"
#include "krontrace/whitney.hpp"

using namespace kt;

TEST_CASE("cover radii and ball disjointness") {
  GeneratedDomain dom = gen_sg_slit(3);
  WhitneyCover cov = build_cover(dom, 0.125);
  REQUIRE_FALSE(cov.centers.empty());
  CHECK(cov.floor_dD == doctest::Approx(4.0 * dom.geom.edge_length));

  for (size_t i = 0; i < cov.centers.size(); ++i) {
    double expect = 0.125 / 1.125 * dom.geom.d_D[cov.centers[i]];
    CHECK(cov.radii[i] == doctest::Approx(expect).epsilon(1e-15));
    CHECK_FALSE(dom.net.is_boundary[cov.centers[i]]);
  }

  // greedy admission leaves no vertex inside two balls
  for (size_t i = 0; i < cov.centers.size(); ++i)
    for (size_t j = i + 1; j < cov.centers.size(); ++j)
      for (int v = 0; v < dom.net.n; ++v) {
        bool both = cov.center_dist[i][v] <= cov.radii[i] &&
                    cov.center_dist[j][v] <= cov.radii[j];
        CHECK_FALSE(both);
      }
}

TEST_CASE("every vertex above the floor is covered") {
  GeneratedDomain dom = gen_sg_slit(3);
  WhitneyCover cov = build_cover(dom);
  PartitionOfUnity pou = partition_of_unity(dom, cov);
  for (int v : dom.net.interior)
    if (dom.geom.d_D[v] >= cov.floor_dD) CHECK(pou.coverage[v] > 0);
  CHECK(cover_stats(dom, cov, 2.0).uncovered_above_floor == 0);
}

TEST_CASE("partition sums to one on covered vertices") {
  GeneratedDomain dom = gen_sg_slit(3);
  WhitneyCover cov = build_cover(dom);
  PartitionOfUnity pou = partition_of_unity(dom, cov);

  std::vector<double> sum(dom.net.n, 0.0);
  for (size_t i = 0; i < cov.centers.size(); ++i)
    for (auto [v, w] : pou.psi[i]) {
      CHECK(w >= 0);
      CHECK(w <= 1.0 + 1e-12);
      // tents vanish past half the center depth when eps = 1/8
      CHECK(cov.center_dist[i][v] <=
            0.5 * dom.geom.d_D[cov.centers[i]] + 1e-12);
      sum[v] += w;
    }
  for (int v = 0; v < dom.net.n; ++v)
    if (pou.coverage[v] > 0) CHECK(sum[v] == doctest::Approx(1.0).epsilon(1e-12));

  for (double e : pou.hat_energy) CHECK(e > 0);
}

TEST_CASE("cover stats overlap and neighbor comparability") {
  GeneratedDomain dom = gen_half_strip(12, 10, FarMode::reflecting);
  WhitneyCover cov = build_cover(dom);

  // undilated balls are disjoint by construction
  CoverStats tight = cover_stats(dom, cov, 1.0);
  CHECK(tight.max_overlap == 1);
  CHECK(tight.neighbor_ratio == 1.0);

  CoverStats st = cover_stats(dom, cov, 2.0);
  CHECK(st.center_count == (int)cov.centers.size());
  CHECK(st.min_radius > 0);
  CHECK(st.neighbor_ratio <= st.neighbor_ratio_bound + 1e-12);
  CHECK(st.uncovered_above_floor == 0);

  Report rep = cover_stats_report(dom, cov, 2.0);
  CHECK(rep.pass);

  CHECK_THROWS_AS(cover_stats(dom, cov, 9.5), DataError);
  CHECK_THROWS_AS(build_cover(dom, 0.2), DataError);
}

TEST_CASE("floor can swallow a shallow domain") {
  CHECK_THROWS_AS(build_cover(gen_path(3)), ResolutionTooCoarse);
}

TEST_CASE("extension fixes the boundary and preserves constants") {
  GeneratedDomain dom = gen_sg_slit(3);
  WhitneyCover cov = build_cover(dom);
  PartitionOfUnity pou = partition_of_unity(dom, cov);
  std::vector<double> sigma = dom.sigma_uniform;

  std::vector<double> u(dom.geom.b);
  for (int j = 0; j < dom.geom.b; ++j) u[j] = std::cos(1.3 * j);
  std::vector<double> f = extend(dom, cov, pou, u, sigma);
  REQUIRE((int)f.size() == dom.net.n);
  for (int j = 0; j < dom.geom.b; ++j)
    CHECK(f[dom.geom.boundary[j]] == u[j]);

  std::vector<double> c(dom.geom.b, 2.75);
  std::vector<double> fc = extend(dom, cov, pou, c, sigma);
  for (double v : fc) CHECK(v == doctest::Approx(2.75).epsilon(1e-12));

  // blending is linear in the boundary data
  std::vector<double> v(dom.geom.b), uv(dom.geom.b);
  for (int j = 0; j < dom.geom.b; ++j) {
    v[j] = std::sin(0.7 * j + 0.2);
    uv[j] = 2.0 * u[j] - 3.0 * v[j];
  }
  std::vector<double> fu = extend(dom, cov, pou, u, sigma);
  std::vector<double> fv = extend(dom, cov, pou, v, sigma);
  std::vector<double> fuv = extend(dom, cov, pou, uv, sigma);
  for (int w = 0; w < dom.net.n; ++w)
    CHECK(fuv[w] == doctest::Approx(2.0 * fu[w] - 3.0 * fv[w]).epsilon(1e-11));
}

TEST_CASE("extension and restriction reports stay finite") {
  GeneratedDomain dom = gen_sg_slit(3);
  WhitneyCover cov = build_cover(dom);
  PartitionOfUnity pou = partition_of_unity(dom, cov);
  VertexMeasure sigma;
  sigma.mass = dom.sigma_uniform;
  ThetaField th(dom.geom, ScaleFunction::power(std::log2(5.0)), sigma,
                dom.net.m0);
  BesovKernel k = besov_kernel(th);

  Report ext = extension_report(dom, cov, pou, k, sigma.mass,
                                boundary_fields(dom, 10, 0x61u));
  CHECK_FALSE(ext.samples.empty());
  CHECK(ext.min_value > 0);
  CHECK(std::isfinite(ext.max_value));

  // interior bumps restrict to zero, which is a valid sample here
  Report restr =
      restriction_report(dom.net, k, interior_fields(dom, 10, 0x62u));
  CHECK_FALSE(restr.samples.empty());
  CHECK(restr.min_value >= 0);
  CHECK(restr.max_value > 0);
  CHECK(std::isfinite(restr.max_value));
}
