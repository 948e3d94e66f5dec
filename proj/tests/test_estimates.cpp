#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "krontrace/estimates.hpp"

using namespace kt;

TEST_CASE("exponent fit recovers a pure power law") {
  std::vector<double> xs, ys;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    xs.push_back(x);
    ys.push_back(3.0 * std::pow(x, 2.5));
  }
  ReportFit f = exponent_fit(xs, ys);
  CHECK(f.exponent == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(f.constant == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.residual <= 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::vector<double> nx, ny;
  for (int k = 0; k < 20; ++k) {
    double x = std::pow(2.0, 0.5 * k);
    nx.push_back(x);
    ny.push_back(3.0 * std::pow(x, 2.5) * (1.0 + noise(rng)));
  }
  ReportFit g = exponent_fit(nx, ny);
  CHECK(std::abs(g.exponent - 2.5) < 0.1);
  CHECK(g.residual > 0);
}

TEST_CASE("jump identity on the star") {
  // chat(i,j) = c_i c_j / S, all distances 2, omega = c/S: with
  // Psi(2) = 2/S every kernel comparison collapses to exactly 1
  GeneratedDomain dom = gen_star({1.0, 2.0, 3.0});
  TraceForm tf = schur_trace(dom.net);
  VertexMeasure om = harmonic_measure(dom.net, 0);
  ThetaField th(dom.geom, ScaleFunction::tabulated({2.0}, {1.0 / 3.0}), om,
                dom.net.m0);
  Report rep = jump_kernel_report(tf, th);
  CHECK((int)rep.samples.size() == 6);
  for (const ReportSample& s : rep.samples)
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-10));
  // one distinct distance leaves nothing to regress against
  CHECK_FALSE(rep.has_fit);
}

TEST_CASE("exit time from sibling pairs matches the 2x2 solve") {
  GeneratedDomain dom = gen_sg_slit(3);
  TraceForm tf = schur_trace(dom.net);
  VertexMeasure sigma;
  sigma.mass = dom.sigma_uniform;
  ThetaField th(dom.geom, ScaleFunction::power(std::log2(5.0)), sigma,
                dom.net.m0);

  // r = 0.2 captures exactly each word and its sibling (distance 0.1875,
  // next scale 0.375)
  Report rep = exit_time_report(tf, th, {0.2});
  REQUIRE((int)rep.samples.size() == dom.geom.b);

  std::vector<double> diag(tf.b);
  for (int i = 0; i < tf.b; ++i) {
    double s = tf.kappa[i];
    for (int j = 0; j < tf.b; ++j)
      if (j != i) s += tf.chat(i, j);
    diag[i] = s;
  }
  for (const ReportSample& s : rep.samples) {
    std::string id = s.label.substr(2, s.label.find(' ') - 2);
    int x = -1;
    for (int i = 0; i < tf.b; ++i)
      if (tf.ids[i] == id) x = i;
    REQUIRE(x >= 0);
    int y = -1;
    for (int j = 0; j < tf.b; ++j)
      if (j != x && dom.geom.rho(x, j) <= 0.2) {
        REQUIRE(y == -1);
        y = j;
      }
    REQUIRE(y >= 0);
    double lxy = -tf.chat(x, y);
    double det = diag[x] * diag[y] - lxy * lxy;
    double ux = (diag[y] * sigma.mass[x] - lxy * sigma.mass[y]) / det;
    CHECK(s.value == doctest::Approx(ux / th.theta(x, 0.2)).epsilon(1e-9));
  }

  // singleton balls carry no exit time
  CHECK_THROWS_AS(exit_time_report(tf, th, {0.1}), NoAdmissibleScales);
}

TEST_CASE("killing report on both sides of the ghost") {
  GeneratedDomain sg = gen_sg_slit(3);
  TraceForm tf = schur_trace(sg.net);
  VertexMeasure om = harmonic_measure(sg.net, sg.deep_vertex);
  Report clean = killing_report(tf, om);
  CHECK(clean.pass);
  CHECK((int)clean.samples.size() == tf.b);

  GeneratedDomain strip = gen_half_strip(8, 8, FarMode::absorbing);
  TraceForm tk = schur_trace(strip.net);
  REQUIRE(tk.source_has_ghost);
  VertexMeasure omk = harmonic_measure(strip.net, strip.deep_vertex);
  Report rep = killing_report(tk, omk);
  CHECK((int)rep.samples.size() == tk.b);
  CHECK(rep.min_value > 0);
  CHECK(std::isfinite(rep.ratio));
  CHECK(rep.note.find("sum kappa") != std::string::npos);

  double total_kappa = 0;
  for (double k : tk.kappa) total_kappa += k;
  std::vector<double> ones(tk.b, 1.0);
  CHECK(total_kappa ==
        doctest::Approx(trace_energy(tk, ones)).epsilon(1e-12));
}

TEST_CASE("capacity doubling never drops below one") {
  GeneratedDomain dom = gen_sg_slit(3);
  Report rep = cap_doubling_report(dom, 8);
  CHECK_FALSE(rep.samples.empty());
  for (const ReportSample& s : rep.samples) CHECK(s.value >= 1.0 - 1e-10);

  Report cd = cap_density_report(dom, ScaleFunction::power(std::log2(5.0)), 8);
  CHECK_FALSE(cd.samples.empty());
  CHECK(cd.min_value > 0);
}

TEST_CASE("doubling scales need room around the pole") {
  GeneratedDomain star = gen_star({2.0, 2.0, 2.0, 2.0, 2.0});
  CHECK_THROWS_AS(hm_doubling_report(star, {0}), NoAdmissibleScales);
}

TEST_CASE("green function against the occupation density") {
  GeneratedDomain dom = gen_sg_slit(3);
  VertexMeasure om = harmonic_measure(dom.net, dom.deep_vertex);
  ThetaField th(dom.geom, ScaleFunction::power(std::log2(5.0)), om,
                dom.net.m0);
  Report rep = green_hm_report(dom, th, dom.deep_vertex, 8);
  CHECK_FALSE(rep.samples.empty());
  CHECK(rep.min_value > 0);
  CHECK(std::isfinite(rep.ratio));
}

TEST_CASE("spectrum diagonalizes the trace form") {
  GeneratedDomain dom = gen_sg_slit(2);
  TraceForm tf = schur_trace(dom.net);
  VertexMeasure sigma;
  sigma.mass = dom.sigma_uniform;
  SpectralData sd = trace_spectrum(tf, sigma);
  REQUIRE(sd.b == tf.b);
  for (int k = 1; k < sd.b; ++k) CHECK(sd.lambda[k] >= sd.lambda[k - 1]);
  // conservative form: constants are harmonic
  CHECK(std::abs(sd.lambda[0]) <= 1e-10 * sd.lambda[sd.b - 1]);

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(sd.b, sd.b);
  for (int i = 0; i < sd.b; ++i) D(i, i) = sd.omega[i];
  Eigen::MatrixXd gram = sd.phi.transpose() * D * sd.phi;
  CHECK((gram - Eigen::MatrixXd::Identity(sd.b, sd.b)).cwiseAbs().maxCoeff() <=
        1e-10);
  // omega-orthonormal columns invert the weighting exactly
  CHECK((sd.phi * sd.phi.transpose() * D -
         Eigen::MatrixXd::Identity(sd.b, sd.b))
            .cwiseAbs()
            .maxCoeff() <= 1e-9);

  GeneratedDomain strip = gen_half_strip(8, 8, FarMode::absorbing);
  TraceForm tk = schur_trace(strip.net);
  VertexMeasure u9;
  u9.mass.assign(tk.b, 1.0 / tk.b);
  SpectralData sk = trace_spectrum(tk, u9);
  CHECK(sk.lambda[0] > 1e-6);
}

TEST_CASE("heat kernel limits and mass") {
  GeneratedDomain dom = gen_sg_slit(2);
  TraceForm tf = schur_trace(dom.net);
  VertexMeasure sigma;
  sigma.mass = dom.sigma_uniform;
  SpectralData sd = trace_spectrum(tf, sigma);

  Eigen::MatrixXd p0 = heat_kernel(sd, 1e-14);
  for (int x = 0; x < sd.b; ++x)
    for (int y = 0; y < sd.b; ++y) {
      double v = p0(x, y) * sd.omega[y];
      if (x == y)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
      else
        CHECK(std::abs(v) <= 1e-8);
    }

  // t large enough to kill lambda_1 while lambda_0 ~ 1e-16 stays harmless
  Eigen::MatrixXd pinf = heat_kernel(sd, 1e6);
  for (int x = 0; x < sd.b; ++x)
    for (int y = 0; y < sd.b; ++y)
      CHECK(pinf(x, y) == doctest::Approx(1.0 / sd.omega_total).epsilon(1e-6));

  // conservative: unit mass at every time
  Eigen::MatrixXd pm = heat_kernel(sd, 0.5);
  CHECK((pm - pm.transpose()).cwiseAbs().maxCoeff() <=
        1e-12 * pm.cwiseAbs().maxCoeff());
  for (int x = 0; x < sd.b; ++x) {
    double m = 0;
    for (int y = 0; y < sd.b; ++y) m += pm(x, y) * sd.omega[y];
    CHECK(m == doctest::Approx(1.0).epsilon(1e-8));
  }

  // killing bleeds mass monotonically
  GeneratedDomain strip = gen_half_strip(8, 8, FarMode::absorbing);
  TraceForm tk = schur_trace(strip.net);
  VertexMeasure u9;
  u9.mass.assign(tk.b, 1.0 / tk.b);
  SpectralData sk = trace_spectrum(tk, u9);
  double prev = 1.0 + 1e-12;
  for (double t : {0.01, 0.1, 1.0, 10.0}) {
    Eigen::MatrixXd p = heat_kernel(sk, t);
    double m = 0;
    for (int y = 0; y < sk.b; ++y) m += p(4, y) * sk.omega[y];
    CHECK(m < prev);
    CHECK(m > 0);
    prev = m;
  }
}

TEST_CASE("on-diagonal decay carries a negative slope") {
  GeneratedDomain dom = gen_sg_slit(4);
  TraceForm tf = schur_trace(dom.net);
  VertexMeasure om = harmonic_measure(dom.net, dom.deep_vertex);
  ThetaField th(dom.geom, ScaleFunction::power(std::log2(5.0)), om,
                dom.net.m0);
  Report rep = hk_report(tf, th, admissible_radii(dom), 8, 8);
  REQUIRE(rep.has_fit);
  CHECK(rep.fit.exponent < -0.2);
  CHECK(rep.fit.exponent > -1.5);
  CHECK_FALSE(rep.samples.empty());
}
