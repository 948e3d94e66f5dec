#include "krontrace/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "krontrace/parallel.hpp"

namespace kt {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// closed ambient ball around boundary position bpos
std::vector<int> ambient_ball(const BoundaryGeometry& g, int bpos, double r) {
  std::vector<int> out;
  for (int v = 0; v < g.n; ++v)
    if (g.rho_vertex_boundary(v, bpos) <= r) out.push_back(v);
  return out;
}

std::vector<int> boundary_ambient_ball(const ResistanceNetwork& net,
                                       const BoundaryGeometry& g, int bpos,
                                       double r) {
  std::vector<int> out;
  for (int z : net.boundary)
    if (g.rho_vertex_boundary(z, bpos) <= r) out.push_back(z);
  return out;
}

double omega_ball(const BoundaryGeometry& g, const std::vector<double>& mass,
                  int bpos, double r) {
  double s = 0;
  for (int j = 0; j < g.b; ++j)
    if (g.rho(bpos, j) <= r) s += mass[j];
  return s;
}

}  // namespace

Report hm_doubling_report(const GeneratedDomain& dom,
                          const std::vector<int>& poles, int max_centers,
                          SolverConfig cfg) {
  const BoundaryGeometry& g = dom.geom;
  std::vector<double> radii = admissible_radii(dom);
  std::vector<int> centers = spread_indices(g.b, max_centers);
  Report rep;
  rep.name = "hm-doubling";
  for (int x0 : poles) {
    VertexMeasure om = harmonic_measure(dom.net, x0, cfg);
    for (int x : centers) {
      double dpole = g.rho_vertex_boundary(x0, x);
      for (double r : radii) {
        if (!(r < dpole / 4) || !(r <= g.diam_boundary / 4)) continue;
        double small = omega_ball(g, om.mass, x, r);
        double big = omega_ball(g, om.mass, x, 2 * r);
        if (!(small > 0)) continue;
        ReportSample s;
        s.label = "x0=" + dom.net.ids[x0] + " x=" +
                  dom.net.ids[g.boundary[x]] + " r=" + fmt(r);
        s.x = r;
        s.lhs = big;
        s.rhs = small;
        s.value = big / small;
        rep.samples.push_back(s);
      }
    }
  }
  if (rep.samples.empty()) throw NoAdmissibleScales(rep.name);
  finalize(rep);
  return rep;
}

Report cap_doubling_report(const GeneratedDomain& dom, int max_centers,
                           SolverConfig cfg) {
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  std::vector<double> radii = admissible_radii(dom);
  std::vector<int> centers = spread_indices(g.b, max_centers);

  struct Task {
    int x;
    double r;
  };
  std::vector<Task> tasks;
  for (int x : centers)
    for (double r : radii)
      if (r <= g.diam_boundary / 4) tasks.push_back({x, r});
  std::vector<double> small_cap(tasks.size(), -1), big_cap(tasks.size(), -1);

  parallel_for((int)tasks.size(), [&](int t) {
    auto [x, r] = tasks[t];
    std::vector<int> outer = ambient_ball(g, x, 4 * r);
    if ((int)outer.size() == net.n && !net.has_ghost()) return;
    std::vector<int> o1s = boundary_ambient_ball(net, g, x, r);
    std::vector<int> o1b = boundary_ambient_ball(net, g, x, 2 * r);
    if (o1s.empty()) return;
    small_cap[t] = capacity(net, o1s, outer, cfg);
    big_cap[t] = capacity(net, o1b, outer, cfg);
  });

  Report rep;
  rep.name = "cap-doubling";
  for (size_t t = 0; t < tasks.size(); ++t) {
    if (!(small_cap[t] > 0)) continue;
    ReportSample s;
    s.label =
        "x=" + net.ids[g.boundary[tasks[t].x]] + " r=" + fmt(tasks[t].r);
    s.x = tasks[t].r;
    s.lhs = big_cap[t];
    s.rhs = small_cap[t];
    s.value = big_cap[t] / small_cap[t];
    rep.samples.push_back(s);
  }
  if (rep.samples.empty()) throw NoAdmissibleScales(rep.name);
  finalize(rep);
  return rep;
}

Report cap_density_report(const GeneratedDomain& dom, const ScaleFunction& psi,
                          int max_centers, SolverConfig cfg) {
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  std::vector<double> radii = admissible_radii(dom);
  std::vector<int> centers = spread_indices(g.b, max_centers);

  struct Task {
    int x;
    double r;
  };
  std::vector<Task> tasks;
  for (int x : centers)
    for (double r : radii)
      if (r < g.diam_boundary / 3) tasks.push_back({x, r});
  std::vector<double> caps(tasks.size(), -1), m0b(tasks.size(), 0);

  parallel_for((int)tasks.size(), [&](int t) {
    auto [x, r] = tasks[t];
    std::vector<int> outer = ambient_ball(g, x, 2 * r);
    if ((int)outer.size() == net.n && !net.has_ghost()) return;
    std::vector<int> o1 = boundary_ambient_ball(net, g, x, r);
    if (o1.empty()) return;
    caps[t] = capacity(net, o1, outer, cfg);
    double m = 0;
    for (int v : ambient_ball(g, x, r)) m += net.m0[v];
    m0b[t] = m;
  });

  Report rep;
  rep.name = "cap-density";
  for (size_t t = 0; t < tasks.size(); ++t) {
    if (caps[t] < 0 || !(m0b[t] > 0)) continue;
    double r = tasks[t].r;
    ReportSample s;
    s.label = "x=" + net.ids[g.boundary[tasks[t].x]] + " r=" + fmt(r);
    s.x = r;
    s.lhs = caps[t] * psi(r);
    s.rhs = m0b[t];
    s.value = caps[t] * psi(r) / m0b[t];
    rep.samples.push_back(s);
  }
  if (rep.samples.empty()) throw NoAdmissibleScales(rep.name);
  finalize(rep);
  return rep;
}

Report green_hm_report(const GeneratedDomain& dom, const ThetaField& th,
                       int x0, int max_centers, SolverConfig cfg) {
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  std::vector<double> gf = green_row_interior(net, x0, cfg);
  std::vector<double> radii = admissible_radii(dom);
  std::vector<int> centers = spread_indices(g.b, max_centers);

  Report rep;
  rep.name = "green-hm";
  int no_witness = 0;
  for (int x : centers) {
    for (double r : radii) {
      if (!(g.rho_vertex_boundary(x0, x) > 2 * r)) continue;
      // witness: interior point of the ball at depth closest to r/2
      int best = -1;
      double best_gap = std::numeric_limits<double>::infinity();
      for (int v : net.interior) {
        if (g.rho_vertex_boundary(v, x) > r) continue;
        if (g.d_D[v] < r / 4) continue;
        double gap = std::abs(g.d_D[v] - r / 2);
        if (gap < best_gap) {
          best_gap = gap;
          best = v;
        }
      }
      if (best < 0) {
        ++no_witness;
        continue;
      }
      if (!(gf[best] > 0)) continue;
      ReportSample s;
      s.label = "x=" + net.ids[g.boundary[x]] + " r=" + fmt(r) +
                " y=" + net.ids[best];
      s.x = r;
      s.lhs = th.theta(x, r);
      s.rhs = gf[best];
      s.value = s.lhs / s.rhs;
      rep.samples.push_back(s);
    }
  }
  if (rep.samples.empty()) throw NoAdmissibleScales("all scales lack witnesses");
  if (no_witness > 0)
    rep.note = std::to_string(no_witness) + " scales without witness";
  finalize(rep);
  return rep;
}

Report jump_kernel_report(const TraceForm& tf, const ThetaField& th) {
  if (th.b() != tf.b) throw DimensionMismatch("field vs trace size");
  const BoundaryGeometry& g = th.geometry();
  const std::vector<double>& om = th.sigma();
  const int b = tf.b;

  Report rep;
  rep.name = "jump";
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0;
  int zero_pairs = 0;
  long long pairs = 0;
  std::vector<double> fit_d, fit_c;
  std::vector<ReportSample> all;
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      if (j == i) continue;
      double c = tf.chat(i, j);
      if (!(c > 0)) {
        ++zero_pairs;
        continue;
      }
      double d = g.rho(i, j);
      double ob = th.sigma_ball(i, d);
      double value = 0.5 * c * ob * th.theta(i, d) / (om[i] * om[j]);
      ++pairs;
      vmin = std::min(vmin, value);
      vmax = std::max(vmax, value);
      ReportSample s;
      s.label = "(" + tf.ids[i] + "," + tf.ids[j] + ")";
      s.x = d;
      s.lhs = 0.5 * c;
      s.rhs = om[i] * om[j] / (ob * th.theta(i, d));
      s.value = value;
      all.push_back(s);
      if (i < j) {
        fit_d.push_back(d);
        fit_c.push_back(c);
      }
    }
  if (pairs == 0) throw ZeroMass("no coupled pairs");

  // stats cover every pair; the record list is thinned when large
  std::vector<int> keep = spread_indices((int)all.size(), 5000);
  for (int k : keep) rep.samples.push_back(all[k]);

  // The exponent is fitted over the interior scales only: at the finest
  // observed distance the kernel degenerates to the nearest-neighbor
  // conductance, and the coarsest sits at the diameter cutoff. Both end
  // scales still enter the spread statistics above.
  double dmin = *std::min_element(fit_d.begin(), fit_d.end());
  double dmax = *std::max_element(fit_d.begin(), fit_d.end());
  std::vector<double> fd, fc;
  for (size_t k = 0; k < fit_d.size(); ++k)
    if (fit_d[k] > dmin && fit_d[k] < dmax) {
      fd.push_back(fit_d[k]);
      fc.push_back(fit_c[k]);
    }
  auto distinct = [](const std::vector<double>& v) {
    return std::set<double>(v.begin(), v.end()).size();
  };
  if (distinct(fd) >= 2) {
    rep.has_fit = true;
    rep.fit = exponent_fit(fd, fc);
  } else if (distinct(fit_d) >= 2) {
    rep.has_fit = true;
    rep.fit = exponent_fit(fit_d, fit_c);
  }
  finalize(rep);
  rep.min_value = vmin;
  rep.max_value = vmax;
  rep.ratio = vmin > 0 ? vmax / vmin : std::numeric_limits<double>::infinity();
  rep.note = std::to_string(pairs) + " pairs";
  if (zero_pairs > 0)
    rep.note += ", " + std::to_string(zero_pairs) + " uncoupled";
  return rep;
}

Report killing_report(const TraceForm& tf, const VertexMeasure& omega) {
  if ((int)omega.mass.size() != tf.b)
    throw DimensionMismatch("measure length");
  double total_kappa = std::accumulate(tf.kappa.begin(), tf.kappa.end(), 0.0);
  double total_omega =
      std::accumulate(omega.mass.begin(), omega.mass.end(), 0.0);
  std::vector<double> ones(tf.b, 1.0);

  Report rep;
  rep.name = "killing";
  if (!tf.source_has_ghost) {
    double worst = 0;
    for (int i = 0; i < tf.b; ++i) {
      worst = std::max(worst, std::abs(tf.kappa[i]));
      ReportSample s;
      s.label = tf.ids[i];
      s.x = i;
      s.value = tf.kappa[i];
      rep.samples.push_back(s);
    }
    finalize(rep);
    rep.pass = worst <= 1e-10 * std::max(tf.diag_scale, 1e-300);
    rep.note = "ghost-free, max |kappa| = " + fmt(worst) +
               ", diag scale = " + fmt(tf.diag_scale);
    return rep;
  }

  if (!(total_kappa > 0)) throw ZeroMass("ghost present but no killing");
  for (int i = 0; i < tf.b; ++i) {
    if (!(omega.mass[i] > 0)) throw ZeroMass("weight at " + tf.ids[i]);
    ReportSample s;
    s.label = tf.ids[i];
    s.x = i;
    s.lhs = tf.kappa[i];
    s.rhs = omega.mass[i] * total_kappa / total_omega;
    s.value = tf.kappa[i] * total_omega / (omega.mass[i] * total_kappa);
    rep.samples.push_back(s);
  }
  finalize(rep);
  rep.note = "sum kappa = " + fmt(total_kappa) +
             ", energy of 1 = " + fmt(trace_energy(tf, ones));
  return rep;
}

Report exit_time_report(const TraceForm& tf, const ThetaField& th,
                        const std::vector<double>& radii, int max_centers) {
  if (th.b() != tf.b) throw DimensionMismatch("field vs trace size");
  const BoundaryGeometry& g = th.geometry();
  Eigen::MatrixXd L = trace_matrix(tf);
  std::vector<int> centers = spread_indices(tf.b, max_centers);

  Report rep;
  rep.name = "exit-time";
  for (int x : centers) {
    for (double r : radii) {
      std::vector<int> ball;
      for (int j = 0; j < tf.b; ++j)
        if (g.rho(x, j) <= r) ball.push_back(j);
      if ((int)ball.size() < 2 || (int)ball.size() == tf.b) continue;
      const int m = (int)ball.size();
      Eigen::MatrixXd Lb(m, m);
      Eigen::VectorXd rhs(m);
      int xpos = -1;
      for (int a = 0; a < m; ++a) {
        for (int c = 0; c < m; ++c) Lb(a, c) = L(ball[a], ball[c]);
        rhs[a] = th.sigma()[ball[a]];
        if (ball[a] == x) xpos = a;
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(Lb);
      if (ldlt.info() != Eigen::Success)
        throw SingularBallSystem("ball at " + tf.ids[x] + " r=" + fmt(r));
      Eigen::VectorXd u = ldlt.solve(rhs);
      double resid = (Lb * u - rhs).norm();
      if (!(resid <= 1e-8 * std::max(1.0, rhs.norm())))
        throw SingularBallSystem("ill-conditioned ball at " + tf.ids[x]);
      ReportSample s;
      s.label = "x=" + tf.ids[x] + " r=" + fmt(r);
      s.x = r;
      s.lhs = u[xpos];
      s.rhs = th.theta(x, r);
      s.value = u[xpos] / s.rhs;
      rep.samples.push_back(s);
    }
  }
  if (rep.samples.empty()) throw NoAdmissibleScales(rep.name);
  finalize(rep);
  return rep;
}

SpectralData trace_spectrum(const TraceForm& tf, const VertexMeasure& omega) {
  if ((int)omega.mass.size() != tf.b)
    throw DimensionMismatch("measure length");
  if (tf.b > 512) throw BadDimensions("dense eigensolve capped at 512");
  for (int i = 0; i < tf.b; ++i)
    if (!(omega.mass[i] > 0)) throw ZeroMass("weight at " + tf.ids[i]);
  Eigen::MatrixXd L = trace_matrix(tf);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(tf.b, tf.b);
  for (int i = 0; i < tf.b; ++i) D(i, i) = omega.mass[i];
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, D);
  if (es.info() != Eigen::Success) throw EigenFailure("eigensolve failed");
  SpectralData sd;
  sd.b = tf.b;
  sd.lambda = es.eigenvalues();
  sd.phi = es.eigenvectors();
  sd.omega = omega.mass;
  sd.omega_total =
      std::accumulate(omega.mass.begin(), omega.mass.end(), 0.0);
  return sd;
}

Eigen::MatrixXd heat_kernel(const SpectralData& sd, double t) {
  if (!(t > 0)) throw DataError("time must be positive");
  Eigen::VectorXd e(sd.b);
  for (int k = 0; k < sd.b; ++k) e[k] = std::exp(-sd.lambda[k] * t);
  return sd.phi * e.asDiagonal() * sd.phi.transpose();
}

Report hk_report(const TraceForm& tf, const ThetaField& th,
                 const std::vector<double>& radii, int max_centers,
                 int t_points) {
  if (th.b() != tf.b) throw DimensionMismatch("field vs trace size");
  if (radii.size() < 2) throw InsufficientScales("need two radii");
  const BoundaryGeometry& g = th.geometry();
  VertexMeasure om;
  om.role = MeasureRole::omega;
  om.mass = th.sigma();
  SpectralData sd = trace_spectrum(tf, om);

  std::vector<int> centers = spread_indices(tf.b, max_centers);
  // per-center monotone envelope of Theta over the radius grid
  const int nr = (int)radii.size();
  double r_hi = radii[0];
  for (double r : radii)
    if (r <= g.diam_boundary / 4) r_hi = std::max(r_hi, r);
  std::vector<std::vector<double>> env(centers.size());
  // The time window is per center: t must match Theta(x, r) for an admissible
  // r at that center, and a common window need not exist when the measure is
  // far from homogeneous (a slit trace concentrates near the tips).
  // Spectral decay band: below ~1/lambda_max the kernel still sits on the
  // single-site plateau 1/omega_x, above ~1/lambda_1 on the equilibrium
  // plateau. A slope is a scaling statement only strictly between the two.
  double lmax = sd.lambda(sd.b - 1);
  double lq = lmax;
  for (int k = 0; k < sd.b; ++k)
    if (sd.lambda(k) > 1e-12 * lmax) {
      lq = sd.lambda(k);
      break;
    }
  double band_lo = 2.0 / lmax, band_hi = 0.5 / lq;

  std::vector<double> w_lo(centers.size()), w_hi(centers.size());
  std::vector<size_t> kept;
  for (size_t ci = 0; ci < centers.size(); ++ci) {
    env[ci].resize(nr);
    double run = 0;
    for (int k = 0; k < nr; ++k) {
      run = std::max(run, th.theta(centers[ci], radii[k]));
      env[ci][k] = run;
    }
    w_lo[ci] =
        std::max(th.theta(centers[ci], std::min(radii[0], r_hi)), band_lo);
    // envelope value at the largest radius within diam/4
    double cap = 0;
    for (int k = 0; k < nr; ++k)
      if (radii[k] <= r_hi) cap = env[ci][k];
    w_hi[ci] = std::min(cap, band_hi);
    // an octave of t is the least lever arm a log-log slope can stand on
    if (w_lo[ci] > 0 && w_hi[ci] >= 2 * w_lo[ci]) kept.push_back(ci);
  }
  if (kept.empty())
    throw WindowEmpty("[" + fmt(*std::max_element(w_lo.begin(), w_lo.end())) +
                      ", " + fmt(*std::min_element(w_hi.begin(), w_hi.end())) +
                      "]");

  auto center_tgrid = [&](size_t ci) {
    std::vector<double> tg(t_points);
    for (int k = 0; k < t_points; ++k) {
      double a = t_points == 1 ? 0.5 : (double)k / (t_points - 1);
      tg[k] = std::exp((1 - a) * std::log(w_lo[ci]) + a * std::log(w_hi[ci]));
    }
    return tg;
  };

  auto theta_inv = [&](size_t ci, double t) {
    for (int k = 0; k < nr; ++k)
      if (env[ci][k] >= t) return radii[k];
    return radii[nr - 1];
  };

  // one kernel per distinct time, shared across centers
  std::map<double, int> tslot;
  for (size_t ci : kept)
    for (double t : center_tgrid(ci)) tslot.emplace(t, 0);
  {
    int k = 0;
    for (auto& kv : tslot) kv.second = k++;
  }
  std::vector<double> tvals;
  tvals.reserve(tslot.size());
  for (auto& kv : tslot) tvals.push_back(kv.first);
  std::vector<Eigen::MatrixXd> kernels(tvals.size());
  parallel_for((int)tvals.size(),
               [&](int k) { kernels[k] = heat_kernel(sd, tvals[k]); });

  Report rep;
  rep.name = "heat-kernel";
  std::vector<double> slopes;
  for (size_t ci : kept) {
    int x = centers[ci];
    // off-diagonal partner: boundary point at median distance
    std::vector<int> ord(tf.b);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int c) {
      return g.rho(x, a) < g.rho(x, c);
    });
    int y = ord[tf.b / 2];

    std::vector<double> tgrid = center_tgrid(ci);
    std::vector<double> lt, lp;
    for (int k = 0; k < t_points; ++k) {
      double t = tgrid[k];
      const Eigen::MatrixXd& P = kernels[tslot.at(t)];
      double ondiag_est = 1.0 / th.sigma_ball(x, theta_inv(ci, t));
      {
        ReportSample s;
        s.label = "x=" + tf.ids[x] + " t=" + fmt(t);
        s.x = t;
        s.lhs = P(x, x);
        s.rhs = ondiag_est;
        s.value = P(x, x) / ondiag_est;
        rep.samples.push_back(s);
      }
      if (y != x) {
        double d = g.rho(x, y);
        double offdiag_est = t / (th.sigma_ball(x, d) * th.theta(x, d));
        double est = std::min(ondiag_est, offdiag_est);
        if (P(x, y) > 0 && est > 0) {
          ReportSample s;
          s.label = "x=" + tf.ids[x] + " y=" + tf.ids[y] + " t=" + fmt(t);
          s.x = t;
          s.lhs = P(x, y);
          s.rhs = est;
          s.value = P(x, y) / est;
          rep.samples.push_back(s);
        }
      }
      lt.push_back(t);
      lp.push_back(P(x, x));
    }
    slopes.push_back(exponent_fit(lt, lp).exponent);
  }

  finalize(rep);
  rep.has_fit = true;
  rep.fit.points = (int)slopes.size() * t_points;
  rep.fit.exponent =
      std::accumulate(slopes.begin(), slopes.end(), 0.0) / slopes.size();
  double smin = *std::min_element(slopes.begin(), slopes.end());
  double smax = *std::max_element(slopes.begin(), slopes.end());
  double span_lo = w_hi[kept[0]], span_hi = w_lo[kept[0]];
  for (size_t ci : kept) {
    span_lo = std::min(span_lo, w_lo[ci]);
    span_hi = std::max(span_hi, w_hi[ci]);
  }
  rep.note = "on-diagonal slopes in [" + fmt(smin) + ", " + fmt(smax) +
             "], " + std::to_string(kept.size()) + " of " +
             std::to_string(centers.size()) + " centers, windows within [" +
             fmt(span_lo) + ", " + fmt(span_hi) + "]";
  double total_kappa = std::accumulate(tf.kappa.begin(), tf.kappa.end(), 0.0);
  if (tf.source_has_ghost && total_kappa > 0) {
    double alpha = total_kappa / sd.omega_total;
    rep.note += ", bottom eigenvalue " + fmt(sd.lambda[0]) + ", alpha " +
                fmt(alpha) + ", ratio " + fmt(sd.lambda[0] / alpha);
  }
  return rep;
}

}  // namespace kt
