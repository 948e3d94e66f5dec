#include "krontrace/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "krontrace/parallel.hpp"

namespace kt {

ScaleFunction ScaleFunction::power(double beta) {
  ScaleFunction s;
  s.is_power_ = true;
  s.beta_ = beta;
  return s;
}

ScaleFunction ScaleFunction::tabulated(std::vector<double> r,
                                       std::vector<double> v) {
  if (r.size() != v.size() || r.empty())
    throw DimensionMismatch("scale table");
  for (size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0) || !(v[i] > 0))
      throw DataError("scale table entries must be positive");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw DataError("scale table radii must ascend");
  }
  ScaleFunction s;
  s.is_power_ = false;
  s.r_ = std::move(r);
  s.v_ = std::move(v);
  if (s.r_.size() >= 2) {
    ReportFit f = exponent_fit(s.r_, s.v_);
    s.beta_ = f.exponent;
  } else {
    s.beta_ = 0;
  }
  return s;
}

double ScaleFunction::operator()(double r) const {
  if (!(r > 0)) throw DataError("scale function needs r > 0");
  if (is_power_) return std::pow(r, beta_);
  if (r <= r_.front()) return v_.front();
  if (r >= r_.back()) return v_.back();
  size_t k = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin() - 1;
  double t = (std::log(r) - std::log(r_[k])) /
             (std::log(r_[k + 1]) - std::log(r_[k]));
  return std::exp((1 - t) * std::log(v_[k]) + t * std::log(v_[k + 1]));
}

ThetaField::ThetaField(const BoundaryGeometry& g, ScaleFunction psi,
                       const VertexMeasure& sigma,
                       const std::vector<double>& m0_vertex)
    : geom_(&g), psi_(std::move(psi)), b_(g.b) {
  if ((int)sigma.mass.size() != g.b)
    throw DimensionMismatch("boundary measure length");
  if ((int)m0_vertex.size() != g.n)
    throw DimensionMismatch("vertex measure length");
  sigma_ = sigma.mass;
  for (int i = 0; i < b_; ++i)
    if (!(sigma_[i] > 0))
      throw ZeroMass("boundary weight at position " + std::to_string(i));
  sigma_total_ = std::accumulate(sigma_.begin(), sigma_.end(), 0.0);

  bdist_.resize(b_);
  bpre_.resize(b_);
  vdist_.resize(b_);
  vpre_.resize(b_);
  parallel_for(b_, [&](int i) {
    std::vector<int> ord(b_);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int c) {
      return g.rho(i, a) < g.rho(i, c);
    });
    bdist_[i].resize(b_);
    bpre_[i].assign(b_ + 1, 0.0);
    for (int k = 0; k < b_; ++k) {
      bdist_[i][k] = g.rho(i, ord[k]);
      bpre_[i][k + 1] = bpre_[i][k] + sigma_[ord[k]];
    }
    std::vector<int> vord(g.n);
    std::iota(vord.begin(), vord.end(), 0);
    std::stable_sort(vord.begin(), vord.end(), [&](int a, int c) {
      return g.rho_vertex_boundary(a, i) < g.rho_vertex_boundary(c, i);
    });
    vdist_[i].resize(g.n);
    vpre_[i].assign(g.n + 1, 0.0);
    for (int k = 0; k < g.n; ++k) {
      vdist_[i][k] = g.rho_vertex_boundary(vord[k], i);
      vpre_[i][k + 1] = vpre_[i][k] + m0_vertex[vord[k]];
    }
  });
}

double ThetaField::sigma_ball(int bpos, double r) const {
  const std::vector<double>& d = bdist_[bpos];
  size_t k = std::upper_bound(d.begin(), d.end(), r) - d.begin();
  return bpre_[bpos][k];
}

double ThetaField::m0_ball(int bpos, double r) const {
  const std::vector<double>& d = vdist_[bpos];
  size_t k = std::upper_bound(d.begin(), d.end(), r) - d.begin();
  return vpre_[bpos][k];
}

double ThetaField::theta(int bpos, double r) const {
  double sb = sigma_ball(bpos, r);
  double mb = m0_ball(bpos, r);
  if (!(sb > 0)) throw EmptyBall("sigma ball at r=" + std::to_string(r));
  if (!(mb > 0)) throw EmptyBall("m0 ball at r=" + std::to_string(r));
  return psi_(r) * sb / mb;
}

BesovKernel besov_kernel(const ThetaField& th) {
  const BoundaryGeometry& g = th.geometry();
  const int b = th.b();
  BesovKernel k;
  k.b = b;
  k.w = Eigen::MatrixXd::Zero(b, b);
  parallel_for(b, [&](int i) {
    for (int j = 0; j < b; ++j) {
      if (j == i) continue;
      double d = g.rho(i, j);
      if (!(d > 0)) throw DegenerateSample("coincident boundary points");
      double sb = th.sigma_ball(i, d);
      double mb = th.m0_ball(i, d);
      if (!(mb > 0)) throw EmptyBall("m0 ball at pair distance");
      // sigma_i sigma_j / (sigma(B) Theta) with Theta = Psi sigma(B)/m0(B)
      k.w(i, j) = th.sigma()[i] * th.sigma()[j] * mb / (th.psi(d) * sb * sb);
    }
  });
  return k;
}

double besov_seminorm(const BesovKernel& k, const std::vector<double>& u) {
  if ((int)u.size() != k.b) throw DimensionMismatch("field length");
  double s = 0;
  for (int i = 0; i < k.b; ++i)
    for (int j = 0; j < k.b; ++j) {
      double d = u[i] - u[j];
      s += k.w(i, j) * d * d;
    }
  return s;
}

double besov_seminorm_reference(const BoundaryGeometry& g,
                                const ScaleFunction& psi,
                                const std::vector<double>& sigma,
                                const std::vector<double>& m0_vertex,
                                const std::vector<double>& u) {
  if ((int)sigma.size() != g.b || (int)u.size() != g.b)
    throw DimensionMismatch("field length");
  double s = 0;
  for (int i = 0; i < g.b; ++i) {
    for (int j = 0; j < g.b; ++j) {
      if (j == i) continue;
      double d = g.rho(i, j);
      double sb = 0;
      for (int l = 0; l < g.b; ++l)
        if (g.rho(i, l) <= d) sb += sigma[l];
      double mb = 0;
      for (int v = 0; v < g.n; ++v)
        if (g.rho_vertex_boundary(v, i) <= d) mb += m0_vertex[v];
      double theta = psi(d) * sb / mb;
      double du = u[i] - u[j];
      s += du * du * sigma[i] * sigma[j] / (sb * theta);
    }
  }
  return s;
}

Report vd_report(const GeneratedDomain& dom, const VertexMeasure& sigma,
                 int max_centers) {
  const BoundaryGeometry& g = dom.geom;
  if ((int)sigma.mass.size() != g.b)
    throw DimensionMismatch("boundary measure length");
  std::vector<double> radii = admissible_radii(dom);
  Report rep;
  rep.name = "vd";
  std::vector<int> centers = spread_indices(g.b, max_centers);
  for (double r : radii) {
    if (2 * r > g.diam_boundary) continue;
    for (int i : centers) {
      double small = 0, big = 0;
      for (int j = 0; j < g.b; ++j) {
        double d = g.rho(i, j);
        if (d <= r) small += sigma.mass[j];
        if (d <= 2 * r) big += sigma.mass[j];
      }
      if (!(small > 0)) continue;
      ReportSample s;
      s.label = dom.net.ids[g.boundary[i]] + " r=" + std::to_string(r);
      s.x = r;
      s.value = big / small;
      rep.samples.push_back(s);
    }
  }
  if (rep.samples.empty()) throw InsufficientScales("no admissible radii");
  finalize(rep);
  return rep;
}

Report theta_scaling_report(const GeneratedDomain& dom, const ThetaField& th,
                            int max_centers) {
  std::vector<double> radii = admissible_radii(dom);
  if (radii.size() < 2) throw InsufficientScales("need two radii");
  Report rep;
  rep.name = "theta-scaling";
  std::vector<int> centers = spread_indices(th.b(), max_centers);
  std::vector<double> xs, ys;
  double slope_min = 0, slope_max = 0;
  bool first = true;
  for (int i : centers) {
    double prev_r = 0, prev_t = 0;
    for (double r : radii) {
      double t = th.theta(i, r);
      ReportSample s;
      s.label = dom.net.ids[dom.geom.boundary[i]];
      s.x = r;
      s.value = t;
      rep.samples.push_back(s);
      xs.push_back(r);
      ys.push_back(t);
      if (prev_r > 0) {
        double sl = std::log(t / prev_t) / std::log(r / prev_r);
        if (first || sl < slope_min) slope_min = sl;
        if (first || sl > slope_max) slope_max = sl;
        first = false;
      }
      prev_r = r;
      prev_t = t;
    }
  }
  rep.has_fit = true;
  // Interior scales only, as in the jump fit: the finest radius sits at the
  // lattice cell and the coarsest at the diameter cutoff. Both stay in the
  // samples and in the local slope range above.
  {
    double rmin = radii.front(), rmax = radii.back();
    std::vector<double> fx, fy;
    for (size_t k = 0; k < xs.size(); ++k)
      if (xs[k] > rmin && xs[k] < rmax) {
        fx.push_back(xs[k]);
        fy.push_back(ys[k]);
      }
    std::set<double> distinct(fx.begin(), fx.end());
    if (distinct.size() >= 2)
      rep.fit = exponent_fit(fx, fy);
    else
      rep.fit = exponent_fit(xs, ys);
  }
  // worst guarantee constant: Theta(R)/Theta(r) >= C (R/r)^beta per center
  double worst_c = std::numeric_limits<double>::infinity();
  for (int i : centers)
    for (size_t a = 0; a < radii.size(); ++a)
      for (size_t b = a + 1; b < radii.size(); ++b) {
        double q = (th.theta(i, radii[b]) / th.theta(i, radii[a])) /
                   std::pow(radii[b] / radii[a], rep.fit.exponent);
        worst_c = std::min(worst_c, q);
      }
  rep.note = "local slopes in [" + std::to_string(slope_min) + ", " +
             std::to_string(slope_max) + "], worst pair constant " +
             std::to_string(worst_c);
  finalize(rep);
  return rep;
}

Report comparability_report(const TraceForm& tf, const BesovKernel& kernel,
                            const std::vector<double>& sigma,
                            const std::vector<std::vector<double>>& fields) {
  if (kernel.b != tf.b) throw DimensionMismatch("kernel vs trace size");
  if ((int)sigma.size() != tf.b) throw DimensionMismatch("sigma length");
  bool killed = tf.has_killing();
  Report rep;
  rep.name = "comparability";
  int idx = 0;
  for (const std::vector<double>& u : fields) {
    double denom = besov_seminorm(kernel, u);
    if (killed) {
      // with killing, energy controls the full norm, not the seminorm
      double l2 = 0;
      for (int i = 0; i < tf.b; ++i) l2 += u[i] * u[i] * sigma[i];
      denom += l2;
    }
    double num = trace_energy(tf, u);
    ++idx;
    if (!(denom > 0)) continue;  // constant field, killing-free form
    ReportSample smp;
    smp.label = "field " + std::to_string(idx - 1);
    smp.x = idx - 1;
    smp.lhs = num;
    smp.rhs = denom;
    smp.value = num / denom;
    rep.samples.push_back(smp);
  }
  if (rep.samples.empty()) throw DegenerateSample("no usable fields");
  finalize(rep);
  return rep;
}

Report l2_restriction_report(const ResistanceNetwork& net,
                             const std::vector<double>& sigma,
                             const std::vector<std::vector<double>>& fields) {
  if ((int)sigma.size() != net.boundary_count())
    throw DimensionMismatch("sigma length");
  Report rep;
  rep.name = "l2-restriction";
  int idx = 0;
  for (const std::vector<double>& f : fields) {
    if ((int)f.size() != net.n) throw DimensionMismatch("field length");
    double num = 0;
    for (int j = 0; j < net.boundary_count(); ++j) {
      double v = f[net.boundary[j]];
      num += sigma[j] * v * v;
    }
    double l2 = 0;
    for (int v = 0; v < net.n; ++v) l2 += net.m0[v] * f[v] * f[v];
    double denom = energy(net, f) + l2;
    ++idx;
    if (!(denom > 0)) continue;
    ReportSample smp;
    smp.label = "field " + std::to_string(idx - 1);
    smp.x = idx - 1;
    smp.lhs = num;
    smp.rhs = denom;
    smp.value = num / denom;
    rep.samples.push_back(smp);
  }
  if (rep.samples.empty()) throw DegenerateSample("no usable fields");
  finalize(rep);
  return rep;
}

}  // namespace kt
