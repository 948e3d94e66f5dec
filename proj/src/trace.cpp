#include "krontrace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "krontrace/parallel.hpp"

namespace kt {

namespace {
constexpr double kClampRel = 1e-13;
}

bool TraceForm::has_killing(double rel_tol) const {
  for (double k : kappa)
    if (k > rel_tol * std::max(diag_scale, 1.0)) return true;
  return false;
}

Eigen::MatrixXd schur_complement(const ResistanceNetwork& net,
                                 const std::vector<int>& target,
                                 SolverConfig cfg) {
  const int t = (int)target.size();
  if (t == 0) throw BadSet("empty target");
  std::vector<int> tpos(net.n, -1);
  for (int j = 0; j < t; ++j) {
    int v = target[j];
    if (v < 0 || v >= net.n) throw BadSet("target vertex out of range");
    if (tpos[v] >= 0) throw BadSet("target vertex repeated");
    tpos[v] = j;
  }
  std::vector<int> free;
  for (int v = 0; v < net.n; ++v)
    if (tpos[v] < 0) free.push_back(v);
  std::vector<int> fpos(net.n, -1);
  for (int i = 0; i < (int)free.size(); ++i) fpos[free[i]] = i;

  ConstrainedSolver solver(net, free, cfg);
  Eigen::MatrixXd S(t, t);
  // each task fills one column; the shared factorization is read-only
  parallel_for(t, [&](int j) {
    int z = target[j];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(free.size());
    for (auto [w, c] : net.adj[z])
      if (fpos[w] >= 0) rhs[fpos[w]] += c;
    Eigen::VectorXd y = solver.solve_raw(rhs);
    for (int k = 0; k < t; ++k) {
      int x = target[k];
      double lkz = 0;
      if (x == z) {
        lkz = net.ghost_c[x];
        for (auto [w, c] : net.adj[x]) lkz += c;
      }
      for (auto [w, c] : net.adj[x]) {
        if (w == z && x != z) lkz -= c;
        if (fpos[w] >= 0) lkz -= c * y[fpos[w]];
      }
      S(k, j) = lkz;
    }
  });
  // solver noise breaks exact symmetry; average the two triangles
  for (int j = 0; j < t; ++j)
    for (int k = j + 1; k < t; ++k) {
      double m = 0.5 * (S(k, j) + S(j, k));
      S(k, j) = S(j, k) = m;
    }
  return S;
}

TraceForm schur_trace(const ResistanceNetwork& net, SolverConfig cfg) {
  Eigen::MatrixXd S = schur_complement(net, net.boundary, cfg);
  const int b = (int)net.boundary.size();
  TraceForm tf;
  tf.boundary = net.boundary;
  tf.ids.reserve(b);
  for (int v : net.boundary) tf.ids.push_back(net.ids[v]);
  tf.b = b;
  tf.source_has_ghost = net.has_ghost();
  tf.diag_scale = 0;
  for (int j = 0; j < b; ++j) tf.diag_scale = std::max(tf.diag_scale, S(j, j));

  tf.kappa.assign(b, 0.0);
  for (int j = 0; j < b; ++j) {
    double rs = 0;
    for (int k = 0; k < b; ++k) rs += S(k, j);
    tf.kappa[j] = rs;
  }

  tf.chat = Eigen::MatrixXd::Zero(b, b);
  for (int j = 0; j < b; ++j)
    for (int k = j + 1; k < b; ++k) {
      double v = S(k, j);
      double scale = std::max(S(j, j), S(k, k));
      if (std::abs(v) <= kClampRel * scale) continue;
      if (v > 0)
        throw NegativeOffDiagonal("entry (" + std::to_string(k) + "," +
                                  std::to_string(j) + ") = " +
                                  std::to_string(v));
      tf.chat(k, j) = tf.chat(j, k) = -v;
    }

  // the reduced form must reproduce the ambient energy of harmonic
  // extensions; catches wrong signs, lost ghost terms, bad solves
  ConstrainedSolver interior(net, net.interior, cfg);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> u(b);
    for (double& x : u) x = unif(rng);
    VertexFunction h = harmonic_extension(interior, u);
    double ambient = energy(net, h);
    double reduced = trace_energy(tf, u);
    double dev = std::abs(ambient - reduced);
    if (dev > 1e-10 * (ambient + tf.diag_scale + 1.0))
      throw SolverFailure("trace self-check deviation " + std::to_string(dev));
  }
  return tf;
}

Eigen::MatrixXd kron_reduce_reference(const ResistanceNetwork& net,
                                      const std::vector<int>& target) {
  std::vector<char> keep(net.n, 0);
  for (int v : target) keep[v] = 1;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(net.n, net.n);
  for (const Edge& e : net.edges) {
    L(e.u, e.u) += e.c;
    L(e.v, e.v) += e.c;
    L(e.u, e.v) -= e.c;
    L(e.v, e.u) -= e.c;
  }
  for (int v = 0; v < net.n; ++v) L(v, v) += net.ghost_c[v];

  std::vector<char> alive(net.n, 1);
  for (int p = 0; p < net.n; ++p) {
    if (keep[p]) continue;
    double piv = L(p, p);
    if (!(piv > 0)) throw SingularRestriction("zero pivot at " + net.ids[p]);
    for (int i = 0; i < net.n; ++i) {
      if (!alive[i] || i == p || L(i, p) == 0) continue;
      double f = L(i, p) / piv;
      for (int j = 0; j < net.n; ++j)
        if (alive[j] && j != p) L(i, j) -= f * L(p, j);
    }
    alive[p] = 0;
    for (int i = 0; i < net.n; ++i) L(i, p) = L(p, i) = 0;
  }

  const int t = (int)target.size();
  Eigen::MatrixXd S(t, t);
  for (int k = 0; k < t; ++k)
    for (int j = 0; j < t; ++j) S(k, j) = L(target[k], target[j]);
  return S;
}

Eigen::MatrixXd star_closed_form(const std::vector<double>& c) {
  const int b = (int)c.size();
  double total = 0;
  for (double x : c) total += x;
  Eigen::MatrixXd chat = Eigen::MatrixXd::Zero(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      if (i != j) chat(i, j) = c[i] * c[j] / total;
  return chat;
}

double trace_energy(const TraceForm& tf, const std::vector<double>& u) {
  if ((int)u.size() != tf.b) throw DimensionMismatch("trace data length");
  double s = 0;
  for (int i = 0; i < tf.b; ++i) {
    for (int j = i + 1; j < tf.b; ++j) {
      double d = u[i] - u[j];
      s += tf.chat(i, j) * d * d;
    }
    s += tf.kappa[i] * u[i] * u[i];
  }
  return s;
}

double trace_energy(const TraceForm& tf, const std::vector<double>& u,
                    const std::vector<double>& v) {
  if ((int)u.size() != tf.b || (int)v.size() != tf.b)
    throw DimensionMismatch("trace data length");
  double s = 0;
  for (int i = 0; i < tf.b; ++i) {
    for (int j = i + 1; j < tf.b; ++j)
      s += tf.chat(i, j) * (u[i] - u[j]) * (v[i] - v[j]);
    s += tf.kappa[i] * u[i] * v[i];
  }
  return s;
}

Eigen::MatrixXd trace_matrix(const TraceForm& tf) {
  Eigen::MatrixXd L = -tf.chat;
  for (int i = 0; i < tf.b; ++i) {
    double diag = tf.kappa[i];
    for (int j = 0; j < tf.b; ++j)
      if (j != i) diag += tf.chat(i, j);
    L(i, i) = diag;
  }
  return L;
}

Eigen::MatrixXd generator_matrix(const TraceForm& tf,
                                 const VertexMeasure& omega) {
  if ((int)omega.mass.size() != tf.b)
    throw DimensionMismatch("measure length");
  Eigen::MatrixXd L = trace_matrix(tf);
  for (int i = 0; i < tf.b; ++i) {
    if (!(omega.mass[i] > 0))
      throw ZeroMass("weight at position " + std::to_string(i));
    L.row(i) /= -omega.mass[i];
  }
  return L;
}

ResistanceNetwork trace_as_network(const Eigen::MatrixXd& S,
                                   const std::vector<int>& target,
                                   const ResistanceNetwork& parent) {
  const int t = (int)target.size();
  double diag_scale = 0;
  for (int j = 0; j < t; ++j) diag_scale = std::max(diag_scale, S(j, j));

  std::vector<std::string> ids;
  std::vector<double> m0(t, 0.0), ghost(t, 0.0);
  std::vector<char> is_b(t, 0);
  for (int j = 0; j < t; ++j) {
    int v = target[j];
    ids.push_back(parent.ids[v]);
    is_b[j] = parent.is_boundary[v];
    m0[j] = parent.m0[v];
  }
  std::vector<Edge> edges;
  for (int j = 0; j < t; ++j) {
    double rs = 0;
    for (int k = 0; k < t; ++k) rs += S(k, j);
    for (int k = j + 1; k < t; ++k) {
      double v = S(k, j);
      double scale = std::max(S(j, j), S(k, k));
      if (std::abs(v) <= kClampRel * scale) continue;
      if (v > 0)
        throw NegativeOffDiagonal("entry (" + std::to_string(k) + "," +
                                  std::to_string(j) + ")");
      edges.push_back({j, k, -v});
    }
    // round-off can push a vanishing row sum slightly negative
    ghost[j] = (rs > kClampRel * diag_scale) ? rs : 0.0;
  }
  return build_network(ids, edges, m0, is_b, ghost);
}

double tower_deviation(const ResistanceNetwork& net,
                       const std::vector<int>& mid, SolverConfig cfg) {
  std::set<int> mid_set(mid.begin(), mid.end());
  for (int v : net.boundary)
    if (!mid_set.count(v)) throw BadSet("mid must contain the boundary");
  // ascending order keeps boundary positions aligned between the two routes
  std::vector<int> mid_sorted(mid_set.begin(), mid_set.end());

  Eigen::MatrixXd direct = schur_complement(net, net.boundary, cfg);
  Eigen::MatrixXd S_mid = schur_complement(net, mid_sorted, cfg);
  ResistanceNetwork mid_net = trace_as_network(S_mid, mid_sorted, net);

  std::vector<int> bnd_in_mid;
  for (int i = 0; i < (int)mid_sorted.size(); ++i)
    if (mid_net.is_boundary[i]) bnd_in_mid.push_back(i);
  Eigen::MatrixXd two_step = schur_complement(mid_net, bnd_in_mid, cfg);

  // both matrices index boundary vertices in the same relative order
  double diag_scale = 0;
  for (int j = 0; j < direct.rows(); ++j)
    diag_scale = std::max(diag_scale, direct(j, j));
  double dev = (direct - two_step).cwiseAbs().maxCoeff();
  return dev / std::max(diag_scale, 1e-300);
}

}  // namespace kt
