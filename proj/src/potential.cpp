#include "krontrace/potential.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace kt {

struct ConstrainedSolver::Impl {
  Eigen::SparseMatrix<double> A;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool direct = true;
};

ConstrainedSolver::~ConstrainedSolver() = default;
ConstrainedSolver::ConstrainedSolver(ConstrainedSolver&&) noexcept = default;

ConstrainedSolver::ConstrainedSolver(const ResistanceNetwork& net,
                                     std::vector<int> free_set,
                                     SolverConfig cfg)
    : impl_(new Impl), net_(&net), free_(std::move(free_set)), cfg_(cfg) {
  free_pos_.assign(net.n, -1);
  for (int i = 0; i < (int)free_.size(); ++i) {
    int v = free_[i];
    if (v < 0 || v >= net.n) throw BadSet("free vertex out of range");
    if (free_pos_[v] >= 0) throw BadSet("free vertex repeated");
    free_pos_[v] = i;
  }
  const int m = (int)free_.size();
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < m; ++i) {
    int v = free_[i];
    double diag = net.ghost_c[v];
    for (auto [w, c] : net.adj[v]) {
      diag += c;
      if (free_pos_[w] >= 0) trip.emplace_back(i, free_pos_[w], -c);
    }
    trip.emplace_back(i, i, diag);
  }
  impl_->A.resize(m, m);
  impl_->A.setFromTriplets(trip.begin(), trip.end());
  impl_->direct = (cfg.method == SolverConfig::Method::direct) ||
                  (cfg.method == SolverConfig::Method::automatic &&
                   m <= cfg.direct_limit);
  if (m > 0 && impl_->direct) {
    impl_->ldlt.compute(impl_->A);
    if (impl_->ldlt.info() != Eigen::Success)
      throw SingularRestriction("factorization failed on " +
                                std::to_string(m) + " unknowns");
  }
}

Eigen::VectorXd ConstrainedSolver::solve_raw(const Eigen::VectorXd& rhs) const {
  const int m = (int)free_.size();
  if (m == 0) return Eigen::VectorXd(0);
  Eigen::VectorXd x;
  if (impl_->direct) {
    x = impl_->ldlt.solve(rhs);
  } else {
    // local solver object: Eigen's CG keeps mutable iteration state
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper>
        cg;
    cg.setTolerance(cfg_.tol * 0.01);
    cg.setMaxIterations(cfg_.max_iter);
    cg.compute(impl_->A);
    x = cg.solve(rhs);
  }
  double bn = rhs.norm();
  if (bn > 0) {
    double res = (impl_->A * x - rhs).norm() / bn;
    if (!(res <= cfg_.tol * 1e3))  // direct solves sit near machine precision
      throw SolverFailure("relative residual " + std::to_string(res));
  }
  return x;
}

VertexFunction ConstrainedSolver::solve_with_values(
    const VertexFunction& fixed) const {
  const ResistanceNetwork& net = *net_;
  if ((int)fixed.size() != net.n)
    throw DimensionMismatch("fixed-value vector length");
  const int m = (int)free_.size();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    int v = free_[i];
    double s = 0;
    for (auto [w, c] : net.adj[v])
      if (free_pos_[w] < 0) s += c * fixed[w];
    rhs[i] = s;
  }
  Eigen::VectorXd x = solve_raw(rhs);
  VertexFunction out = fixed;
  for (int i = 0; i < m; ++i) out[free_[i]] = x[i];
  return out;
}

VertexFunction harmonic_extension(const ResistanceNetwork& net,
                                  const std::vector<double>& u_boundary,
                                  SolverConfig cfg) {
  ConstrainedSolver interior(net, net.interior, cfg);
  return harmonic_extension(interior, u_boundary);
}

VertexFunction harmonic_extension(const ConstrainedSolver& interior,
                                  const std::vector<double>& u_boundary) {
  const ResistanceNetwork& net = interior.network();
  if (interior.free_count() != net.interior_count())
    throw BadSet("solver not built on the interior");
  if ((int)u_boundary.size() != net.boundary_count())
    throw DimensionMismatch("boundary data length");
  VertexFunction fixed(net.n, 0.0);
  for (int j = 0; j < net.boundary_count(); ++j)
    fixed[net.boundary[j]] = u_boundary[j];
  return interior.solve_with_values(fixed);
}

VertexMeasure harmonic_measure(const ResistanceNetwork& net, int x0,
                               SolverConfig cfg) {
  if (x0 < 0 || x0 >= net.n || net.is_boundary[x0])
    throw NotInterior("pole " + std::to_string(x0));
  ConstrainedSolver interior(net, net.interior, cfg);
  const int m = net.interior_count();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e[net.part_pos[x0]] = 1.0;
  Eigen::VectorXd y = interior.solve_raw(e);
  VertexMeasure omega;
  omega.role = MeasureRole::omega;
  omega.mass.assign(net.boundary_count(), 0.0);
  for (int j = 0; j < net.boundary_count(); ++j) {
    int z = net.boundary[j];
    double s = 0;
    for (auto [w, c] : net.adj[z])
      if (!net.is_boundary[w]) s += c * y[net.part_pos[w]];
    omega.mass[j] = s;
  }
  return omega;
}

VertexFunction equilibrium_potential(const ResistanceNetwork& net,
                                     const std::vector<int>& K,
                                     SolverConfig cfg) {
  if (K.empty()) throw BadSet("empty K");
  std::vector<char> inK(net.n, 0);
  for (int v : K) {
    if (v < 0 || v >= net.n || net.is_boundary[v])
      throw BadSet("K must be interior");
    inK[v] = 1;
  }
  std::vector<int> free;
  for (int v : net.interior)
    if (!inK[v]) free.push_back(v);
  ConstrainedSolver solver(net, free, cfg);
  VertexFunction fixed(net.n, 0.0);
  for (int v : K) fixed[v] = 1.0;
  return solver.solve_with_values(fixed);
}

double capacity(const ResistanceNetwork& net, const std::vector<int>& O1,
                const std::vector<int>& O2, SolverConfig cfg) {
  std::vector<char> in1(net.n, 0), in2(net.n, 0);
  for (int v : O2) {
    if (v < 0 || v >= net.n) throw BadSet("O2 vertex out of range");
    in2[v] = 1;
  }
  for (int v : O1) {
    if (v < 0 || v >= net.n || !in2[v]) throw BadSet("O1 not contained in O2");
    in1[v] = 1;
  }
  bool complement = false;
  for (int v = 0; v < net.n; ++v)
    if (!in2[v]) complement = true;
  if (!complement && !net.has_ghost())
    throw BadSet("O2 covers every vertex");
  std::vector<int> free;
  for (int v = 0; v < net.n; ++v)
    if (in2[v] && !in1[v]) free.push_back(v);
  ConstrainedSolver solver(net, free, cfg);
  VertexFunction fixed(net.n, 0.0);
  for (int v : O1) fixed[v] = 1.0;
  VertexFunction f = solver.solve_with_values(fixed);
  return energy(net, f);
}

double green_function(const ResistanceNetwork& net, const std::vector<int>& U,
                      int x, int y, SolverConfig cfg) {
  std::vector<char> inU(net.n, 0);
  for (int v : U) {
    if (v < 0 || v >= net.n || net.is_boundary[v])
      throw BadSet("U must avoid the boundary");
    inU[v] = 1;
  }
  if (x < 0 || x >= net.n || y < 0 || y >= net.n || !inU[x] || !inU[y])
    throw BadSet("x, y must lie in U");
  if (net.boundary.empty() && !net.has_ghost())
    throw SingularRestriction("nothing grounds the restriction");
  ConstrainedSolver solver(net, U, cfg);
  const int m = (int)U.size();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  int ypos = -1, xpos = -1;
  for (int i = 0; i < m; ++i) {
    if (U[i] == y) ypos = i;
    if (U[i] == x) xpos = i;
  }
  e[ypos] = 1.0;
  Eigen::VectorXd g = solver.solve_raw(e);
  return g[xpos];
}

std::vector<double> green_row_interior(const ResistanceNetwork& net, int x0,
                                       SolverConfig cfg) {
  if (x0 < 0 || x0 >= net.n || net.is_boundary[x0])
    throw NotInterior("pole " + std::to_string(x0));
  ConstrainedSolver interior(net, net.interior, cfg);
  const int m = net.interior_count();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e[net.part_pos[x0]] = 1.0;
  Eigen::VectorXd g = interior.solve_raw(e);
  std::vector<double> out(net.n, 0.0);
  for (int i = 0; i < m; ++i) out[net.interior[i]] = g[i];
  return out;
}

namespace {
std::vector<int> sweep_free_set(const ResistanceNetwork& net,
                                const std::vector<int>& K,
                                std::vector<char>& inK) {
  inK.assign(net.n, 0);
  for (int v : K) {
    if (v < 0 || v >= net.n || net.is_boundary[v])
      throw BadSet("K must be interior");
    inK[v] = 1;
  }
  std::vector<int> free;
  for (int v : net.interior)
    if (!inK[v]) free.push_back(v);
  return free;
}
}  // namespace

VertexFunction sweep(const ResistanceNetwork& net,
                     const std::vector<double>& h_boundary,
                     const std::vector<int>& K, SolverConfig cfg) {
  if ((int)h_boundary.size() != net.boundary_count())
    throw DimensionMismatch("boundary data length");
  std::vector<char> inK;
  ConstrainedSolver solver(net, sweep_free_set(net, K, inK), cfg);
  VertexFunction fixed(net.n, 0.0);
  for (int j = 0; j < net.boundary_count(); ++j)
    fixed[net.boundary[j]] = h_boundary[j];
  return solver.solve_with_values(fixed);
}

double c_functional(const ResistanceNetwork& net,
                    const std::vector<double>& h_boundary,
                    const std::vector<int>& K, SolverConfig cfg) {
  VertexFunction e = equilibrium_potential(net, K, cfg);
  double denom = energy(net, e);
  if (!(denom > 0)) throw ZeroCapacity("equilibrium potential has no energy");
  VertexFunction s = sweep(net, h_boundary, K, cfg);
  return -energy(net, s, e) / denom;
}

VertexMeasure equilibrium_boundary_measure(const ResistanceNetwork& net,
                                           const std::vector<int>& K,
                                           SolverConfig cfg) {
  VertexFunction e = equilibrium_potential(net, K, cfg);
  double denom = energy(net, e);
  if (!(denom > 0)) throw ZeroCapacity("equilibrium potential has no energy");
  // w = L e; then c(delta_z, K) = -(w_z + sum_{f ~ z free} c_zf y_f)/denom
  // with y = A^{-1} w|_free: one extra solve instead of one per z.
  std::vector<double> w(net.n, 0.0);
  for (int v = 0; v < net.n; ++v) {
    double s = net.ghost_c[v] * e[v];
    for (auto [u, c] : net.adj[v]) s += c * (e[v] - e[u]);
    w[v] = s;
  }
  std::vector<char> inK;
  std::vector<int> free = sweep_free_set(net, K, inK);
  ConstrainedSolver solver(net, free, cfg);
  std::vector<int> free_pos(net.n, -1);
  for (int i = 0; i < (int)free.size(); ++i) free_pos[free[i]] = i;
  Eigen::VectorXd wf(free.size());
  for (int i = 0; i < (int)free.size(); ++i) wf[i] = w[free[i]];
  Eigen::VectorXd y = solver.solve_raw(wf);
  VertexMeasure out;
  out.role = MeasureRole::omega;
  out.mass.assign(net.boundary_count(), 0.0);
  for (int j = 0; j < net.boundary_count(); ++j) {
    int z = net.boundary[j];
    double s = w[z];
    for (auto [f, c] : net.adj[z])
      if (free_pos[f] >= 0) s += c * y[free_pos[f]];
    double val = -s / denom;
    out.mass[j] = (val < 0 && val > -1e-13) ? 0.0 : val;
  }
  return out;
}

}  // namespace kt
