#pragma once
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "krontrace/network.hpp"

namespace kt {

struct SolverConfig {
  enum class Method { automatic, direct, cg };
  Method method = Method::automatic;
  double tol = 1e-12;       // relative residual
  int max_iter = 50000;
  int direct_limit = 20000;  // unknown count at or below which LDLT is used
};

// Laplacian restricted to a free vertex set, with the complement held at
// prescribed values (ghost always at 0). The factorization is immutable once
// built; concurrent solves against it are fine.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const ResistanceNetwork& net, std::vector<int> free_set,
                    SolverConfig cfg = {});
  ~ConstrainedSolver();
  ConstrainedSolver(ConstrainedSolver&&) noexcept;

  int free_count() const { return (int)free_.size(); }
  const std::vector<int>& free_set() const { return free_; }
  const ResistanceNetwork& network() const { return *net_; }

  // fixed: full-length vector, read only at non-free vertices. Returns the
  // full-length solution (free entries solved, fixed entries copied).
  VertexFunction solve_with_values(const VertexFunction& fixed) const;

  // L_FF x = rhs in free-set coordinates
  Eigen::VectorXd solve_raw(const Eigen::VectorXd& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  const ResistanceNetwork* net_;
  std::vector<int> free_;
  std::vector<int> free_pos_;  // vertex -> free index or -1
  SolverConfig cfg_;
};

// u_boundary indexed by boundary position. Interior solved from
// L_II f_I = -L_IB u_B with the ghost pinned at 0.
VertexFunction harmonic_extension(const ResistanceNetwork& net,
                                  const std::vector<double>& u_boundary,
                                  SolverConfig cfg = {});
VertexFunction harmonic_extension(const ConstrainedSolver& interior,
                                  const std::vector<double>& u_boundary);

// Hitting distribution of the boundary from x0; one interior solve.
VertexMeasure harmonic_measure(const ResistanceNetwork& net, int x0,
                               SolverConfig cfg = {});

// 1 on K, 0 on boundary and ghost, harmonic elsewhere.
VertexFunction equilibrium_potential(const ResistanceNetwork& net,
                                     const std::vector<int>& K,
                                     SolverConfig cfg = {});

// min energy among f = 1 on O1, 0 outside O2; boundary flags play no role.
double capacity(const ResistanceNetwork& net, const std::vector<int>& O1,
                const std::vector<int>& O2, SolverConfig cfg = {});

// (L_UU)^-1 entries; U must avoid the boundary.
double green_function(const ResistanceNetwork& net, const std::vector<int>& U,
                      int x, int y, SolverConfig cfg = {});
// one row of the interior Green function: g(x0, v) for every interior v
std::vector<double> green_row_interior(const ResistanceNetwork& net, int x0,
                                       SolverConfig cfg = {});

// h on the boundary, 0 on K, harmonic elsewhere.
VertexFunction sweep(const ResistanceNetwork& net,
                     const std::vector<double>& h_boundary,
                     const std::vector<int>& K, SolverConfig cfg = {});

// -E(sweep(h,K), e_K) / E(e_K, e_K); lies in [min_K Hh, max_K Hh] for h >= 0.
double c_functional(const ResistanceNetwork& net,
                    const std::vector<double>& h_boundary,
                    const std::vector<int>& K, SolverConfig cfg = {});

// z -> c(delta_z, K) over boundary positions; total mass c(1, K).
VertexMeasure equilibrium_boundary_measure(const ResistanceNetwork& net,
                                           const std::vector<int>& K,
                                           SolverConfig cfg = {});

}  // namespace kt
