#pragma once
#include <Eigen/Dense>

#include "krontrace/network.hpp"
#include "krontrace/potential.hpp"

namespace kt {

// Boundary trace of the Dirichlet form: jump conductances chat (symmetric,
// zero diagonal, indexed by boundary position) and killing weights kappa.
// The jump kernel over ordered pairs is chat/2.
struct TraceForm {
  std::vector<int> boundary;        // vertex index per boundary position
  std::vector<std::string> ids;     // id per boundary position
  int b = 0;
  Eigen::MatrixXd chat;             // b x b
  std::vector<double> kappa;        // length b
  VertexMeasure measure;            // boundary measure attached downstream
  double diag_scale = 0;            // max diagonal of the reduced Laplacian
  bool source_has_ghost = false;    // provenance: did the ambient form kill

  double c(int i, int j) const { return chat(i, j); }
  bool has_killing(double rel_tol = 1e-12) const;
};

// Schur complement of the Laplacian onto `target` (rows/cols in target
// order); free vertices are eliminated through one shared factorization,
// columns solved independently.
Eigen::MatrixXd schur_complement(const ResistanceNetwork& net,
                                 const std::vector<int>& target,
                                 SolverConfig cfg = {});

// Reduction onto the boundary. Off-diagonal round-off below
// 1e-13 * max(diag) is clamped to zero; a genuinely positive off-diagonal
// entry throws NegativeOffDiagonal. The result is checked against the
// ambient form on random data before returning.
TraceForm schur_trace(const ResistanceNetwork& net, SolverConfig cfg = {});

// Dense star-mesh elimination of the same complement, one pivot at a time
// in ascending vertex order. Serial reference for schur_complement.
Eigen::MatrixXd kron_reduce_reference(const ResistanceNetwork& net,
                                      const std::vector<int>& target);

// Exact trace of a star: center eliminated, chat_ij = c_i c_j / sum(c).
Eigen::MatrixXd star_closed_form(const std::vector<double>& c);

// sum over unordered pairs chat (u_x - u_y)^2 + sum kappa u^2, no 1/2
double trace_energy(const TraceForm& tf, const std::vector<double>& u);
double trace_energy(const TraceForm& tf, const std::vector<double>& u,
                    const std::vector<double>& v);

// Reduced Laplacian assembled back from chat and kappa.
Eigen::MatrixXd trace_matrix(const TraceForm& tf);

// -D_omega^{-1} Lcheck, the jump-process generator for the given boundary
// measure. Throws ZeroMass on a vanishing weight.
Eigen::MatrixXd generator_matrix(const TraceForm& tf,
                                 const VertexMeasure& omega);

// Rebuild a network over `target` from a Schur complement: off-diagonals
// become edges, row sums become ghost weights. Boundary flags and m0 carry
// over from the parent; non-boundary target vertices stay interior.
ResistanceNetwork trace_as_network(const Eigen::MatrixXd& S,
                                   const std::vector<int>& target,
                                   const ResistanceNetwork& parent);

// Reduce to mid (must contain the boundary), rebuild, reduce again, and
// compare with the direct reduction: max entry deviation / diag scale.
double tower_deviation(const ResistanceNetwork& net,
                       const std::vector<int>& mid, SolverConfig cfg = {});

}  // namespace kt
