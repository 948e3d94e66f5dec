#pragma once
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "krontrace/errors.hpp"

namespace kt {

using VertexFunction = std::vector<double>;

enum class MeasureRole { m0, sigma, omega };

struct VertexMeasure {
  std::vector<double> mass;
  MeasureRole role = MeasureRole::sigma;
  double total() const;
};

struct Edge {
  int u;
  int v;
  double c;
};

// Finite resistance network. Vertices are dense indices 0..n-1; ids keep the
// external names for serialization. ghost_c[v] > 0 means v leaks to an
// absorbing ghost node pinned at value 0; the ghost is not a vertex and
// carries no measure. Boundary vertices have m0 = 0.
struct ResistanceNetwork {
  int n = 0;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  std::vector<double> m0;
  std::vector<char> is_boundary;
  std::vector<double> ghost_c;
  // optional per-vertex coordinates, empty when the source carries none;
  // never consulted by any computation
  std::vector<std::vector<double>> coords;

  std::vector<int> boundary;  // dense indices, ascending construction order
  std::vector<int> interior;
  std::vector<int> part_pos;  // position of v inside its part

  bool has_ghost() const;
  int boundary_count() const { return (int)boundary.size(); }
  int interior_count() const { return (int)interior.size(); }
  // adjacency built once at construction: (neighbor, conductance) per vertex
  std::vector<std::vector<std::pair<int, double>>> adj;
};

ResistanceNetwork build_network(std::vector<std::string> ids,
                                std::vector<Edge> edges,
                                std::vector<double> m0,
                                std::vector<char> is_boundary,
                                std::vector<double> ghost_c = {});

// Dirichlet energy Sum_edges c*(f_u-f_v)^2, plus Sum ghost_c[v]*f_v^2
// (the ghost sits at 0). No 1/2 factor.
double energy(const ResistanceNetwork& net, const VertexFunction& f);
double energy(const ResistanceNetwork& net, const VertexFunction& f,
              const VertexFunction& g);

// L symmetric, off-diagonal -c_uv, diagonal = incident conductance sum
// including the ghost edge; f^T L f = energy(f).
Eigen::SparseMatrix<double> laplacian(const ResistanceNetwork& net);

struct NetworkDiagnostics {
  bool connected = false;
  int boundary_count = 0;
  int interior_count = 0;
  int min_degree = 0;
  int max_degree = 0;
  double m0_interior_total = 0;
  double c_min = 0;
  double c_max = 0;
};

NetworkDiagnostics validate(const ResistanceNetwork& net);

}  // namespace kt
