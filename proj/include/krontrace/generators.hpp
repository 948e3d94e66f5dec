#pragma once
#include <string>
#include <vector>

#include "krontrace/network.hpp"

namespace kt {

// Metric data of a generated domain. rho_bb is the boundary metric: the
// closed-form word distance on the slit gasket, graph geodesics elsewhere.
// rho_vb holds graph distances from every vertex to every boundary vertex;
// d_D is the boundary-distance field derived from it.
struct BoundaryGeometry {
  int n = 0;
  int b = 0;
  std::vector<int> boundary;      // dense vertex index per boundary position
  std::vector<int> boundary_pos;  // vertex -> boundary position, -1 off boundary
  std::vector<double> rho_bb;     // b*b row-major
  std::vector<double> rho_vb;     // n*b row-major
  std::vector<double> d_D;        // per vertex, 0 on boundary
  double diam_boundary = 0;
  double edge_length = 1;

  double rho(int bi, int bj) const { return rho_bb[(size_t)bi * b + bj]; }
  double rho_vertex_boundary(int v, int bj) const {
    return rho_vb[(size_t)v * b + bj];
  }
  // closed-ball masses around boundary position bi (linear scans; the theta
  // field keeps the fast prefix tables)
  double sigma_ball(int bi, double r, const std::vector<double>& sigma_b) const;
  double m0_ball(int bi, double r, const std::vector<double>& m0) const;
};

struct GeneratedDomain {
  ResistanceNetwork net;
  BoundaryGeometry geom;
  std::vector<double> sigma_uniform;  // per boundary position
  std::string kind;                   // "star", "path", "sg-slit", ...
  int level = 0;
  int width = 0, height = 0;
  int deep_vertex = -1;  // interior pole for the reference harmonic measure
  std::vector<std::string> boundary_words;  // gasket word labels, else empty
};

GeneratedDomain gen_star(const std::vector<double>& c);
GeneratedDomain gen_path(int n_edges, const std::vector<double>& c = {});

// Level-n slit gasket: pre-gasket graph with conductance (5/3)^n on every
// edge, bottom edges removed, interior bottom vertices split left/right.
// Boundary metric rho(w,w') = (3/2)*2^-k with k = first differing letter - 1
// of the infinite words. 1 <= level <= 8.
GeneratedDomain gen_sg_slit(int level);

enum class FarMode { reflecting, absorbing };

// Lattice {0..W}x{0..H}, unit conductances, boundary = bottom row. Sides and
// top are reflecting (absent edges); absorbing mode ties the top row to the
// ghost. depth_decay < 1 scales every edge by decay^depth (stress case).
GeneratedDomain gen_half_strip(int W, int H, FarMode far_mode);
GeneratedDomain gen_half_strip_attenuated(int W, int H, FarMode far_mode,
                                          double depth_decay);

// Square lattice {0..W}x{0..W} with a centered horizontal slit of slit_len
// edges; strictly interior slit vertices split into upper/lower copies, the
// two tips stay single. Boundary = both slit sides plus the tips.
GeneratedDomain gen_grid_slit(int W, int slit_len);

// Spine of unit edges with one tooth per spine vertex; tooth i has
// conductance growth^i, tooth tips are the boundary (stress case for the
// doubling diagnostics).
GeneratedDomain gen_comb(int teeth, double growth);

// BFS distances from one vertex, edges weighted uniformly by edge_length.
std::vector<double> graph_distances_from(const ResistanceNetwork& net,
                                         int source, double edge_length);

// Dyadic radii for the gasket ((3/2)*2^-k), integer radii for lattices,
// capped at diam(boundary)/2.
std::vector<double> admissible_radii(const GeneratedDomain& dom);

}  // namespace kt
