#include "krontrace/sampling.hpp"

#include <cmath>
#include <random>

namespace kt {

std::vector<std::vector<double>> boundary_fields(const GeneratedDomain& dom,
                                                 int count,
                                                 std::uint64_t seed) {
  const BoundaryGeometry& g = dom.geom;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, g.b - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    std::vector<double> u(g.b);
    switch (s % 3) {
      case 0:
        for (double& v : u) v = gauss(rng);
        break;
      case 1: {
        // indicator of a boundary-metric ball, radius kept below diam/3
        int z = pick(rng);
        double r = (0.05 + 0.28 * unif(rng)) * g.diam_boundary;
        for (int j = 0; j < g.b; ++j) u[j] = g.rho(z, j) <= r ? 1.0 : 0.0;
        break;
      }
      default: {
        int z = pick(rng);
        double scale = (0.1 + 0.4 * unif(rng)) * g.diam_boundary;
        for (int j = 0; j < g.b; ++j) {
          double d = g.rho(z, j) / scale;
          u[j] = std::exp(-0.5 * d * d);
        }
        break;
      }
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<std::vector<double>> interior_fields(const GeneratedDomain& dom,
                                                 int count, std::uint64_t seed,
                                                 SolverConfig cfg) {
  const ResistanceNetwork& net = dom.net;
  std::vector<std::vector<double>> bnd = boundary_fields(dom, count, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, net.interior_count() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  ConstrainedSolver interior(net, net.interior, cfg);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    std::vector<double> f;
    switch (s % 3) {
      case 0:
        f = harmonic_extension(interior, bnd[s]);
        break;
      case 1: {
        // interior bump, zero on the boundary
        int z = net.interior[pick(rng)];
        double scale =
            (1.0 + 3.0 * unif(rng)) * dom.geom.edge_length * 2.0;
        std::vector<double> dist =
            graph_distances_from(net, z, dom.geom.edge_length);
        f.assign(net.n, 0.0);
        for (int v : net.interior) {
          double d = dist[v] / scale;
          f[v] = std::exp(-0.5 * d * d);
        }
        break;
      }
      default:
        f.assign(net.n, 0.0);
        for (int v = 0; v < net.n; ++v) f[v] = gauss(rng);
        break;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace kt
