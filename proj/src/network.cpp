#include "krontrace/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace kt {

double VertexMeasure::total() const {
  double s = 0;
  for (double m : mass) s += m;
  return s;
}

bool ResistanceNetwork::has_ghost() const {
  for (double c : ghost_c)
    if (c > 0) return true;
  return false;
}

ResistanceNetwork build_network(std::vector<std::string> ids,
                                std::vector<Edge> edges,
                                std::vector<double> m0,
                                std::vector<char> is_boundary,
                                std::vector<double> ghost_c) {
  ResistanceNetwork net;
  net.n = (int)ids.size();
  if (net.n == 0) throw InvalidNetwork("no vertices");
  if ((int)m0.size() != net.n || (int)is_boundary.size() != net.n)
    throw DimensionMismatch("vertex attribute lengths disagree");
  if (ghost_c.empty()) ghost_c.assign(net.n, 0.0);
  if ((int)ghost_c.size() != net.n)
    throw DimensionMismatch("ghost conductance length disagrees");

  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= net.n || e.v < 0 || e.v >= net.n)
      throw InvalidNetwork("edge endpoint out of range");
    if (e.u == e.v) throw InvalidNetwork("self-loop at vertex " + ids[e.u]);
    if (!(e.c > 0))
      throw NonpositiveConductance(ids[e.u] + "-" + ids[e.v]);
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second)
      throw DuplicateEdge(ids[e.u] + "-" + ids[e.v]);
  }
  for (int v = 0; v < net.n; ++v) {
    if (ghost_c[v] < 0) throw NonpositiveConductance("ghost edge at " + ids[v]);
    if (!(m0[v] >= 0) || !std::isfinite(m0[v]))
      throw InvalidNetwork("bad m0 at " + ids[v]);
    if (is_boundary[v] && m0[v] != 0)
      throw InvalidNetwork("boundary vertex " + ids[v] + " carries m0 > 0");
  }

  net.ids = std::move(ids);
  net.edges = std::move(edges);
  net.m0 = std::move(m0);
  net.is_boundary = std::move(is_boundary);
  net.ghost_c = std::move(ghost_c);

  net.adj.assign(net.n, {});
  for (const Edge& e : net.edges) {
    net.adj[e.u].push_back({e.v, e.c});
    net.adj[e.v].push_back({e.u, e.c});
  }

  // connectivity (ghost edges do not connect)
  std::vector<char> vis(net.n, 0);
  std::vector<int> stack = {0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [w, c] : net.adj[v])
      if (!vis[w]) {
        vis[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != net.n) throw DisconnectedGraph(std::to_string(net.n - count) + " unreachable vertices");

  net.part_pos.assign(net.n, -1);
  for (int v = 0; v < net.n; ++v) {
    if (net.is_boundary[v]) {
      net.part_pos[v] = (int)net.boundary.size();
      net.boundary.push_back(v);
    } else {
      net.part_pos[v] = (int)net.interior.size();
      net.interior.push_back(v);
    }
  }
  if (net.interior.empty()) throw EmptyInterior("all vertices are boundary");
  double mtot = 0;
  for (int v : net.interior) mtot += net.m0[v];
  if (!(mtot > 0)) throw InvalidNetwork("total interior m0 is zero");
  return net;
}

double energy(const ResistanceNetwork& net, const VertexFunction& f) {
  return energy(net, f, f);
}

double energy(const ResistanceNetwork& net, const VertexFunction& f,
              const VertexFunction& g) {
  if ((int)f.size() != net.n || (int)g.size() != net.n)
    throw DimensionMismatch("function length != vertex count");
  double s = 0;
  for (const Edge& e : net.edges)
    s += e.c * (f[e.u] - f[e.v]) * (g[e.u] - g[e.v]);
  for (int v = 0; v < net.n; ++v)
    if (net.ghost_c[v] > 0) s += net.ghost_c[v] * f[v] * g[v];
  return s;
}

Eigen::SparseMatrix<double> laplacian(const ResistanceNetwork& net) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(net.edges.size() * 4 + net.n);
  std::vector<double> diag(net.n, 0.0);
  for (const Edge& e : net.edges) {
    trip.emplace_back(e.u, e.v, -e.c);
    trip.emplace_back(e.v, e.u, -e.c);
    diag[e.u] += e.c;
    diag[e.v] += e.c;
  }
  for (int v = 0; v < net.n; ++v) {
    diag[v] += net.ghost_c[v];
    trip.emplace_back(v, v, diag[v]);
  }
  Eigen::SparseMatrix<double> L(net.n, net.n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

NetworkDiagnostics validate(const ResistanceNetwork& net) {
  NetworkDiagnostics d;
  d.connected = true;  // build_network would have thrown
  d.boundary_count = net.boundary_count();
  d.interior_count = net.interior_count();
  d.min_degree = std::numeric_limits<int>::max();
  d.max_degree = 0;
  for (int v = 0; v < net.n; ++v) {
    int deg = (int)net.adj[v].size() + (net.ghost_c[v] > 0 ? 1 : 0);
    d.min_degree = std::min(d.min_degree, deg);
    d.max_degree = std::max(d.max_degree, deg);
  }
  for (int v : net.interior) d.m0_interior_total += net.m0[v];
  d.c_min = std::numeric_limits<double>::infinity();
  d.c_max = 0;
  for (const Edge& e : net.edges) {
    d.c_min = std::min(d.c_min, e.c);
    d.c_max = std::max(d.c_max, e.c);
  }
  return d;
}

}  // namespace kt
