#include "krontrace/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "krontrace/parallel.hpp"

namespace kt {

namespace {
double tent(double dist, double r, double eps) {
  double v = 2.0 - dist / (2.0 * (1.0 + eps) * r);
  return std::clamp(v, 0.0, 1.0);
}
}  // namespace

WhitneyCover build_cover(const GeneratedDomain& dom, double eps) {
  if (!(eps > 0) || eps > 0.125 + 1e-15)
    throw DataError("eps must lie in (0, 1/8]");
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  WhitneyCover cov;
  cov.epsilon = eps;
  cov.floor_dD = 4.0 * g.edge_length;

  std::vector<int> cand;
  for (int v : net.interior)
    if (g.d_D[v] >= cov.floor_dD - 1e-12 * g.edge_length) cand.push_back(v);
  if (cand.empty())
    throw ResolutionTooCoarse("no interior vertex clears the radius floor");
  // descending depth, index ties broken ascending: admission order is
  // deterministic
  std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
    if (g.d_D[a] != g.d_D[b]) return g.d_D[a] > g.d_D[b];
    return a < b;
  });

  // greedy: admit when the candidate ball misses every admitted ball
  std::vector<char> claimed(net.n, 0);
  std::vector<std::vector<double>> dist_rows;
  for (int x : cand) {
    double r = eps / (1.0 + eps) * g.d_D[x];
    std::vector<double> dist = graph_distances_from(net, x, g.edge_length);
    bool free_ball = true;
    for (int v = 0; v < net.n; ++v)
      if (dist[v] <= r && claimed[v]) {
        free_ball = false;
        break;
      }
    if (!free_ball) continue;
    for (int v = 0; v < net.n; ++v)
      if (dist[v] <= r) claimed[v] = 1;
    cov.centers.push_back(x);
    cov.radii.push_back(r);
    dist_rows.push_back(std::move(dist));
  }
  cov.center_dist = std::move(dist_rows);

  cov.patches.resize(cov.centers.size());
  for (size_t i = 0; i < cov.centers.size(); ++i) {
    double reach = 2.0 * g.d_D[cov.centers[i]];
    for (int j = 0; j < g.b; ++j)
      if (cov.center_dist[i][g.boundary[j]] <= reach)
        cov.patches[i].push_back(j);
    if (cov.patches[i].empty())
      throw EmptyPatch("center " + net.ids[cov.centers[i]]);
  }
  return cov;
}

CoverStats cover_stats(const GeneratedDomain& dom, const WhitneyCover& cov,
                       double lambda) {
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  const double e = cov.epsilon;
  if (!(lambda > 0) || !(lambda < (1 + e) / e))
    throw DataError("lambda must lie in (0, (1+eps)/eps)");
  const int nc = (int)cov.centers.size();
  CoverStats st;
  st.center_count = nc;
  st.lambda = lambda;
  st.min_radius = *std::min_element(cov.radii.begin(), cov.radii.end());
  st.max_radius = *std::max_element(cov.radii.begin(), cov.radii.end());
  st.neighbor_ratio_bound = (1 + e + e * lambda) / (1 + e - e * lambda);

  // dilated balls meet iff some vertex lies in both
  std::vector<std::vector<char>> meets(nc, std::vector<char>(nc, 0));
  parallel_for(nc, [&](int i) {
    for (int j = 0; j < nc; ++j) {
      bool hit = false;
      for (int v = 0; v < net.n && !hit; ++v)
        hit = cov.center_dist[i][v] <= lambda * cov.radii[i] &&
              cov.center_dist[j][v] <= lambda * cov.radii[j];
      meets[i][j] = hit;
    }
  });
  st.max_overlap = 0;
  st.neighbor_ratio = 1.0;
  for (int i = 0; i < nc; ++i) {
    int cnt = 0;
    for (int j = 0; j < nc; ++j)
      if (meets[i][j]) {
        ++cnt;
        if (j != i)
          st.neighbor_ratio =
              std::max(st.neighbor_ratio, cov.radii[i] / cov.radii[j]);
      }
    st.max_overlap = std::max(st.max_overlap, cnt);
  }

  for (int v : net.interior) {
    if (g.d_D[v] < cov.floor_dD - 1e-12 * g.edge_length) continue;
    double s = 0;
    for (int i = 0; i < nc; ++i)
      s += tent(cov.center_dist[i][v], cov.radii[i], cov.epsilon);
    if (!(s > 0)) ++st.uncovered_above_floor;
  }
  return st;
}

Report cover_stats_report(const GeneratedDomain& dom, const WhitneyCover& cov,
                          double lambda) {
  CoverStats st = cover_stats(dom, cov, lambda);
  Report rep;
  rep.name = "whitney-cover";
  for (size_t i = 0; i < cov.centers.size(); ++i) {
    ReportSample s;
    s.label = dom.net.ids[cov.centers[i]];
    s.x = dom.geom.d_D[cov.centers[i]];
    s.value = cov.radii[i];
    rep.samples.push_back(s);
  }
  finalize(rep);
  rep.note = "overlap " + std::to_string(st.max_overlap) + ", ratio " +
             std::to_string(st.neighbor_ratio) + " <= bound " +
             std::to_string(st.neighbor_ratio_bound) + ", uncovered " +
             std::to_string(st.uncovered_above_floor);
  rep.pass = st.uncovered_above_floor == 0 &&
             st.neighbor_ratio <= st.neighbor_ratio_bound + 1e-12;
  return rep;
}

PartitionOfUnity partition_of_unity(const GeneratedDomain& dom,
                                    const WhitneyCover& cov) {
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  const int nc = (int)cov.centers.size();
  PartitionOfUnity pou;
  pou.coverage.assign(net.n, 0.0);
  for (int i = 0; i < nc; ++i)
    for (int v = 0; v < net.n; ++v)
      pou.coverage[v] += tent(cov.center_dist[i][v], cov.radii[i], cov.epsilon);

  for (int v : net.interior)
    if (g.d_D[v] >= cov.floor_dD - 1e-12 * g.edge_length &&
        !(pou.coverage[v] > 0))
      throw UncoveredVertex(net.ids[v]);

  pou.psi.resize(nc);
  pou.hat_energy.assign(nc, 0.0);
  parallel_for(nc, [&](int i) {
    std::vector<double> hat(net.n, 0.0);
    for (int v = 0; v < net.n; ++v) {
      double t = tent(cov.center_dist[i][v], cov.radii[i], cov.epsilon);
      hat[v] = t;
      if (t > 0 && pou.coverage[v] > 0)
        pou.psi[i].push_back({v, t / pou.coverage[v]});
    }
    pou.hat_energy[i] = energy(net, hat);
  });
  return pou;
}

std::vector<double> extend(const GeneratedDomain& dom, const WhitneyCover& cov,
                           const PartitionOfUnity& pou,
                           const std::vector<double>& u,
                           const std::vector<double>& sigma) {
  const ResistanceNetwork& net = dom.net;
  const BoundaryGeometry& g = dom.geom;
  if ((int)u.size() != g.b || (int)sigma.size() != g.b)
    throw DimensionMismatch("boundary field length");
  const int nc = (int)cov.centers.size();

  std::vector<double> avg(nc, 0.0);
  for (int i = 0; i < nc; ++i) {
    double num = 0, den = 0;
    for (int j : cov.patches[i]) {
      num += sigma[j] * u[j];
      den += sigma[j];
    }
    if (!(den > 0)) throw EmptyPatch("zero patch mass");
    avg[i] = num / den;
  }

  std::vector<double> out(net.n, 0.0);
  for (int j = 0; j < g.b; ++j) out[g.boundary[j]] = u[j];
  for (int i = 0; i < nc; ++i)
    for (auto [v, w] : pou.psi[i]) out[v] += w * avg[i];

  for (int v : net.interior) {
    if (pou.coverage[v] > 0) continue;
    // below the floor and outside all tents: copy the nearest center
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nc; ++i)
      if (cov.center_dist[i][v] < bd) {
        bd = cov.center_dist[i][v];
        best = i;
      }
    out[v] = avg[best];
  }
  return out;
}

Report extension_report(const GeneratedDomain& dom, const WhitneyCover& cov,
                        const PartitionOfUnity& pou, const BesovKernel& kernel,
                        const std::vector<double>& sigma,
                        const std::vector<std::vector<double>>& fields) {
  Report rep;
  rep.name = "extension";
  int idx = 0;
  for (const std::vector<double>& u : fields) {
    double semi = besov_seminorm(kernel, u);
    ++idx;
    if (!(semi > 0)) continue;  // constant field carries no information here
    std::vector<double> f = extend(dom, cov, pou, u, sigma);
    ReportSample s;
    s.label = "field " + std::to_string(idx - 1);
    s.x = idx - 1;
    s.lhs = energy(dom.net, f);
    s.rhs = semi;
    s.value = s.lhs / semi;
    rep.samples.push_back(s);
  }
  if (rep.samples.empty()) throw DegenerateSample("no usable fields");
  finalize(rep);
  return rep;
}

Report restriction_report(const ResistanceNetwork& net,
                          const BesovKernel& kernel,
                          const std::vector<std::vector<double>>& fields) {
  if (kernel.b != net.boundary_count())
    throw DimensionMismatch("kernel vs boundary size");
  Report rep;
  rep.name = "restriction";
  int idx = 0;
  for (const std::vector<double>& f : fields) {
    if ((int)f.size() != net.n) throw DimensionMismatch("field length");
    double en = energy(net, f);
    ++idx;
    if (!(en > 0)) continue;
    std::vector<double> u(net.boundary_count());
    for (int j = 0; j < net.boundary_count(); ++j) u[j] = f[net.boundary[j]];
    ReportSample s;
    s.label = "field " + std::to_string(idx - 1);
    s.x = idx - 1;
    s.lhs = besov_seminorm(kernel, u);
    s.rhs = en;
    s.value = s.lhs / en;
    rep.samples.push_back(s);
  }
  if (rep.samples.empty()) throw DegenerateSample("no usable fields");
  finalize(rep);
  return rep;
}

}  // namespace kt
