#include "krontrace/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "krontrace/parallel.hpp"

namespace kt {

double BoundaryGeometry::sigma_ball(int bi, double r,
                                    const std::vector<double>& sigma_b) const {
  double s = 0;
  for (int j = 0; j < b; ++j)
    if (rho(bi, j) <= r) s += sigma_b[j];
  return s;
}

double BoundaryGeometry::m0_ball(int bi, double r,
                                 const std::vector<double>& m0) const {
  double s = 0;
  for (int v = 0; v < n; ++v)
    if (rho_vertex_boundary(v, bi) <= r) s += m0[v];
  return s;
}

std::vector<double> graph_distances_from(const ResistanceNetwork& net,
                                         int source, double edge_length) {
  std::vector<int> hops(net.n, -1);
  std::deque<int> q;
  hops[source] = 0;
  q.push_back(source);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (auto [w, c] : net.adj[v])
      if (hops[w] < 0) {
        hops[w] = hops[v] + 1;
        q.push_back(w);
      }
  }
  std::vector<double> d(net.n);
  for (int v = 0; v < net.n; ++v) d[v] = hops[v] * edge_length;
  return d;
}

namespace {

// rho_vb by BFS from every boundary vertex; rho_bb from graph rows unless the
// caller overwrites it with a closed-form metric afterwards.
void build_geometry(GeneratedDomain& dom, double edge_length) {
  const ResistanceNetwork& net = dom.net;
  BoundaryGeometry& g = dom.geom;
  g.n = net.n;
  g.boundary = net.boundary;
  g.b = (int)g.boundary.size();
  g.edge_length = edge_length;
  g.boundary_pos.assign(net.n, -1);
  for (int j = 0; j < g.b; ++j) g.boundary_pos[g.boundary[j]] = j;

  g.rho_vb.assign((size_t)net.n * g.b, 0.0);
  parallel_for(g.b, [&](int j) {
    std::vector<double> d = graph_distances_from(net, g.boundary[j], edge_length);
    for (int v = 0; v < net.n; ++v) g.rho_vb[(size_t)v * g.b + j] = d[v];
  });

  g.d_D.assign(net.n, 0.0);
  for (int v = 0; v < net.n; ++v) {
    double m = g.rho_vb[(size_t)v * g.b];
    for (int j = 1; j < g.b; ++j)
      m = std::min(m, g.rho_vb[(size_t)v * g.b + j]);
    g.d_D[v] = m;
  }

  g.rho_bb.assign((size_t)g.b * g.b, 0.0);
  for (int i = 0; i < g.b; ++i)
    for (int j = 0; j < g.b; ++j)
      g.rho_bb[(size_t)i * g.b + j] = g.rho_vb[(size_t)g.boundary[i] * g.b + j];
  g.diam_boundary = *std::max_element(g.rho_bb.begin(), g.rho_bb.end());
}

int deepest_interior(const GeneratedDomain& dom) {
  int best = -1;
  double bd = -1;
  for (int v : dom.net.interior)
    if (dom.geom.d_D[v] > bd) {
      bd = dom.geom.d_D[v];
      best = v;
    }
  return best;
}

}  // namespace

GeneratedDomain gen_star(const std::vector<double>& c) {
  int n = (int)c.size();
  if (n < 2) throw BadDimensions("star needs at least 2 leaves");
  for (double ci : c)
    if (!(ci > 0)) throw NonpositiveConductance("star edge");
  GeneratedDomain dom;
  std::vector<std::string> ids = {"o"};
  std::vector<Edge> edges;
  std::vector<double> m0 = {1.0};
  std::vector<char> bnd = {0};
  for (int i = 0; i < n; ++i) {
    ids.push_back("x" + std::to_string(i + 1));
    edges.push_back({0, i + 1, c[i]});
    m0.push_back(0.0);
    bnd.push_back(1);
  }
  dom.net = build_network(ids, edges, m0, bnd);
  dom.kind = "star";
  dom.sigma_uniform.assign(n, 1.0 / n);
  build_geometry(dom, 1.0);
  dom.deep_vertex = 0;
  return dom;
}

GeneratedDomain gen_path(int n_edges, const std::vector<double>& c) {
  if (n_edges < 2) throw BadDimensions("path needs at least 2 edges");
  std::vector<double> cc = c;
  if (cc.empty()) cc.assign(n_edges, 1.0);
  if ((int)cc.size() != n_edges)
    throw DimensionMismatch("path conductance count");
  GeneratedDomain dom;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  std::vector<double> m0;
  std::vector<char> bnd;
  for (int v = 0; v <= n_edges; ++v) {
    ids.push_back(std::to_string(v));
    bool is_b = (v == 0 || v == n_edges);
    bnd.push_back(is_b);
    m0.push_back(is_b ? 0.0 : 1.0);
    if (v < n_edges) edges.push_back({v, v + 1, cc[v]});
  }
  dom.net = build_network(ids, edges, m0, bnd);
  dom.kind = "path";
  dom.sigma_uniform.assign(2, 0.5);
  build_geometry(dom, 1.0);
  dom.deep_vertex = n_edges / 2;
  return dom;
}

GeneratedDomain gen_sg_slit(int level) {
  if (level < 1 || level > 8) throw LevelOutOfRange("level " + std::to_string(level));
  const int n = level;
  const int N = 1 << n;
  // cell address digits d in {0,1,2} shift the base point by Q_d * 2^(n-1-pos):
  // Q_0=(0,1) up, Q_1=(0,0), Q_2=(1,0); corners = base + {(0,0),(1,0),(0,1)}
  struct Cell {
    int bi, bj;
    std::vector<int> digits;
  };
  std::vector<Cell> cells;
  cells.reserve((size_t)std::pow(3, n));
  std::vector<int> digits(n, 0);
  for (long idx = 0, total = (long)std::pow(3, n); idx < total; ++idx) {
    long t = idx;
    int bi = 0, bj = 0;
    for (int p = 0; p < n; ++p) {
      digits[n - 1 - p] = t % 3;
      t /= 3;
    }
    for (int p = 0; p < n; ++p) {
      int d = digits[p];
      int scale = 1 << (n - 1 - p);
      if (d == 0) bj += scale;
      if (d == 2) bi += scale;
    }
    cells.push_back({bi, bj, digits});
  }

  // vertex ids: bottom (i,0) splits into L_i/R_i for 0<i<N; everything else
  // is one vertex per lattice corner
  auto pack = [N](int i, int j) { return i * (N + 1) + j; };
  std::map<int, int> corner_id;     // non-bottom corners and the two ends
  std::map<int, int> left_id, right_id;  // split bottom copies

  std::vector<std::string> ids;
  std::vector<char> bnd;
  std::vector<double> m0v;
  std::vector<std::string> words;

  auto word_of = [n, N](int pos, int s) {
    // boundary copy at bottom position pos: s=1 means right copy (cell m=pos),
    // s=2 means left copy (cell m=pos-1); letters are the binary digits + 1
    int m = (s == 1) ? pos : pos - 1;
    std::string w;
    for (int k = n - 1; k >= 0; --k) w += char('1' + ((m >> k) & 1));
    w += char('0' + s);
    return w;
  };

  // boundary first, in left-to-right bottom order
  auto add_boundary = [&](int pos, int s) {
    int id = (int)ids.size();
    std::string w = word_of(pos, s);
    ids.push_back(w);
    bnd.push_back(1);
    m0v.push_back(0.0);
    words.push_back(w);
    return id;
  };
  corner_id[pack(0, 0)] = add_boundary(0, 1);  // p1
  for (int i = 1; i < N; ++i) {
    left_id[i] = add_boundary(i, 2);
    right_id[i] = add_boundary(i, 1);
  }
  corner_id[pack(N, 0)] = add_boundary(N, 2);  // p2

  std::map<int, int> cell_count;  // interior corner -> #cells containing it
  auto interior_corner = [&](int i, int j) {
    int key = pack(i, j);
    auto it = corner_id.find(key);
    if (it != corner_id.end()) return it->second;
    int id = (int)ids.size();
    corner_id[key] = id;
    ids.push_back("v" + std::to_string(i) + "_" + std::to_string(j));
    bnd.push_back(0);
    m0v.push_back(0.0);
    return id;
  };

  std::vector<Edge> edges;
  const double cond = std::pow(5.0 / 3.0, n);
  auto endpoint = [&](int i, int j, bool is_left_corner) {
    // is_left_corner: the corner is the cell's bottom-left (A) vs bottom-right (B)
    if (j == 0 && i > 0 && i < N) return is_left_corner ? right_id[i] : left_id[i];
    if (j == 0) return corner_id[pack(i, 0)];
    return interior_corner(i, j);
  };
  for (const Cell& cell : cells) {
    int ai = cell.bi, aj = cell.bj;          // A bottom-left
    int bi2 = cell.bi + 1, bj2 = cell.bj;    // B bottom-right
    int ci = cell.bi, cj = cell.bj + 1;      // C apex
    for (int corner = 0; corner < 3; ++corner) {
      int ii = corner == 0 ? ai : (corner == 1 ? bi2 : ci);
      int jj = corner == 0 ? aj : (corner == 1 ? bj2 : cj);
      if (jj > 0) cell_count[pack(ii, jj)]++;
    }
    int A = endpoint(ai, aj, true);
    int B = endpoint(bi2, bj2, false);
    int C = endpoint(ci, cj, true);  // apex never at j=0
    if (aj > 0) edges.push_back({A, B, cond});  // bottom edges removed at j=0
    edges.push_back({A, C, cond});
    edges.push_back({B, C, cond});
  }
  const double mass_unit = std::pow(3.0, -n);
  for (auto [key, id] : corner_id)
    if (!bnd[id]) m0v[id] = mass_unit * cell_count[key];

  GeneratedDomain dom;
  dom.net = build_network(ids, edges, m0v, bnd);
  dom.kind = "sg-slit";
  dom.level = n;
  dom.boundary_words = words;  // boundary vertices were added first, in order
  dom.sigma_uniform.assign(dom.net.boundary_count(), std::pow(2.0, -(n + 1)));
  build_geometry(dom, std::pow(2.0, -n));

  // boundary metric: word distance (3/2)*2^-k, k = first differing letter - 1
  BoundaryGeometry& g = dom.geom;
  for (int i = 0; i < g.b; ++i)
    for (int j = 0; j < g.b; ++j) {
      if (i == j) {
        g.rho_bb[(size_t)i * g.b + j] = 0;
        continue;
      }
      const std::string& wi = words[i];
      const std::string& wj = words[j];
      int k = 0;
      while (k < (int)wi.size() && wi[k] == wj[k]) ++k;
      g.rho_bb[(size_t)i * g.b + j] = 1.5 * std::pow(2.0, -k);
    }
  g.diam_boundary = 1.5;
  dom.deep_vertex = corner_id[pack(0, N)];  // apex
  return dom;
}

GeneratedDomain gen_half_strip(int W, int H, FarMode far_mode) {
  return gen_half_strip_attenuated(W, H, far_mode, 1.0);
}

GeneratedDomain gen_half_strip_attenuated(int W, int H, FarMode far_mode,
                                          double depth_decay) {
  if (W < 8 || H < W / 2) throw BadDimensions("need W >= 8 and H >= W/2");
  if (!(depth_decay > 0)) throw BadDimensions("depth decay must be positive");
  GeneratedDomain dom;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  std::vector<double> m0;
  std::vector<char> bnd;
  std::vector<double> ghost;
  auto vid = [W](int x, int y) { return y * (W + 1) + x; };
  for (int y = 0; y <= H; ++y)
    for (int x = 0; x <= W; ++x) {
      ids.push_back(std::to_string(x) + "_" + std::to_string(y));
      bnd.push_back(y == 0);
      m0.push_back(y == 0 ? 0.0 : 1.0);
      ghost.push_back(far_mode == FarMode::absorbing && y == H ? 1.0 : 0.0);
      double cd = std::pow(depth_decay, y);
      if (x < W) edges.push_back({vid(x, y), vid(x + 1, y), cd});
      if (y < H) edges.push_back({vid(x, y), vid(x, y + 1), cd});
    }
  dom.net = build_network(ids, edges, m0, bnd, ghost);
  dom.kind = "half-strip";
  dom.width = W;
  dom.height = H;
  dom.sigma_uniform.assign(W + 1, 1.0);
  build_geometry(dom, 1.0);
  dom.deep_vertex = vid(W / 2, H);
  return dom;
}

GeneratedDomain gen_grid_slit(int W, int slit_len) {
  if (slit_len <= 0 || slit_len >= (W + 1) / 2)
    throw BadDimensions("need 0 < slit_len < W/2");
  const int yc = W / 2;
  const int x0 = (W - slit_len) / 2;
  const int x1 = x0 + slit_len;
  GeneratedDomain dom;
  std::vector<std::string> ids;
  std::vector<double> m0;
  std::vector<char> bnd;
  // up/down copies for strictly interior slit vertices, one id otherwise
  std::vector<int> up((size_t)(W + 1) * (W + 1), -1), dn = up;
  auto split = [&](int x, int y) { return y == yc && x > x0 && x < x1; };
  for (int y = 0; y <= W; ++y)
    for (int x = 0; x <= W; ++x) {
      std::string base = std::to_string(x) + "_" + std::to_string(y);
      bool tip = (y == yc && (x == x0 || x == x1));
      size_t key = (size_t)y * (W + 1) + x;
      if (split(x, y)) {
        up[key] = (int)ids.size();
        ids.push_back(base + "_u");
        bnd.push_back(1);
        m0.push_back(0.0);
        dn[key] = (int)ids.size();
        ids.push_back(base + "_d");
        bnd.push_back(1);
        m0.push_back(0.0);
      } else {
        up[key] = dn[key] = (int)ids.size();
        ids.push_back(base);
        bnd.push_back(tip);
        m0.push_back(tip ? 0.0 : 1.0);
      }
    }
  std::vector<Edge> edges;
  auto key = [W](int x, int y) { return (size_t)y * (W + 1) + x; };
  for (int y = 0; y <= W; ++y)
    for (int x = 0; x <= W; ++x) {
      bool on_slit = (y == yc && x >= x0 && x <= x1);
      if (x < W) {
        bool next_on_slit = (y == yc && x + 1 >= x0 && x + 1 <= x1);
        if (on_slit && next_on_slit) {
          // doubled edge along the slit line; tip-tip pairs merge into one
          int uu = up[key(x, y)], uv = up[key(x + 1, y)];
          int du = dn[key(x, y)], dv = dn[key(x + 1, y)];
          if (uu == du && uv == dv) {
            edges.push_back({uu, uv, 2.0});
          } else {
            edges.push_back({uu, uv, 1.0});
            edges.push_back({du, dv, 1.0});
          }
        } else {
          edges.push_back({up[key(x, y)], up[key(x + 1, y)], 1.0});
        }
      }
      if (y < W) {
        // vertical edge: the lower endpoint's up side meets the upper
        // endpoint's down side
        edges.push_back({up[key(x, y)], dn[key(x, y + 1)], 1.0});
      }
    }
  dom.net = build_network(ids, edges, m0, bnd);
  dom.kind = "grid-slit";
  dom.width = W;
  dom.level = slit_len;
  dom.sigma_uniform.assign(dom.net.boundary_count(), 1.0);
  build_geometry(dom, 1.0);
  dom.deep_vertex = deepest_interior(dom);
  return dom;
}

GeneratedDomain gen_comb(int teeth, double growth) {
  if (teeth < 2) throw BadDimensions("comb needs at least 2 teeth");
  if (!(growth > 0)) throw NonpositiveConductance("tooth growth");
  GeneratedDomain dom;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  std::vector<double> m0;
  std::vector<char> bnd;
  for (int i = 0; i < teeth; ++i) {  // spine
    ids.push_back("s" + std::to_string(i));
    bnd.push_back(0);
    m0.push_back(1.0);
    if (i > 0) edges.push_back({i - 1, i, 1.0});
  }
  for (int i = 0; i < teeth; ++i) {  // tooth tips
    ids.push_back("t" + std::to_string(i));
    bnd.push_back(1);
    m0.push_back(0.0);
    edges.push_back({i, teeth + i, std::pow(growth, i)});
  }
  dom.net = build_network(ids, edges, m0, bnd);
  dom.kind = "comb";
  dom.width = teeth;
  dom.sigma_uniform.assign(teeth, 1.0 / teeth);
  build_geometry(dom, 1.0);
  dom.deep_vertex = teeth / 2;
  return dom;
}

std::vector<double> admissible_radii(const GeneratedDomain& dom) {
  std::vector<double> r;
  if (dom.kind == "sg-slit") {
    // k = level is still nontrivial: closed balls at 1.5*2^-level are the two-point cells.
    for (int k = dom.level; k >= 1; --k) r.push_back(1.5 * std::pow(2.0, -k));
  } else {
    int lo = (dom.kind == "star" || dom.kind == "path") ? 1 : 2;
    for (int k = lo; k <= (int)std::floor(dom.geom.diam_boundary / 2); ++k)
      r.push_back(k);
  }
  return r;
}

}  // namespace kt
