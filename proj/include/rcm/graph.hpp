#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcm {

// Finite host graph standing in for a (possibly infinite) ambient graph.
// Vertices on virtual_boundary sit at the edge of the represented region:
// they would have further neighbors if the host were grown, and anything
// reaching them is treated as reaching infinity by the boundary-sensitive
// operations. Explicit graphs default to a closed universe (no flags set).
struct HostGraph {
  std::vector<std::string> name;
  std::vector<std::array<int, 2>> edge;  // endpoints with edge[e][0] < edge[e][1]
  std::vector<std::vector<int>> adj;     // vertex -> sorted neighbor vertices
  std::vector<std::vector<int>> inc;     // vertex -> incident edge ids, aligned with adj
  std::vector<char> virtual_boundary;
  std::map<std::pair<int, int>, int> edge_index;
  std::vector<std::vector<int>> dist;  // all-pairs hop distance, -1 if unreachable

  int n() const { return (int)name.size(); }
  int m() const { return (int)edge.size(); }

  int degree(int v) const { return (int)adj[v].size(); }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n(); ++v) d = std::max(d, degree(v));
    return d;
  }

  int edge_between(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = edge_index.find({u, v});
    return it == edge_index.end() ? -1 : it->second;
  }

  int vertex_by_name(const std::string& s) const {
    for (int v = 0; v < n(); ++v)
      if (name[v] == s) return v;
    throw std::invalid_argument("unknown vertex name: " + s);
  }

  // Call once after name/edge are filled.
  void finish() {
    adj.assign(n(), {});
    inc.assign(n(), {});
    edge_index.clear();
    for (int e = 0; e < m(); ++e) {
      auto [u, v] = edge[e];
      if (u > v) std::swap(edge[e][0], edge[e][1]), std::swap(u, v);
      if (u == v) throw std::invalid_argument("self-loop");
      if (!edge_index.emplace(std::make_pair(u, v), e).second)
        throw std::invalid_argument("duplicate edge");
    }
    // canonical edge order: lexicographic on endpoint pairs
    std::vector<int> order(m());
    for (int e = 0; e < m(); ++e) order[e] = e;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return edge[a] < edge[b]; });
    std::vector<std::array<int, 2>> ne(m());
    for (int i = 0; i < m(); ++i) ne[i] = edge[order[i]];
    edge = std::move(ne);
    edge_index.clear();
    for (int e = 0; e < m(); ++e)
      edge_index.emplace(std::make_pair(edge[e][0], edge[e][1]), e);
    for (int e = 0; e < m(); ++e) {
      adj[edge[e][0]].push_back(edge[e][1]);
      adj[edge[e][1]].push_back(edge[e][0]);
      inc[edge[e][0]].push_back(e);
      inc[edge[e][1]].push_back(e);
    }
    if ((int)virtual_boundary.size() != n()) virtual_boundary.assign(n(), 0);
    compute_all_pairs();
  }

  std::vector<int> bfs_from(int s) const {
    std::vector<int> d(n(), -1);
    std::queue<int> q;
    d[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (d[w] < 0) d[w] = d[v] + 1, q.push(w);
    }
    return d;
  }

  int distance(int u, int v) const { return dist[u][v]; }

  // hop distance between edges: closest endpoint pair
  int edge_distance(int e, int f) const {
    int d = INT32_MAX;
    for (int a : {edge[e][0], edge[e][1]})
      for (int b : {edge[f][0], edge[f][1]}) {
        int x = dist[a][b];
        if (x >= 0) d = std::min(d, x);
      }
    return d;
  }

 private:
  void compute_all_pairs() {
    dist.resize(n());
    for (int v = 0; v < n(); ++v) dist[v] = bfs_from(v);
  }
};

// A window: the finite vertex set the measure lives on, inside a host.
struct Window {
  const HostGraph* g = nullptr;
  std::vector<int> vert;  // sorted host vertex ids
  std::vector<int> widx;  // host id -> window index, -1 outside

  // window edges (both endpoints inside), in host-edge order
  std::vector<int> edge_host;                     // host edge id per window edge
  std::vector<std::array<int, 2>> edge_w;         // window-local endpoints
  std::vector<std::vector<std::pair<int, int>>> wadj;  // widx -> (widx, window edge)

  std::vector<char> internal_bdry;  // per window index
  std::vector<int> external_bdry;   // host ids outside, adjacent to the window
  std::vector<int> boundary_edges;  // host edge ids with one endpoint inside

  int nv() const { return (int)vert.size(); }
  int ne() const { return (int)edge_host.size(); }

  bool contains(int host_v) const { return widx[host_v] >= 0; }

  int interior_count() const {
    int c = 0;
    for (int i = 0; i < nv(); ++i)
      if (!internal_bdry[i]) ++c;
    return c;
  }

  std::vector<int> interior_vertices() const {  // host ids
    std::vector<int> r;
    for (int i = 0; i < nv(); ++i)
      if (!internal_bdry[i]) r.push_back(vert[i]);
    return r;
  }
};

inline Window make_window(const HostGraph& g, std::vector<int> verts) {
  Window w;
  w.g = &g;
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  w.vert = std::move(verts);
  w.widx.assign(g.n(), -1);
  for (int i = 0; i < w.nv(); ++i) {
    if (w.vert[i] < 0 || w.vert[i] >= g.n())
      throw std::invalid_argument("window vertex out of range");
    w.widx[w.vert[i]] = i;
  }
  w.wadj.assign(w.nv(), {});
  for (int e = 0; e < g.m(); ++e) {
    int iu = w.widx[g.edge[e][0]], iv = w.widx[g.edge[e][1]];
    if (iu >= 0 && iv >= 0) {
      int we = (int)w.edge_host.size();
      w.edge_host.push_back(e);
      w.edge_w.push_back({iu, iv});
      w.wadj[iu].push_back({iv, we});
      w.wadj[iv].push_back({iu, we});
    } else if (iu >= 0 || iv >= 0) {
      w.boundary_edges.push_back(e);
    }
  }
  // internal boundary: adjacent to host-minus-window, or on the virtual rim
  w.internal_bdry.assign(w.nv(), 0);
  std::vector<char> ext(g.n(), 0);
  for (int i = 0; i < w.nv(); ++i) {
    int v = w.vert[i];
    if (g.virtual_boundary[v]) w.internal_bdry[i] = 1;
    for (int u : g.adj[v])
      if (w.widx[u] < 0) {
        w.internal_bdry[i] = 1;
        ext[u] = 1;
      }
  }
  for (int v = 0; v < g.n(); ++v)
    if (ext[v]) w.external_bdry.push_back(v);
  return w;
}

// ---- template builders ------------------------------------------------

namespace detail {
inline void coord_name(const std::vector<int>& c, std::string& out) {
  out = "(";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(c[i]);
  }
  out += ")";
}
}  // namespace detail

struct BuiltTemplate {
  HostGraph host;
  std::vector<int> window_verts;  // host ids
  int margin = 0;
};

// Box window [0,dims_i) inside a host box [-margin, dims_i+margin); the
// host rim carries the virtual-boundary flag (it faces the rest of Z^d).
inline BuiltTemplate build_zd(const std::vector<int>& dims, int margin) {
  if (dims.empty()) throw std::invalid_argument("zd: empty dims");
  for (int d : dims)
    if (d <= 0) throw std::invalid_argument("zd: dims must be positive");
  if (margin < 0) throw std::invalid_argument("zd: negative margin");
  int D = (int)dims.size();
  std::vector<int> lo(D, -margin), hi(D);
  for (int i = 0; i < D; ++i) hi[i] = dims[i] + margin;  // exclusive
  std::vector<int> span(D), stride(D);
  long total = 1;
  for (int i = 0; i < D; ++i) {
    span[i] = hi[i] - lo[i];
    stride[i] = (int)total;
    total *= span[i];
  }
  if (total > 2'000'000) throw std::invalid_argument("zd: host too large");
  BuiltTemplate out;
  HostGraph& g = out.host;
  g.name.resize(total);
  g.virtual_boundary.assign(total, 0);
  std::vector<int> c(D);
  std::string nm;
  for (long v = 0; v < total; ++v) {
    long rem = v;
    bool rim = false, inside = true;
    for (int i = 0; i < D; ++i) {
      c[i] = lo[i] + (int)(rem % span[i]);
      rem /= span[i];
      if (c[i] == lo[i] || c[i] == hi[i] - 1) rim = true;
      if (c[i] < 0 || c[i] >= dims[i]) inside = false;
    }
    detail::coord_name(c, nm);
    g.name[v] = nm;
    g.virtual_boundary[v] = rim ? 1 : 0;
    if (inside) out.window_verts.push_back((int)v);
    for (int i = 0; i < D; ++i)
      if (c[i] + 1 < hi[i]) g.edge.push_back({(int)v, (int)(v + stride[i])});
  }
  g.finish();
  out.margin = margin;
  return out;
}

// k-regular tree truncated at depth+margin; the deepest layer carries the
// virtual-boundary flag. Window = vertices at depth <= depth. Names are
// root paths: "r", "r.0", "r.0.2", ...
inline BuiltTemplate build_tree(int degree, int depth, int margin) {
  if (degree < 2) throw std::invalid_argument("tree: degree must be >= 2");
  if (depth < 0 || margin < 0) throw std::invalid_argument("tree: bad depth/margin");
  int host_depth = depth + margin;
  BuiltTemplate out;
  HostGraph& g = out.host;
  struct Item {
    int id, d;
  };
  g.name.push_back("r");
  std::vector<int> vdepth = {0};
  std::queue<Item> q;
  q.push({0, 0});
  while (!q.empty()) {
    auto [v, d] = q.front();
    q.pop();
    if (d == host_depth) continue;
    int kids = (d == 0) ? degree : degree - 1;
    for (int i = 0; i < kids; ++i) {
      int u = (int)g.name.size();
      g.name.push_back(g.name[v] + "." + std::to_string(i));
      vdepth.push_back(d + 1);
      g.edge.push_back({v, u});
      q.push({u, d + 1});
      if ((int)g.name.size() > 2'000'000) throw std::invalid_argument("tree: host too large");
    }
  }
  g.virtual_boundary.assign(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) {
    if (vdepth[v] == host_depth && host_depth > 0) g.virtual_boundary[v] = 1;
    if (vdepth[v] <= depth) out.window_verts.push_back(v);
  }
  g.finish();
  out.margin = margin;
  return out;
}

inline BuiltTemplate build_explicit(const std::vector<std::string>& names,
                                    const std::vector<std::array<int, 2>>& edges,
                                    const std::vector<int>& boundary = {},
                                    const std::vector<int>& window = {}) {
  BuiltTemplate out;
  HostGraph& g = out.host;
  g.name = names;
  g.edge = edges;
  g.virtual_boundary.assign(names.size(), 0);
  for (int v : boundary) {
    if (v < 0 || v >= (int)names.size()) throw std::invalid_argument("boundary vertex out of range");
    g.virtual_boundary[v] = 1;
  }
  g.finish();
  if (!window.empty()) {
    out.window_verts = window;
  } else {
    for (int v = 0; v < g.n(); ++v)
      if (!g.virtual_boundary[v]) out.window_verts.push_back(v);
  }
  out.margin = 0;
  return out;
}

// ---- metric helpers ---------------------------------------------------

inline int set_diameter(const HostGraph& g, const std::vector<int>& verts) {
  if (verts.empty()) throw std::invalid_argument("diameter of empty set");
  int d = 0;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j) {
      int x = g.distance(verts[i], verts[j]);
      if (x < 0) throw std::invalid_argument("diameter: disconnected pair");
      d = std::max(d, x);
    }
  return d;
}

// Minimum total weight of a spanning tree on X under the host hop metric.
inline int tree_distance(const HostGraph& g, const std::vector<int>& X) {
  if (X.empty()) throw std::invalid_argument("tree_distance of empty set");
  size_t k = X.size();
  if (k == 1) return 0;
  std::vector<char> used(k, 0);
  std::vector<int> best(k, INT32_MAX);
  used[0] = 1;
  for (size_t j = 1; j < k; ++j) {
    best[j] = g.distance(X[0], X[j]);
    if (best[j] < 0) throw std::invalid_argument("tree_distance: disconnected");
  }
  int total = 0;
  for (size_t step = 1; step < k; ++step) {
    int pick = -1;
    for (size_t j = 0; j < k; ++j)
      if (!used[j] && (pick < 0 || best[j] < best[pick])) pick = (int)j;
    total += best[pick];
    used[pick] = 1;
    for (size_t j = 0; j < k; ++j)
      if (!used[j]) best[j] = std::min(best[j], g.distance(X[pick], X[j]));
  }
  return total;
}

// Host edges with exactly one endpoint in S (S given as host ids).
inline std::vector<int> edge_boundary(const HostGraph& g, const std::vector<int>& S) {
  std::vector<char> in(g.n(), 0);
  for (int v : S) in[v] = 1;
  std::vector<int> out;
  for (int e = 0; e < g.m(); ++e)
    if (in[g.edge[e][0]] != in[g.edge[e][1]]) out.push_back(e);
  return out;
}

// True when every incident host edge of every vertex of S exists in the host,
// i.e. S keeps clear of the virtual rim and its boundary is fully represented.
inline bool fully_represented(const HostGraph& g, const std::vector<int>& S) {
  for (int v : S)
    if (g.virtual_boundary[v]) return false;
  return true;
}

}  // namespace rcm
