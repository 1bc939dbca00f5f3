#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rcm/dsu.hpp"
#include "rcm/enumerate.hpp"
#include "rcm/gas.hpp"
#include "rcm/graph.hpp"
#include "rcm/oracle.hpp"
#include "rcm/rational.hpp"
#include "rcm/subexp.hpp"

// Large-p expansion: polymers are distance-R connected sets of closed window
// edges, two polymers compatible iff further than R apart. The activity of S
// is lambda^{|S|} (lambda = (1-p)/p) times q to the number of finite pieces
// S cuts out of the host, with a wall correction in the free case. The
// probability that X sits in one finite open component becomes a series over
// roots that trap X behind a fence of closed edges.

namespace rcm {

// ------------------------------------------------------------------
// convergence constants
// ------------------------------------------------------------------

struct SupCertificate {
  double lambda = 0;     // (1-p)/p
  double delta = 0;      // max(lambda*q, lambda), bounds |rho(S)|^(1/|S|)
  double amax = 0;       // max(2C,1) * deg^(2R), polymer counting base
  double z = 0;          // amax * e * delta
  double threshold = 0;  // z * (1 + deg^(R+1)); the series converges when <= 1
  bool threshold_ok = false;
  double p = 0, q = 0, growth = 0;
  int degree = 0, R = 1;
};

inline SupCertificate sup_certificate(double p, double q, int degree, int R, double C) {
  if (!(p > 0) || !(p <= 1)) throw std::invalid_argument("certificate needs p in (0,1]");
  if (!(q > 0)) throw std::invalid_argument("certificate needs q > 0");
  if (degree < 1 || R < 0 || !(C > 0))
    throw std::invalid_argument("bad template constants");
  SupCertificate c;
  c.p = p;
  c.q = q;
  c.degree = degree;
  c.R = R;
  c.growth = C;
  c.lambda = (1 - p) / p;
  c.delta = c.lambda * std::max(q, 1.0);
  c.amax = std::max(2 * C, 1.0) * std::pow((double)degree, 2.0 * R);
  c.z = c.amax * std::exp(1.0) * c.delta;
  c.threshold = c.z * (1 + std::pow((double)degree, R + 1.0));
  c.threshold_ok = c.threshold <= 1;
  return c;
}

// Smallest p whose certificate holds; the certified region is [p_star, 1].
inline double sup_p_star(double q, int degree, int R, double C) {
  if (!(q > 0) || degree < 1 || R < 0 || !(C > 0))
    throw std::invalid_argument("bad template constants");
  double amax = std::max(2 * C, 1.0) * std::pow((double)degree, 2.0 * R);
  double delta_star = 1.0 / (std::exp(1.0) * amax * (1 + std::pow((double)degree, R + 1.0)));
  double m = std::max(q, 1.0);
  return m / (m + delta_star);
}

// Inflation data: activities inflated by t^{|S|} keep the per-polymer
// convergence condition while z * t * (1 + deg^(R+1)) <= 1, so t_star =
// 1/threshold and cluster sums restricted to total size >= m shrink by
// t_star^{-m}. decay_factor = 1 + deg^{-(R+1)} bounds 1/(1-z).
struct SupTailInfo {
  double z = 0;
  double t_star = 0;
  double decay_factor = 0;
  bool ok = false;
};

inline SupTailInfo sup_tail_info(const SupCertificate& c) {
  SupTailInfo t;
  t.z = c.z;
  t.t_star = c.threshold > 0 ? 1.0 / c.threshold
                             : std::numeric_limits<double>::infinity();
  t.decay_factor = 1 + std::pow((double)c.degree, -(c.R + 1.0));
  t.ok = c.threshold_ok;
  return t;
}

// Geometric decay in the cut-set growth f: z^f / (1-z) with the certified
// bound on the prefactor. Infinite when the certificate fails.
inline double sup_decay_bound(const SupCertificate& c, long f) {
  SupTailInfo t = sup_tail_info(c);
  if (!t.ok) return std::numeric_limits<double>::infinity();
  return t.decay_factor * std::pow(c.z, (double)f);
}

// ------------------------------------------------------------------
// fences
// ------------------------------------------------------------------

// A fence is an edge set whose removal cuts exactly one finite piece out of
// the host, every edge being necessary for that piece to be finite.
// Finiteness is judged through the virtual boundary: a component touching
// it stands in for an infinite one.
struct Fence {
  std::vector<int> edges;           // sorted host edge ids
  std::vector<int> interior;        // sorted host vertex ids of the cut-off piece
  std::vector<int> interior_edges;  // sorted host edge ids inside the piece
};

namespace detail {

struct HostCut {
  std::vector<int> comp;       // host vertex -> component id
  std::vector<char> comp_inf;  // component id -> touches the virtual boundary
  int finite = 0;              // components with no virtual vertex
};

inline HostCut host_cut(const HostGraph& g, const std::vector<char>& closed) {
  Dsu d(g.n());
  for (int e = 0; e < g.m(); ++e)
    if (!closed[e]) d.unite(g.edge[e][0], g.edge[e][1]);
  HostCut cut;
  cut.comp.assign(g.n(), -1);
  std::vector<int> label(g.n(), -1);
  int next = 0;
  for (int v = 0; v < g.n(); ++v) {
    int r = d.find(v);
    if (label[r] < 0) {
      label[r] = next++;
      cut.comp_inf.push_back(0);
    }
    cut.comp[v] = label[r];
    if (g.virtual_boundary[v]) cut.comp_inf[label[r]] = 1;
  }
  for (char inf : cut.comp_inf)
    if (!inf) ++cut.finite;
  return cut;
}

inline std::vector<char> edge_mask(const HostGraph& g, const std::vector<int>& edges) {
  std::vector<char> m(g.m(), 0);
  for (int e : edges) {
    if (e < 0 || e >= g.m()) throw std::invalid_argument("edge id outside the host");
    m[e] = 1;
  }
  return m;
}

}  // namespace detail

// Decide whether `edges` is a fence; with `out` non-null and the answer yes,
// fill in the cut-off piece. Duplicate ids are collapsed.
inline bool is_fence(const HostGraph& g, const std::vector<int>& edges, Fence* out = nullptr) {
  if (edges.empty()) return false;
  std::vector<char> closed = detail::edge_mask(g, edges);
  detail::HostCut cut = detail::host_cut(g, closed);
  if (cut.finite != 1) return false;
  int inside = -1;
  for (int v = 0; v < g.n() && inside < 0; ++v)
    if (!cut.comp_inf[cut.comp[v]]) inside = cut.comp[v];
  std::vector<int> gamma;
  for (int e = 0; e < g.m(); ++e)
    if (closed[e]) gamma.push_back(e);
  for (int e : gamma) {
    closed[e] = 0;
    detail::HostCut relax = detail::host_cut(g, closed);
    closed[e] = 1;
    if (relax.finite != 0) return false;
  }
  if (out) {
    out->edges = std::move(gamma);
    out->interior.clear();
    out->interior_edges.clear();
    for (int v = 0; v < g.n(); ++v)
      if (cut.comp[v] == inside) out->interior.push_back(v);
    for (int e = 0; e < g.m(); ++e)
      if (!closed[e] && cut.comp[g.edge[e][0]] == inside && cut.comp[g.edge[e][1]] == inside)
        out->interior_edges.push_back(e);
  }
  return true;
}

struct FenceOptions {
  int max_edges = 8;
  int interior_cap = 0;  // 0: max_edges + max_edges^2/16
};

namespace detail {

inline int fence_interior_cap(const FenceOptions& opt) {
  if (opt.interior_cap > 0) return opt.interior_cap;
  return opt.max_edges + opt.max_edges * opt.max_edges / 16;
}

// Grow candidate interiors as connected vertex sets and keep the ones whose
// boundary is a fence. Completeness relies on boundaries not dipping back
// under max_edges once the interior outgrows the cap; that holds on lattice
// boxes and bounded-degree trees, and the two throws below catch a candidate
// the host cannot decide: one touching the virtual boundary, or one hitting
// the growth cap while its boundary is still small.
template <class Emit>
void fence_scan(const HostGraph& g, const std::vector<int>& contain,
                const std::vector<int>& universe, const FenceOptions& opt, Emit&& emit) {
  if (opt.max_edges < 1) return;
  int cap = fence_interior_cap(opt);
  VertexSetOptions vopt;
  vopt.min_size = 1;
  vopt.max_size = cap;
  vopt.contain = contain;
  Fence f;
  enumerate_connected_vertex_sets(g, universe, vopt, [&](const std::vector<int>& I) {
    std::vector<int> bd = edge_boundary(g, I);
    if ((int)bd.size() > opt.max_edges) return;
    for (int v : I)
      if (g.virtual_boundary[v])
        throw std::runtime_error("host margin too small to enumerate fences of this size");
    if ((int)I.size() == cap)
      throw std::runtime_error(
          "fence interior cap reached with a small boundary; raise interior_cap");
    if (is_fence(g, bd, &f)) emit((const Fence&)f);
  });
}

}  // namespace detail

// All fences whose interior contains `anchor`, with at most max_edges edges,
// each emitted once.
template <class Emit>
void enumerate_fences(const HostGraph& g, int anchor, const FenceOptions& opt, Emit&& emit) {
  if (anchor < 0 || anchor >= g.n()) throw std::invalid_argument("anchor outside the host");
  if (g.virtual_boundary[anchor])
    throw std::invalid_argument("anchor sits on the virtual boundary");
  std::vector<int> universe(g.n());
  std::iota(universe.begin(), universe.end(), 0);
  detail::fence_scan(g, {anchor}, universe, opt, emit);
}

// All fences through a given host edge: interiors contain exactly one of its
// endpoints, so the two growth passes are disjoint.
template <class Emit>
void enumerate_fences_edge(const HostGraph& g, int host_edge, const FenceOptions& opt,
                           Emit&& emit) {
  if (host_edge < 0 || host_edge >= g.m())
    throw std::invalid_argument("edge outside the host");
  for (int side = 0; side < 2; ++side) {
    int in = g.edge[host_edge][side];
    int out = g.edge[host_edge][1 - side];
    std::vector<int> universe;
    for (int v = 0; v < g.n(); ++v)
      if (v != out) universe.push_back(v);
    detail::fence_scan(g, {in}, universe, opt, emit);
  }
}

// True when every path from x to the virtual boundary crosses the fence.
// x must lie in the cut-off piece.
inline bool fence_crosses_rays(const HostGraph& g, const Fence& f, int x) {
  if (!std::binary_search(f.interior.begin(), f.interior.end(), x))
    throw std::invalid_argument("x is not inside the fence");
  std::vector<char> closed = detail::edge_mask(g, f.edges);
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack = {x};
  seen[x] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (g.virtual_boundary[v]) return false;
    for (int e : g.inc[v]) {
      if (closed[e]) continue;
      int u = g.edge[e][0] + g.edge[e][1] - v;
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return true;
}

inline bool surrounds(const Fence& f, const std::vector<int>& X) {
  if (X.empty()) return false;
  for (int x : X)
    if (!std::binary_search(f.interior.begin(), f.interior.end(), x)) return false;
  return true;
}

// X spread over at least two components once `edges` are removed.
inline bool separates(const HostGraph& g, const std::vector<int>& edges,
                      const std::vector<int>& X) {
  if (X.size() < 2) return false;
  detail::HostCut cut = detail::host_cut(g, detail::edge_mask(g, edges));
  for (size_t i = 1; i < X.size(); ++i)
    if (cut.comp[X[i]] != cut.comp[X[0]]) return true;
  return false;
}

// ------------------------------------------------------------------
// component counts and activities
// ------------------------------------------------------------------

namespace detail {

inline bool edges_r_connected(const HostGraph& g, const std::vector<int>& S, int R) {
  if (S.size() <= 1) return !S.empty();
  Dsu d((int)S.size());
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = i + 1; j < S.size(); ++j)
      if (g.edge_distance(S[i], S[j]) <= R) d.unite((int)i, (int)j);
  int r = d.find(0);
  for (size_t i = 1; i < S.size(); ++i)
    if (d.find((int)i) != r) return false;
  return true;
}

}  // namespace detail

// Finite pieces cut out of the host by closing S (wired counting).
inline int minimal_fence_count(const HostGraph& g, const std::vector<int>& S) {
  return detail::host_cut(g, detail::edge_mask(g, S)).finite;
}

// Free counting on a window: when S sits within distance R of the window's
// boundary edge set, the wall joins it as one closed polymer and one global
// piece is dropped from the count.
inline int minimal_fence_count(const Window& win, const std::vector<int>& S, Bc bc, int R) {
  const HostGraph& g = *win.g;
  if (bc == Bc::wired) return minimal_fence_count(g, S);
  if (win.boundary_edges.empty())
    throw std::invalid_argument("free counting needs a represented window boundary");
  std::vector<int> joint = S;
  joint.insert(joint.end(), win.boundary_edges.begin(), win.boundary_edges.end());
  std::sort(joint.begin(), joint.end());
  joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
  if (detail::edges_r_connected(g, joint, R)) return minimal_fence_count(g, joint) - 1;
  return minimal_fence_count(g, S);
}

// rho(S) = lambda^{|S|} q^{count}; S must consist of window edges.
template <class T>
T sup_activity(const Window& win, const std::vector<int>& S, const T& lambda, const T& q,
               Bc bc, int R) {
  const HostGraph& g = *win.g;
  for (int e : S)
    if (e < 0 || e >= g.m() || win.widx[g.edge[e][0]] < 0 || win.widx[g.edge[e][1]] < 0)
      throw std::invalid_argument("polymer edge outside the window");
  int count = minimal_fence_count(win, S, bc, R);
  return detail::spow(lambda, (long)S.size()) * detail::spow(q, count);
}

// ------------------------------------------------------------------
// trapping (the root condition)
// ------------------------------------------------------------------

namespace detail {

// Fences using only edges of P: their interiors are unions of finite pieces
// of the host with P closed.
template <class Emit>
void fences_within(const HostGraph& g, const std::vector<int>& P, Emit&& emit) {
  HostCut cut = host_cut(g, edge_mask(g, P));
  std::vector<std::vector<int>> piece;  // vertex lists of finite pieces
  std::vector<int> byc(cut.comp_inf.size(), -1);
  for (int v = 0; v < g.n(); ++v) {
    int c = cut.comp[v];
    if (cut.comp_inf[c]) continue;
    if (byc[c] < 0) {
      byc[c] = (int)piece.size();
      piece.emplace_back();
    }
    piece[byc[c]].push_back(v);
  }
  if (piece.size() > 16) throw std::runtime_error("too many finite pieces to scan fences");
  Fence f;
  for (uint32_t m = 1; m < (1u << piece.size()); ++m) {
    std::vector<int> W;
    for (size_t i = 0; i < piece.size(); ++i)
      if (m >> i & 1) W.insert(W.end(), piece[i].begin(), piece[i].end());
    std::sort(W.begin(), W.end());
    if (is_fence(g, edge_boundary(g, W), &f)) emit((const Fence&)f);
  }
}

}  // namespace detail

// The root condition: P holds a fence surrounding all of X such that no
// fence inside that fence's closed region splits X apart.
inline bool sup_root_traps(const HostGraph& g, const std::vector<int>& P,
                           const std::vector<int>& X) {
  if (X.empty()) throw std::invalid_argument("empty target set");
  detail::HostCut cut = detail::host_cut(g, detail::edge_mask(g, P));
  std::vector<std::vector<int>> piece;
  std::vector<int> byc(cut.comp_inf.size(), -1);
  for (int v = 0; v < g.n(); ++v) {
    int c = cut.comp[v];
    if (cut.comp_inf[c]) continue;
    if (byc[c] < 0) {
      byc[c] = (int)piece.size();
      piece.emplace_back();
    }
    piece[byc[c]].push_back(v);
  }
  std::vector<char> forced(piece.size(), 0);
  for (int x : X) {
    int b = byc[cut.comp[x]];
    if (b < 0) return false;  // x on the infinite side
    forced[b] = 1;
  }
  std::vector<int> optional;
  for (size_t i = 0; i < piece.size(); ++i)
    if (!forced[i]) optional.push_back((int)i);
  if (optional.size() > 16) throw std::runtime_error("too many finite pieces to scan fences");
  std::vector<char> in_p(g.m(), 0);
  for (int e : P) in_p[e] = 1;
  Fence f;
  for (uint32_t m = 0; m < (1u << optional.size()); ++m) {
    std::vector<int> W;
    for (size_t i = 0; i < piece.size(); ++i)
      if (forced[i]) W.insert(W.end(), piece[i].begin(), piece[i].end());
    for (size_t j = 0; j < optional.size(); ++j)
      if (m >> j & 1) {
        const auto& pc = piece[optional[j]];
        W.insert(W.end(), pc.begin(), pc.end());
      }
    std::sort(W.begin(), W.end());
    if (!is_fence(g, edge_boundary(g, W), &f)) continue;
    std::vector<char> keep(g.m(), 0);
    for (int e : f.edges) keep[e] = 1;
    for (int e : f.interior_edges) keep[e] = 1;
    std::vector<int> inner_p;
    for (int e : P)
      if (keep[e]) inner_p.push_back(e);
    bool split = false;
    detail::fences_within(g, inner_p, [&](const Fence& inner) {
      if (!split && separates(g, inner.edges, X)) split = true;
    });
    if (!split) return true;
  }
  return false;
}

// ------------------------------------------------------------------
// template verification
// ------------------------------------------------------------------

struct FenceCheck {
  long checked = 0;
  bool ok = true;
  std::vector<int> witness;  // edges of the first fence that is not R-connected
};

// Scan every fence whose interior sits inside the window's interior vertex
// set, up to max_edges, and test distance-R connectivity. These are the
// fences the series decomposition leans on, so a declared R is gated here
// when a context is built; beyond max_edges the declaration is trusted.
inline FenceCheck verify_window_fences(const Window& win, int max_edges, int R) {
  FenceCheck r;
  FenceOptions opt;
  opt.max_edges = max_edges;
  detail::fence_scan(*win.g, {}, win.interior_vertices(), opt, [&](const Fence& f) {
    ++r.checked;
    if (r.ok && !detail::edges_r_connected(*win.g, f.edges, R)) {
      r.ok = false;
      r.witness = f.edges;
    }
  });
  return r;
}

struct GrowthCheck {
  std::vector<long> f;  // smallest cut around diameter-n sets, n = 1..n_max
  bool ok = true;
};

// Empirical check of the declared cut-set growth constant C: the smallest
// edge boundary over connected sets of diameter n anchored at the given
// vertices must stay at or above C ln n.
inline GrowthCheck verify_growth_constant(const HostGraph& g, const std::vector<int>& anchors,
                                          double C, int n_max, int size_cap = 10) {
  GrowthCheck r;
  for (int n = 1; n <= n_max; ++n) {
    auto v = cut_set_function(g, anchors, n, size_cap);
    r.f.push_back((long)v.value);
    if ((double)v.value < C * std::log((double)n)) r.ok = false;
  }
  return r;
}

// ------------------------------------------------------------------
// exact engine (small windows)
// ------------------------------------------------------------------

namespace detail {

// Proxy soundness: any piece of the host that survives closing the window's
// edges (plus the wall, in the free case) while holding vertices outside the
// window interior must reach the virtual boundary, otherwise the margin
// misclassifies a potentially infinite piece as finite.
inline void check_sup_proxy(const Window& win, bool with_wall) {
  const HostGraph& g = *win.g;
  bool any_virtual = false;
  for (int v = 0; v < g.n(); ++v) any_virtual |= (bool)g.virtual_boundary[v];
  if (!any_virtual)
    throw std::invalid_argument("closed universe: nothing stands in for infinity");
  std::vector<char> closed(g.m(), 0);
  for (int e : win.edge_host) closed[e] = 1;
  if (with_wall) {
    if (win.boundary_edges.empty())
      throw std::invalid_argument("free counting needs a represented window boundary");
    for (int e : win.boundary_edges) closed[e] = 1;
  }
  HostCut cut = host_cut(g, closed);
  for (int v = 0; v < g.n(); ++v) {
    if (g.virtual_boundary[v]) continue;
    int w = win.widx[v];
    if (with_wall ? w >= 0 : (w >= 0 && !win.internal_bdry[w])) continue;
    if (!cut.comp_inf[cut.comp[v]])
      throw std::invalid_argument("host margin leaves a potentially infinite piece cut off");
  }
}

}  // namespace detail

// Full closed-edge polymer sum over subsets of the window's edge set:
//   Psi = sum over C subset E_N of prod over distance-R parts S of rho(S).
// Wired: Psi equals Zbar = Z / p^{|E_N|}. Free: q * Psi equals Zbar.
inline Rat sup_psi_exact(const Window& win, const Rat& p, const Rat& q, Bc bc, int R,
                         int edge_cap = 20) {
  const HostGraph& g = *win.g;
  int ne = win.ne();
  if (ne > edge_cap || ne > 24)
    throw std::invalid_argument("window too large for the exact polymer sum");
  if (!(p > 0) || p > 1 || !(q > 0)) throw std::invalid_argument("need p in (0,1] and q > 0");
  detail::check_sup_proxy(win, bc == Bc::free_);
  Rat lambda = (Rat(1) - p) / p;
  std::vector<uint64_t> adj(ne, 0);
  for (int i = 0; i < ne; ++i)
    for (int j = i + 1; j < ne; ++j)
      if (g.edge_distance(win.edge_host[i], win.edge_host[j]) <= R) {
        adj[i] |= 1ull << j;
        adj[j] |= 1ull << i;
      }
  std::unordered_map<uint64_t, int> memo;
  std::vector<int> host_s;
  auto part_count = [&](uint64_t m) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    host_s.clear();
    for (int i = 0; i < ne; ++i)
      if (m >> i & 1) host_s.push_back(win.edge_host[i]);
    int c = minimal_fence_count(win, host_s, bc, R);
    memo.emplace(m, c);
    return c;
  };
  Rat total(0);
  for (uint64_t conf = 0; conf < (1ull << ne); ++conf) {
    Rat term = rat_pow(lambda, std::popcount(conf));
    uint64_t rest = conf;
    while (rest) {
      uint64_t comp = rest & (~rest + 1);
      uint64_t frontier = comp;
      while (frontier) {
        uint64_t grow = 0;
        for (uint64_t f = frontier; f;) {
          int i = std::countr_zero(f);
          f &= f - 1;
          grow |= adj[i];
        }
        frontier = grow & rest & ~comp;
        comp |= frontier;
      }
      term *= rat_pow(q, part_count(comp));
      rest &= ~comp;
    }
    total += term;
  }
  return total;
}

// Exact finite-cluster probability through the trapping decomposition:
//   P = sum over C that trap X of the C weight, divided by Psi.
// The oracle derives the same probability from open components, which pins
// the trapping test down at configuration level.
inline Rat sup_phi_exact(const Window& win, const Rat& p, const Rat& q, Bc bc,
                         const std::vector<int>& X, int R, int edge_cap = 10) {
  const HostGraph& g = *win.g;
  int ne = win.ne();
  if (ne > edge_cap || ne > 12)
    throw std::invalid_argument("window too large for the exact trapping sum");
  if (!(p > 0) || p > 1 || !(q > 0)) throw std::invalid_argument("need p in (0,1] and q > 0");
  if (X.empty()) throw std::invalid_argument("empty target set");
  detail::check_sup_proxy(win, bc == Bc::free_);
  Rat lambda = (Rat(1) - p) / p;
  std::vector<uint64_t> adj(ne, 0);
  for (int i = 0; i < ne; ++i)
    for (int j = i + 1; j < ne; ++j)
      if (g.edge_distance(win.edge_host[i], win.edge_host[j]) <= R) {
        adj[i] |= 1ull << j;
        adj[j] |= 1ull << i;
      }
  Rat total(0), trapped(0);
  std::vector<int> host_c;
  for (uint64_t conf = 0; conf < (1ull << ne); ++conf) {
    Rat term = rat_pow(lambda, std::popcount(conf));
    uint64_t rest = conf;
    while (rest) {
      uint64_t comp = rest & (~rest + 1);
      uint64_t frontier = comp;
      while (frontier) {
        uint64_t grow = 0;
        for (uint64_t f = frontier; f;) {
          int i = std::countr_zero(f);
          f &= f - 1;
          grow |= adj[i];
        }
        frontier = grow & rest & ~comp;
        comp |= frontier;
      }
      host_c.clear();
      for (int i = 0; i < ne; ++i)
        if (comp >> i & 1) host_c.push_back(win.edge_host[i]);
      term *= rat_pow(q, minimal_fence_count(win, host_c, bc, R));
      rest &= ~comp;
    }
    total += term;
    host_c.clear();
    for (int i = 0; i < ne; ++i)
      if (conf >> i & 1) host_c.push_back(win.edge_host[i]);
    if (sup_root_traps(g, host_c, X)) trapped += term;
  }
  return trapped / total;
}

// ------------------------------------------------------------------
// series context (double precision)
// ------------------------------------------------------------------

namespace detail {

constexpr uint64_t kXBit = 1ull << 63;

inline uint64_t ball_union(const std::vector<uint64_t>& ball, uint64_t mask) {
  uint64_t r = 0;
  while (mask) {
    int i = std::countr_zero(mask);
    mask &= mask - 1;
    r |= ball[i];
  }
  return r;
}

}  // namespace detail

struct SupCore {
  const Window* win = nullptr;
  Rat p, q;
  double p_d = 0, q_d = 0, lambda_d = 0;
  int K = 0, R = 1, degree = 0;
  double growth = 1;
  SupCertificate cert;
  SupTailInfo tail;
  EdgeAdjacency ea;            // window edges at distance <= R
  std::vector<int> e2w;        // host edge -> window edge index, -1 outside
  std::vector<uint64_t> ball;  // per window edge: window edges within R
};

struct SupOptions {
  int R = 1;
  double C = 1;
  int verify_cap = 0;  // fence sizes certified R-connected; 0: min(K, 8)
};

namespace detail {

inline void init_sup_core(SupCore& cx, const Window& win, const Rat& p, const Rat& q, int K,
                          const SupOptions& opt) {
  const HostGraph& g = *win.g;
  if (K < 1 || K > 16) throw std::invalid_argument("series order K must be in [1,16]");
  if (win.ne() > 63) throw std::invalid_argument("window has too many edges to mask");
  if (opt.R < 0 || !(opt.C > 0)) throw std::invalid_argument("bad template constants");
  cx.win = &win;
  cx.p = p;
  cx.q = q;
  cx.p_d = p.get_d();
  cx.q_d = q.get_d();
  if (!(cx.p_d > 0) || cx.p_d > 1 || !(cx.q_d > 0))
    throw std::invalid_argument("need p in (0,1] and q > 0");
  cx.lambda_d = (1 - cx.p_d) / cx.p_d;
  cx.K = K;
  cx.R = opt.R;
  cx.growth = opt.C;
  cx.degree = g.max_degree();
  cx.cert = sup_certificate(cx.p_d, cx.q_d, cx.degree, cx.R, cx.growth);
  cx.tail = sup_tail_info(cx.cert);
  check_sup_proxy(win, false);
  check_sup_proxy(win, true);
  int vcap = opt.verify_cap > 0 ? opt.verify_cap : std::min(K, 8);
  FenceCheck fc = verify_window_fences(win, vcap, cx.R);
  if (!fc.ok)
    throw std::invalid_argument(
        "template ineligible: a window fence is not distance-R connected");
  cx.ea = EdgeAdjacency(g, win.edge_host, cx.R);
  cx.e2w.assign(g.m(), -1);
  for (int i = 0; i < win.ne(); ++i) cx.e2w[win.edge_host[i]] = i;
  cx.ball.assign(win.ne(), 0);
  for (int i = 0; i < win.ne(); ++i)
    for (int j = 0; j < win.ne(); ++j)
      if (g.edge_distance(win.edge_host[i], win.edge_host[j]) <= cx.R)
        cx.ball[i] |= 1ull << j;
}

struct SupAnimal {
  std::vector<int> edges;  // sorted host edge ids
  uint64_t mask = 0;
  int size = 0;
  double rho[2] = {0, 0};  // by (int)Bc
  bool xfenced = false;
};

inline void fill_sup_animal(const SupCore& cx, SupAnimal& a) {
  const Window& win = *cx.win;
  a.size = (int)a.edges.size();
  a.mask = 0;
  for (int e : a.edges) a.mask |= 1ull << cx.e2w[e];
  for (int b = 0; b < 2; ++b) {
    int count = minimal_fence_count(win, a.edges, (Bc)b, cx.R);
    a.rho[b] = std::pow(cx.lambda_d, a.size) * std::pow(cx.q_d, count);
  }
}

inline GasPolymer animal_gas(const SupCore& cx, const SupAnimal& a, int b) {
  GasPolymer gp;
  gp.supp = a.mask | (a.xfenced ? kXBit : 0);
  gp.excl = ball_union(cx.ball, a.mask) | (a.xfenced ? kXBit : 0);
  gp.size = a.size;
  gp.activity = a.rho[b];
  for (int i = 0; i < cx.win->ne(); ++i)
    if (a.mask >> i & 1) gp.items.push_back(i);
  return gp;
}

}  // namespace detail

// Context without a target set: cluster sums for log Psi and the pressure.
struct SupContext : SupCore {
  int pool_cap = 0;
  std::vector<detail::SupAnimal> animal;  // nondecreasing size
  std::vector<GasPolymer> gas[2];         // same order, activities by Bc
  GasGraph graph;
};

inline SupContext make_sup_context(const Window& win, const Rat& p, const Rat& q, int K,
                                   const SupOptions& opt = {}) {
  SupContext cx;
  detail::init_sup_core(cx, win, p, q, K, opt);
  cx.pool_cap = K;
  std::vector<std::vector<detail::SupAnimal>> bucket(cx.pool_cap + 1);
  EdgeSetOptions eopt;
  eopt.min_size = 1;
  eopt.max_size = cx.pool_cap;
  enumerate_r_connected_edge_sets(cx.ea, eopt, [&](const std::vector<int>& S) {
    detail::SupAnimal a;
    a.edges = S;
    detail::fill_sup_animal(cx, a);
    bucket[a.size].push_back(std::move(a));
  });
  for (auto& b : bucket)
    for (auto& a : b) cx.animal.push_back(std::move(a));
  for (int b = 0; b < 2; ++b) {
    cx.gas[b].reserve(cx.animal.size());
    for (const auto& a : cx.animal) cx.gas[b].push_back(detail::animal_gas(cx, a, b));
  }
  cx.graph = build_gas_graph(cx.gas[0], cx.K);
  return cx;
}

// One X-anchored polymer: distance-R connected parts, each holding a fence
// whose interior meets X, pairwise further than R apart.
struct SupXMember {
  std::vector<std::vector<int>> parts;    // sorted host edge ids per part
  std::vector<std::vector<int>> witness;  // one fence per part, meeting X
  std::vector<int> edges;                 // union, sorted host edge ids
  uint64_t mask = 0;
  int size = 0;
  double rho[2] = {0, 0};  // product over parts, by (int)Bc
  bool root = false;       // passes the trapping test
};

namespace detail {

struct SupXBuild {
  std::vector<SupXMember> member;       // nondecreasing size
  std::vector<uint64_t> seed_mask;      // in-window fences meeting X
  std::vector<std::vector<int>> seeds;  // their host edge lists
};

// Seeds are the fences with interiors inside the window interior that meet
// X; every part of an X-anchored polymer contains one, so parts are grown as
// supersets of seeds and assemblies are far-apart combinations of parts.
inline SupXBuild build_x_members(const SupCore& cx, const std::vector<int>& X, int cap) {
  const Window& win = *cx.win;
  const HostGraph& g = *win.g;
  SupXBuild out;
  if (cap < 1) return out;
  std::vector<int> interior = win.interior_vertices();
  {
    std::unordered_set<uint64_t> seen;
    FenceOptions fopt;
    fopt.max_edges = cap;
    for (int x : X)
      fence_scan(g, {x}, interior, fopt, [&](const Fence& f) {
        uint64_t m = 0;
        for (int e : f.edges) m |= 1ull << cx.e2w[e];
        if (seen.insert(m).second) {
          out.seed_mask.push_back(m);
          out.seeds.push_back(f.edges);
        }
      });
  }
  if (out.seeds.empty()) return out;
  // parts: distance-R connected supersets of a seed within the window
  std::vector<uint64_t> part_mask;
  {
    std::unordered_set<uint64_t> seen;
    for (const auto& s : out.seeds) {
      std::vector<int> rest(s.begin() + 1, s.end());
      enumerate_connected_rooted(
          s[0], g.m(), cx.ea.allowed, (int)s.size(), cap,
          [&](int e) -> const std::vector<int>& { return cx.ea.neighbor[e]; },
          [&](const std::vector<int>& S) {
            uint64_t m = 0;
            for (int e : S) m |= 1ull << cx.e2w[e];
            if (seen.insert(m).second) part_mask.push_back(m);
          },
          &rest);
    }
  }
  std::sort(part_mask.begin(), part_mask.end(),
            [](uint64_t a, uint64_t b) { return std::popcount(a) < std::popcount(b); });
  auto member_from_parts = [&](const std::vector<uint64_t>& pm) {
    SupXMember mem;
    mem.rho[0] = mem.rho[1] = 1;
    for (uint64_t m : pm) {
      SupAnimal a;
      for (int i = 0; i < win.ne(); ++i)
        if (m >> i & 1) a.edges.push_back(win.edge_host[i]);
      fill_sup_animal(const_cast<SupCore&>(cx), a);
      mem.parts.push_back(a.edges);
      for (size_t s = 0; s < out.seed_mask.size(); ++s)
        if ((m & out.seed_mask[s]) == out.seed_mask[s]) {
          mem.witness.push_back(out.seeds[s]);
          break;
        }
      mem.edges.insert(mem.edges.end(), a.edges.begin(), a.edges.end());
      mem.mask |= m;
      mem.size += a.size;
      for (int b = 0; b < 2; ++b) mem.rho[b] *= a.rho[b];
    }
    std::sort(mem.edges.begin(), mem.edges.end());
    return mem;
  };
  std::vector<std::vector<SupXMember>> bucket(cap + 1);
  std::vector<uint64_t> pick;
  std::function<void(size_t, int, uint64_t)> assemble = [&](size_t from, int used,
                                                            uint64_t excl) {
    if (!pick.empty()) {
      SupXMember mem = member_from_parts(pick);
      bucket[mem.size].push_back(std::move(mem));
    }
    for (size_t i = from; i < part_mask.size(); ++i) {
      int sz = std::popcount(part_mask[i]);
      if (used + sz > cap) break;
      if (excl & part_mask[i]) continue;
      pick.push_back(part_mask[i]);
      assemble(i + 1, used + sz, excl | ball_union(cx.ball, part_mask[i]));
      pick.pop_back();
    }
  };
  assemble(0, 0, 0);
  for (auto& b : bucket)
    for (auto& m : b) out.member.push_back(std::move(m));
  return out;
}

}  // namespace detail

// Context for one target set X: roots, the X-aware polymer pool, and the
// incompatibility graph. Polymers holding a fence that meets X carry a
// shared marker bit, making any two of them incompatible.
struct SupXContext : SupCore {
  std::vector<int> X;  // sorted host vertex ids
  std::vector<SupXMember> member;
  std::vector<int> roots;  // indices into member
  int rmin = 0;            // smallest root size, K+1 when there is none
  int pool_cap = 0;
  std::vector<GasPolymer> gas[2];
  GasGraph graph;
};

inline SupXContext make_sup_x_context(const Window& win, const Rat& p, const Rat& q, int K,
                                      std::vector<int> X, const SupOptions& opt = {}) {
  SupXContext cx;
  detail::init_sup_core(cx, win, p, q, K, opt);
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  if (X.empty()) throw std::invalid_argument("empty target set");
  for (int x : X) {
    int w = x >= 0 && x < win.g->n() ? win.widx[x] : -1;
    if (w < 0 || win.internal_bdry[w])
      throw std::invalid_argument("target vertices must lie in the window interior");
  }
  cx.X = std::move(X);
  detail::SupXBuild build = detail::build_x_members(cx, cx.X, K);
  cx.member = std::move(build.member);
  for (int i = 0; i < (int)cx.member.size(); ++i)
    if (sup_root_traps(*win.g, cx.member[i].edges, cx.X)) {
      cx.member[i].root = true;
      cx.roots.push_back(i);
    }
  cx.rmin = K + 1;
  for (int i : cx.roots) cx.rmin = std::min(cx.rmin, cx.member[i].size);
  cx.pool_cap = std::max(0, K - cx.rmin);
  std::vector<std::vector<detail::SupAnimal>> bucket(cx.pool_cap + 1);
  if (cx.pool_cap >= 1) {
    EdgeSetOptions eopt;
    eopt.min_size = 1;
    eopt.max_size = cx.pool_cap;
    enumerate_r_connected_edge_sets(cx.ea, eopt, [&](const std::vector<int>& S) {
      detail::SupAnimal a;
      a.edges = S;
      detail::fill_sup_animal(cx, a);
      for (uint64_t sm : build.seed_mask)
        if ((a.mask & sm) == sm) {
          a.xfenced = true;
          break;
        }
      bucket[a.size].push_back(std::move(a));
    });
    // multi-part members are polymers of their own; single parts already
    // appear above as marked animals
    for (const auto& m : cx.member)
      if (m.parts.size() >= 2 && m.size <= cx.pool_cap) {
        detail::SupAnimal a;
        a.edges = m.edges;
        a.mask = m.mask;
        a.size = m.size;
        a.rho[0] = m.rho[0];
        a.rho[1] = m.rho[1];
        a.xfenced = true;
        bucket[a.size].push_back(std::move(a));
      }
  }
  std::vector<detail::SupAnimal> pool;
  for (auto& b : bucket)
    for (auto& a : b) pool.push_back(std::move(a));
  for (int b = 0; b < 2; ++b) {
    cx.gas[b].reserve(pool.size());
    for (const auto& a : pool) cx.gas[b].push_back(detail::animal_gas(cx, a, b));
  }
  cx.graph = build_gas_graph(cx.gas[0], cx.K);
  return cx;
}

// Public enumeration of X-anchored polymers, without activities.
struct XPolymer {
  std::vector<std::vector<int>> parts;
  std::vector<std::vector<int>> witness;
  std::vector<int> edges;
  int size = 0;
};

inline std::vector<XPolymer> enumerate_x_polymers(const Window& win, std::vector<int> X,
                                                  int max_total, int R = 1) {
  SupCore core;
  SupOptions opt;
  opt.R = R;
  detail::init_sup_core(core, win, Rat(1, 2), Rat(1), std::min(std::max(max_total, 1), 16),
                        opt);
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  if (X.empty()) throw std::invalid_argument("empty target set");
  for (int x : X) {
    int w = x >= 0 && x < win.g->n() ? win.widx[x] : -1;
    if (w < 0 || win.internal_bdry[w])
      throw std::invalid_argument("target vertices must lie in the window interior");
  }
  if (max_total > 16) throw std::invalid_argument("polymer size cap exceeds 16");
  detail::SupXBuild build = detail::build_x_members(core, X, max_total);
  std::vector<XPolymer> out;
  out.reserve(build.member.size());
  for (auto& m : build.member) {
    XPolymer p;
    p.parts = std::move(m.parts);
    p.witness = std::move(m.witness);
    p.edges = std::move(m.edges);
    p.size = m.size;
    out.push_back(std::move(p));
  }
  return out;
}

// ------------------------------------------------------------------
// truncated series
// ------------------------------------------------------------------

struct SupSeries {
  double value = 0;
  int K = 0;
  double tail = std::numeric_limits<double>::infinity();
  bool tail_ok = false;
  double tail_roots = 0, tail_geom = 0;
  SupCertificate cert;
  std::vector<double> by_size;
  long roots = 0;
  double leading_scale = 0;  // set by the one-site series
};

// Truncated log of the polymer partition function: all clusters of total
// size <= K. Every cluster is anchored at a window edge, so the missing mass
// is at most ne * t_star^{-(K+1)}.
inline SupSeries sup_log_psi_series(const SupContext& cx, Bc bc, int K = 0) {
  if (K <= 0) K = cx.K;
  if (K > cx.K) throw std::invalid_argument("K exceeds the context cap");
  SupSeries s;
  s.K = K;
  s.cert = cx.cert;
  s.by_size.assign(K + 1, 0.0);
  s.value = sum_clusters_connected(cx.gas[(int)bc], cx.graph, K, &s.by_size);
  s.tail_ok = cx.tail.ok;
  s.tail = s.tail_ok ? cx.win->ne() * std::pow(cx.tail.t_star, -(double)(K + 1))
                     : std::numeric_limits<double>::infinity();
  return s;
}

// Truncated trapping probability: each root contributes rho(P) times
// exp(-hitting cluster sum) with cluster budget K - |P|. The tail has a
// piece for the truncated exp factors and a geometric piece for roots
// beyond K.
inline SupSeries sup_phi_series(const SupXContext& cx, Bc bc, int K = 0) {
  if (K <= 0) K = cx.K;
  if (K > cx.K) throw std::invalid_argument("K exceeds the context cap");
  SupSeries s;
  s.K = K;
  s.cert = cx.cert;
  s.by_size.assign(K + 1, 0.0);
  const auto& pool = cx.gas[(int)bc];
  for (int ri : cx.roots) {
    const SupXMember& m = cx.member[ri];
    if (m.size > K) continue;
    int budget = K - m.size;
    double hsum = 0;
    if (budget >= 1 && !pool.empty()) {
      GasPolymer root;
      root.supp = m.mask | detail::kXBit;
      root.excl = detail::ball_union(cx.ball, m.mask) | detail::kXBit;
      std::vector<int> hits;
      for (int i = 0; i < (int)pool.size(); ++i)
        if (gas_incompatible(root, pool[i])) hits.push_back(i);
      if (!hits.empty()) hsum = sum_clusters_connected_hitting(pool, cx.graph, budget, hits);
    }
    double term = m.rho[(int)bc] * std::exp(-hsum);
    s.value += term;
    s.by_size[m.size] += term;
    ++s.roots;
    if (cx.tail.ok)
      s.tail_roots += std::abs(m.rho[(int)bc]) * std::exp((double)m.size) *
                      std::expm1(m.size * std::pow(cx.tail.t_star, -(double)(budget + 1)));
  }
  if (cx.tail.ok) {
    s.tail_geom = std::pow(cx.cert.z, (double)(K + 1)) / (1 - cx.cert.z);
    s.tail = s.tail_roots + s.tail_geom;
    s.tail_ok = true;
  }
  return s;
}

// One minus the trapping probability of a single site. At p = 1 there are
// no closed edges and the value is exactly 1. leading_scale records the
// probability that every edge at the site is open.
inline SupSeries sup_theta_series(const SupXContext& cx, Bc bc, int K = 0) {
  if (cx.X.size() != 1) throw std::invalid_argument("the one-site series needs |X| = 1");
  SupSeries s = sup_phi_series(cx, bc, K);
  s.value = 1 - s.value;
  s.leading_scale = std::pow(1 - cx.p_d, (double)cx.win->g->degree(cx.X[0]));
  return s;
}

// ------------------------------------------------------------------
// pressure
// ------------------------------------------------------------------

struct SupPressure {
  double value = 0;    // (|E_N| ln p + log Psi) / |V_N|, wired
  double log_psi = 0;  // truncated cluster sum
  double tail = std::numeric_limits<double>::infinity();
  bool tail_ok = false;
  int K = 0;
  SupCertificate cert;
};

// Wired finite-window pressure: ln Z = |E_N| ln p + ln Psi exactly, so only
// the cluster sum is truncated.
inline SupPressure sup_pressure_series(const SupContext& cx, int K = 0) {
  SupSeries ls = sup_log_psi_series(cx, Bc::wired, K);
  SupPressure r;
  r.K = ls.K;
  r.cert = cx.cert;
  r.log_psi = ls.value;
  int nv = cx.win->nv();
  r.value = ((double)cx.win->ne() * std::log(cx.p_d) + ls.value) / nv;
  r.tail_ok = ls.tail_ok;
  r.tail = ls.tail_ok ? ls.tail / nv : std::numeric_limits<double>::infinity();
  return r;
}

struct SupDensity {
  double value = 0;
  int K = 0;
};

// Per-edge share of the wired cluster series: a cluster splits its weight
// over its polymers uniformly and each polymer spreads its share evenly over
// its edges, so summing the density over all window edges reproduces the
// truncated log Psi exactly.
inline SupDensity sup_pressure_density(const SupContext& cx, int window_edge, int K = 0) {
  if (K <= 0) K = cx.K;
  if (K > cx.K) throw std::invalid_argument("K exceeds the context cap");
  if (window_edge < 0 || window_edge >= cx.win->ne())
    throw std::invalid_argument("edge index outside the window");
  const auto& pool = cx.gas[(int)Bc::wired];
  std::function<double(const std::vector<int>&)> share =
      [&](const std::vector<int>& expanded) {
        double s = 0;
        for (int i : expanded)
          if (pool[i].supp >> window_edge & 1) s += 1.0 / pool[i].size;
        return s / (double)expanded.size();
      };
  SupDensity d;
  d.K = K;
  d.value = sum_clusters_connected_weighted(pool, cx.graph, K, share);
  return d;
}

// The pressure reassembled from per-edge densities; equal to
// sup_pressure_series by the exact resummation.
inline SupPressure sup_pressure_from_density(const SupContext& cx, int K = 0) {
  if (K <= 0) K = cx.K;
  double total = 0;
  for (int e = 0; e < cx.win->ne(); ++e) total += sup_pressure_density(cx, e, K).value;
  SupPressure r;
  r.K = K;
  r.cert = cx.cert;
  r.log_psi = total;
  int nv = cx.win->nv();
  r.value = ((double)cx.win->ne() * std::log(cx.p_d) + total) / nv;
  r.tail_ok = cx.tail.ok;
  r.tail = cx.tail.ok ? cx.win->ne() * std::pow(cx.tail.t_star, -(double)(K + 1)) / nv
                      : std::numeric_limits<double>::infinity();
  return r;
}

// ------------------------------------------------------------------
// polymer counting
// ------------------------------------------------------------------

struct SupCountReport {
  int n = 0;
  long animals_max = 0;  // polymers of size n through a fixed window edge, maximized
  long xpolymers = 0;    // X-anchored polymers of size n
  double bound = 0;      // amax^n
  bool ok_animals = false, ok_xpolymers = false, ok_joint = false, ok = false;
};

// Empirical gate for the counting base behind the convergence constant:
// both species are counted at size n and compared with amax^n, separately
// and jointly. The fence connectivity check runs first, so templates whose
// fences outgrow the declared R are rejected here.
inline SupCountReport sup_counting_check(const Window& win, const std::vector<int>& X, int n,
                                         int R = 1, double C = 1, int fence_verify_cap = 8) {
  const HostGraph& g = *win.g;
  if (n < 1 || n > 16) throw std::invalid_argument("counting size must be in [1,16]");
  detail::check_sup_proxy(win, false);
  FenceCheck fc = verify_window_fences(win, fence_verify_cap, R);
  if (!fc.ok)
    throw std::invalid_argument(
        "template ineligible: a window fence is not distance-R connected");
  SupCore core;
  SupOptions opt;
  opt.R = R;
  opt.C = C;
  opt.verify_cap = fence_verify_cap;
  detail::init_sup_core(core, win, Rat(1, 2), Rat(1), std::min(n, 16), opt);
  SupCountReport r;
  r.n = n;
  std::vector<long> through(win.ne(), 0);
  EdgeSetOptions eopt;
  eopt.min_size = n;
  eopt.max_size = n;
  enumerate_r_connected_edge_sets(core.ea, eopt, [&](const std::vector<int>& S) {
    for (int e : S) ++through[core.e2w[e]];
  });
  for (long c : through) r.animals_max = std::max(r.animals_max, c);
  if (!X.empty()) {
    std::vector<int> xs = X;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (int x : xs) {
      int w = x >= 0 && x < g.n() ? win.widx[x] : -1;
      if (w < 0 || win.internal_bdry[w])
        throw std::invalid_argument("target vertices must lie in the window interior");
    }
    detail::SupXBuild build = detail::build_x_members(core, xs, n);
    for (const auto& m : build.member)
      if (m.size == n) ++r.xpolymers;
  }
  double amax = std::max(2 * C, 1.0) * std::pow((double)g.max_degree(), 2.0 * R);
  r.bound = std::pow(amax, (double)n);
  r.ok_animals = (double)r.animals_max <= r.bound;
  r.ok_xpolymers = (double)r.xpolymers <= r.bound;
  r.ok_joint = (double)(r.animals_max + r.xpolymers) <= r.bound;
  r.ok = r.ok_animals && r.ok_xpolymers;
  return r;
}

}  // namespace rcm
