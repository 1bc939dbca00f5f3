#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rcm/dsu.hpp"
#include "rcm/enumerate.hpp"
#include "rcm/gas.hpp"
#include "rcm/graph.hpp"
#include "rcm/oracle.hpp"
#include "rcm/rational.hpp"

// Small-p expansion: polymers are connected vertex sets of size >= 2, two
// polymers compatible iff disjoint. The activity of R collects the open-edge
// weight of every connected spanning subgraph of the window restricted to R,
// divided by a q power that depends on the boundary condition.

namespace rcm {

// ------------------------------------------------------------------
// convergence constants
// ------------------------------------------------------------------

struct SubCertificate {
  double eps_star = 0;  // (e*deg/q) |ln(1-p)| / (1-p)^deg
  double eps = 0;       // max(eps_star, q*eps_star)
  double a_value = 0;   // ln(1 + 1/sqrt(2))
  double threshold = 0;  // (3+2*sqrt(2)) * eps
  bool threshold_ok = false;  // connectivity-series condition
  bool pressure_ok = false;   // 2 e^2 eps_star < 1
  double p = 0, q = 1;
  int degree = 0;
};

inline SubCertificate sub_certificate(double p, double q, int degree) {
  if (p < 0 || p >= 1) throw std::invalid_argument("sub certificate needs 0 <= p < 1");
  if (q <= 0 || degree < 1) throw std::invalid_argument("sub certificate needs q > 0, degree >= 1");
  SubCertificate c;
  c.p = p;
  c.q = q;
  c.degree = degree;
  c.a_value = std::log1p(1.0 / std::sqrt(2.0));
  c.eps_star = std::exp(1.0) * degree / q * std::abs(std::log1p(-p)) / std::pow(1 - p, degree);
  c.eps = c.eps_star * std::max(1.0, q);
  c.threshold = (3 + 2 * std::sqrt(2.0)) * c.eps;
  c.threshold_ok = c.threshold <= 1;
  c.pressure_ok = 2 * std::exp(2.0) * c.eps_star < 1;
  return c;
}

namespace detail {
template <class Ok>
double largest_good_p(Ok&& ok) {
  // both thresholds are increasing in p, so the good region is [0, p*)
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}
}  // namespace detail

inline double sub_p_star(double q, int degree) {
  return detail::largest_good_p(
      [&](double p) { return sub_certificate(p, q, degree).threshold_ok; });
}

inline double sub_pressure_p_star(double q, int degree) {
  return detail::largest_good_p(
      [&](double p) { return sub_certificate(p, q, degree).pressure_ok; });
}

// Inflation data for tail bounds: with mu = 1/sqrt(2) and y = eps*t*(1+mu),
// activities inflated by t^{|R|} still satisfy the per-vertex convergence
// condition iff y^2 + mu*eps*y - mu*eps <= 0. t_star is the largest valid t;
// it sits above 1 exactly when the threshold certificate holds, and cluster
// sums of total size >= m gain a factor t_star^{-m}.
struct SubTailInfo {
  double mu = 0, a = 0, eps = 0, y0 = 0;
  double t_star = 0;
  bool ok = false;
};

inline SubTailInfo sub_tail_info(const SubCertificate& cert) {
  SubTailInfo t;
  t.mu = 1.0 / std::sqrt(2.0);
  t.a = std::log1p(t.mu);
  t.eps = cert.eps;
  t.y0 = cert.eps * (1 + t.mu);
  if (cert.eps == 0) {
    t.t_star = std::numeric_limits<double>::infinity();
    t.ok = true;
    return t;
  }
  double me = t.mu * cert.eps;
  double ystar = (-me + std::sqrt(me * me + 4 * me)) / 2;
  t.t_star = ystar / (cert.eps * (1 + t.mu));
  t.ok = cert.threshold_ok && t.t_star >= 1.0 && t.y0 < 1.0;
  return t;
}

// ------------------------------------------------------------------
// activities
// ------------------------------------------------------------------

namespace detail {

inline Rat spow(const Rat& b, long e) { return rat_pow(b, e); }
inline double spow(double b, long e) { return std::pow(b, (double)e); }

// Subset tables over a local universe given by adjacency bitmasks:
// wall[S] = (1+lambda)^{edges inside S}, wconn[S] = the same sum restricted
// to connected spanning subgraphs, via the pivot recursion
//   wconn(S) = wall(S) - sum_{T proper subset of S, T containing low(S)}
//              wconn(T) * wall(S \ T).
// wconn[S] = 0 exactly on disconnected S (and everywhere of size >= 2 when
// lambda = 0). Cost 3^n.
template <class T>
struct SubsetWeights {
  std::vector<T> wall, wconn;
  std::vector<int> ecnt;
};

template <class T>
void build_subset_weights(const std::vector<uint32_t>& amask, const T& lambda,
                          SubsetWeights<T>& out) {
  int n = (int)amask.size();
  if (n > 20) throw std::invalid_argument("subset weight table: universe too large");
  uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  out.ecnt.assign(full + 1, 0);
  for (uint32_t S = 1; S <= full; ++S) {
    int low = __builtin_ctz(S);
    uint32_t rest = S & (S - 1);
    out.ecnt[S] = out.ecnt[rest] + __builtin_popcount(amask[low] & rest);
  }
  std::vector<T> pw(out.ecnt[full] + 1);
  pw[0] = T(1);
  for (size_t m = 1; m < pw.size(); ++m) pw[m] = pw[m - 1] * (T(1) + lambda);
  out.wall.assign(full + 1, T(0));
  out.wconn.assign(full + 1, T(0));
  for (uint32_t S = 0; S <= full; ++S) out.wall[S] = pw[out.ecnt[S]];
  for (uint32_t S = 1; S <= full; ++S) {
    uint32_t lowbit = S & -S;
    T acc = out.wall[S];
    // proper submasks of S that contain the pivot bit
    for (uint32_t T2 = (S - 1) & S; T2; T2 = (T2 - 1) & S) {
      if (!(T2 & lowbit)) continue;
      acc -= out.wconn[T2] * out.wall[S ^ T2];
    }
    out.wconn[S] = acc;
    if (S == full) break;
  }
}

// local adjacency bitmasks for a sorted list of window vertex indices
inline std::vector<uint32_t> local_adjacency(const Window& win, const std::vector<int>& wverts) {
  int k = (int)wverts.size();
  std::vector<uint32_t> amask(k, 0);
  for (int i = 0; i < k; ++i)
    for (auto [w, e] : win.wadj[wverts[i]]) {
      auto it = std::lower_bound(wverts.begin(), wverts.end(), w);
      if (it != wverts.end() && *it == w) {
        int j = (int)(it - wverts.begin());
        amask[i] |= 1u << j;
      }
    }
  return amask;
}

}  // namespace detail

// Activity of one polymer, brute force over edge subsets; the subset-table
// path is checked against this in the tests.
template <class T>
T sub_activity_brute(const Window& win, const std::vector<int>& host_verts, const T& lambda,
                     const T& q, Bc bc) {
  std::vector<int> wv;
  for (int v : host_verts) {
    if (!win.contains(v)) throw std::invalid_argument("polymer vertex outside window");
    wv.push_back(win.widx[v]);
  }
  std::sort(wv.begin(), wv.end());
  int k = (int)wv.size();
  if (k < 2) throw std::invalid_argument("polymers have size >= 2");
  // collect internal edges
  std::vector<std::array<int, 2>> edges;
  for (int i = 0; i < k; ++i)
    for (auto [w, e] : win.wadj[wv[i]]) {
      int j = (int)(std::lower_bound(wv.begin(), wv.end(), w) - wv.begin());
      if (j < k && wv[j] == w && i < j) edges.push_back({i, j});
    }
  int m = (int)edges.size();
  if (m > 24) throw std::invalid_argument("brute activity: too many edges");
  T wsum(0);
  Dsu dsu(k);
  for (uint32_t sub = 0; sub < (1u << m); ++sub) {
    dsu.reset();
    int comps = k;
    for (int e = 0; e < m; ++e)
      if (sub >> e & 1)
        if (dsu.unite(edges[e][0], edges[e][1])) --comps;
    if (comps == 1) wsum += detail::spow(lambda, __builtin_popcount(sub));
  }
  long bc_exp;
  if (bc == Bc::wired) {
    int b = 0;
    for (int i : wv)
      if (win.internal_bdry[i]) ++b;
    bc_exp = b ? -(long)(k - b) : 1 - (long)k;
  } else {
    bc_exp = 1 - (long)k;
  }
  return wsum * detail::spow(q, bc_exp);
}

// ------------------------------------------------------------------
// exact engine (small windows): full polymer sum and exact series
// ------------------------------------------------------------------

// Holds 2^nv activity tables for a window. The family sum F runs over all
// collections of pairwise disjoint polymers inside a vertex mask:
//   F(M) = F(M \ v) + sum_{S in M, S containing v, |S| >= 2} rho(S) F(M \ S),
// v the lowest vertex of M. F(full) is the polymer partition function, and
// F(full \ R)/F(full) is the exact pinned ratio the truncated series
// approximates with its exp(-cluster sum) factor.
struct SubExact {
  const Window* win = nullptr;
  Rat p, q, lambda;
  int nv = 0;
  uint32_t full = 0;
  uint32_t bdry = 0;  // internal-boundary mask over window indices
  detail::SubsetWeights<Rat> tables;

  Rat rho(uint32_t S, Bc bc) const {
    int k = __builtin_popcount(S);
    if (k < 2) return Rat(0);
    const Rat& w = tables.wconn[S];
    if (w == 0) return Rat(0);
    long e;
    if (bc == Bc::wired) {
      int b = __builtin_popcount(S & bdry);
      e = b ? -(long)(k - b) : 1 - (long)k;
    } else {
      e = 1 - (long)k;
    }
    return w * rat_pow(q, e);
  }
};

inline SubExact build_sub_exact(const Window& win, const Rat& p, const Rat& q) {
  if (win.nv() > 16) throw std::invalid_argument("exact polymer sums capped at 16 vertices");
  if (p < 0 || p >= 1) throw std::invalid_argument("exact polymer sums need 0 <= p < 1");
  if (q <= 0) throw std::invalid_argument("q must be positive");
  SubExact se;
  se.win = &win;
  se.p = p;
  se.q = q;
  se.lambda = p / (Rat(1) - p);
  se.nv = win.nv();
  se.full = (se.nv == 32) ? ~0u : ((1u << se.nv) - 1);
  for (int i = 0; i < se.nv; ++i)
    if (win.internal_bdry[i]) se.bdry |= 1u << i;
  std::vector<uint32_t> amask(se.nv, 0);
  for (int i = 0; i < se.nv; ++i)
    for (auto [w, e] : win.wadj[i]) amask[i] |= 1u << w;
  detail::build_subset_weights(amask, se.lambda, se.tables);
  return se;
}

inline std::vector<Rat> sub_family_table(const SubExact& se, Bc bc) {
  std::vector<Rat> F(se.full + 1);
  F[0] = 1;
  for (uint32_t M = 1; M <= se.full; ++M) {
    uint32_t lowbit = M & -M;
    Rat acc = F[M ^ lowbit];
    for (uint32_t S = M; S; S = (S - 1) & M) {
      if (!(S & lowbit)) continue;
      Rat r = se.rho(S, bc);
      if (r != 0) acc += r * F[M ^ S];
    }
    F[M] = acc;
    if (M == se.full) break;
  }
  return F;
}

inline Rat sub_xi_exact(const SubExact& se, Bc bc) { return sub_family_table(se, bc)[se.full]; }

// Exact all-orders series for the probability that X sits inside one open
// component (of size >= 2): sum over connected R containing X of
// rho(R) * F(complement)/F(full). Matches the oracle's connectivity.
inline Rat sub_phi_exact(const SubExact& se, Bc bc, const std::vector<int>& X_host) {
  if (X_host.empty()) throw std::invalid_argument("X must be nonempty");
  uint32_t xmask = 0;
  for (int v : X_host) {
    if (!se.win->contains(v)) throw std::invalid_argument("X vertex outside window");
    xmask |= 1u << se.win->widx[v];
  }
  std::vector<Rat> F = sub_family_table(se, bc);
  uint32_t rest = se.full ^ xmask;
  Rat acc(0);
  // supersets of xmask: xmask | T for T a submask of the complement
  uint32_t T = rest;
  while (true) {
    uint32_t S = xmask | T;
    Rat r = se.rho(S, bc);
    if (r != 0) acc += r * F[se.full ^ S];
    if (T == 0) break;
    T = (T - 1) & rest;
  }
  return acc / F[se.full];
}

// ------------------------------------------------------------------
// series context (double precision)
// ------------------------------------------------------------------

struct SubPolymerSet {
  std::vector<uint64_t> supp;            // window-vertex masks
  std::vector<std::vector<int>> verts;   // sorted window indices
  std::vector<int> size;
  std::vector<std::vector<int>> by_vertex;  // window index -> polymer ids
};

inline SubPolymerSet enumerate_sub_polymers(const Window& win, int max_size) {
  if (win.nv() > 64) throw std::invalid_argument("series windows capped at 64 vertices");
  SubPolymerSet ps;
  if (max_size < 2) {
    ps.by_vertex.resize(win.nv());
    return ps;
  }
  VertexSetOptions opt;
  opt.min_size = 2;
  opt.max_size = max_size;
  std::vector<std::vector<int>> bucket(max_size + 1);
  // bucket by size so the pool ends up sorted; enumeration emits host ids
  std::vector<int> wv;
  enumerate_connected_vertex_sets(*win.g, win.vert, opt, [&](const std::vector<int>& hv) {
    wv.clear();
    for (int v : hv) wv.push_back(win.widx[v]);
    std::sort(wv.begin(), wv.end());
    bucket[wv.size()].insert(bucket[wv.size()].end(), wv.begin(), wv.end());
  });
  for (int s = 2; s <= max_size; ++s) {
    for (size_t off = 0; off < bucket[s].size(); off += s) {
      std::vector<int> v(bucket[s].begin() + off, bucket[s].begin() + off + s);
      uint64_t m = 0;
      for (int w : v) m |= 1ull << w;
      ps.supp.push_back(m);
      ps.verts.push_back(std::move(v));
      ps.size.push_back(s);
    }
  }
  ps.by_vertex.resize(win.nv());
  for (size_t i = 0; i < ps.verts.size(); ++i)
    for (int w : ps.verts[i]) ps.by_vertex[w].push_back((int)i);
  return ps;
}

namespace detail {

// double-precision activity for a polymer given as sorted window indices
inline double sub_activity_d(const Window& win, const std::vector<int>& wverts, double lambda,
                             double q, Bc bc, SubsetWeights<double>& scratch) {
  std::vector<uint32_t> amask = local_adjacency(win, wverts);
  build_subset_weights(amask, lambda, scratch);
  int k = (int)wverts.size();
  double w = scratch.wconn[(1u << k) - 1];
  long e;
  if (bc == Bc::wired) {
    int b = 0;
    for (int i : wverts)
      if (win.internal_bdry[i]) ++b;
    e = b ? -(long)(k - b) : 1 - (long)k;
  } else {
    e = 1 - (long)k;
  }
  return w * std::pow(q, (double)e);
}

}  // namespace detail

struct SubContext {
  const Window* win = nullptr;
  Rat p, q;
  double lambda_d = 0, q_d = 1, p_d = 0;
  int K = 0;
  int degree = 0;
  SubCertificate cert;
  SubTailInfo tail;
  SubPolymerSet polymers;            // sizes up to K-2, the cluster side
  std::vector<GasPolymer> gas[2];    // indexed by Bc
  GasGraph graph;                    // shared: supports identical across bc
};

inline SubContext make_sub_context(const Window& win, const Rat& p, const Rat& q, int K,
                                   int degree = -1) {
  if (p < 0 || p >= 1) throw std::invalid_argument("series need 0 <= p < 1");
  if (q <= 0) throw std::invalid_argument("q must be positive");
  if (K < 2 || K > 16) throw std::invalid_argument("K must be in [2, 16]");
  SubContext cx;
  cx.win = &win;
  cx.p = p;
  cx.q = q;
  cx.p_d = mpq_get_d(p.get_mpq_t());
  cx.q_d = mpq_get_d(q.get_mpq_t());
  cx.lambda_d = cx.p_d / (1 - cx.p_d);
  cx.K = K;
  cx.degree = degree > 0 ? degree : win.g->max_degree();
  cx.cert = sub_certificate(cx.p_d, cx.q_d, cx.degree);
  cx.tail = sub_tail_info(cx.cert);
  cx.polymers = enumerate_sub_polymers(win, K - 2);
  detail::SubsetWeights<double> scratch;
  for (Bc bc : {Bc::free_, Bc::wired}) {
    auto& pool = cx.gas[(int)bc];
    pool.resize(cx.polymers.supp.size());
    for (size_t i = 0; i < pool.size(); ++i) {
      pool[i].supp = pool[i].excl = cx.polymers.supp[i];
      pool[i].size = cx.polymers.size[i];
      pool[i].items = cx.polymers.verts[i];
      pool[i].activity =
          detail::sub_activity_d(win, cx.polymers.verts[i], cx.lambda_d, cx.q_d, bc, scratch);
    }
  }
  cx.graph = build_gas_graph(cx.gas[0], K - 2);
  return cx;
}

// ------------------------------------------------------------------
// truncated series
// ------------------------------------------------------------------

struct SubSeries {
  double value = 0;
  int K = 0;
  double tail = std::numeric_limits<double>::infinity();
  bool tail_ok = false;
  double tail_roots = 0, tail_geom = 0;
  SubCertificate cert;
  std::vector<double> by_size;  // contribution resolved by root size / cluster size
  long roots = 0;
};

namespace detail {

struct SubRootVisit {
  const std::vector<int>* host_verts;
  std::vector<int> wverts;  // sorted window indices
  uint64_t mask;
  int size;
  double wconn;
  int bdry_count;
};

// Enumerate connected R containing X with |R| <= K; shared by the one-bc
// series, the bc gap, and the tail accounting.
template <class F>
void for_each_sub_root(const SubContext& cx, const std::vector<int>& X_host, int K, F&& f) {
  if (X_host.empty()) throw std::invalid_argument("X must be nonempty");
  for (int v : X_host)
    if (!cx.win->contains(v)) throw std::invalid_argument("X vertex outside window");
  VertexSetOptions opt;
  opt.min_size = 2;
  opt.max_size = K;
  opt.contain = X_host;
  SubsetWeights<double> scratch;
  SubRootVisit rv;
  enumerate_connected_vertex_sets(*cx.win->g, cx.win->vert, opt, [&](const std::vector<int>& hv) {
    rv.host_verts = &hv;
    rv.wverts.clear();
    for (int v : hv) rv.wverts.push_back(cx.win->widx[v]);
    std::sort(rv.wverts.begin(), rv.wverts.end());
    rv.size = (int)rv.wverts.size();
    rv.mask = 0;
    for (int w : rv.wverts) rv.mask |= 1ull << w;
    std::vector<uint32_t> amask = local_adjacency(*cx.win, rv.wverts);
    build_subset_weights(amask, cx.lambda_d, scratch);
    rv.wconn = scratch.wconn[(1u << rv.size) - 1];
    rv.bdry_count = 0;
    for (int w : rv.wverts)
      if (cx.win->internal_bdry[w]) ++rv.bdry_count;
    f(rv);
  });
}

inline double sub_rho_from_visit(const SubContext& cx, const SubRootVisit& rv, Bc bc) {
  long e;
  if (bc == Bc::wired && rv.bdry_count)
    e = -(long)(rv.size - rv.bdry_count);
  else
    e = 1 - (long)rv.size;
  return rv.wconn * std::pow(cx.q_d, (double)e);
}

// cluster sum hitting a root mask, plus the root's tail contribution
inline double sub_hit_sum(const SubContext& cx, Bc bc, uint64_t rmask, int budget) {
  const auto& pool = cx.gas[(int)bc];
  std::vector<int> hits;
  if (budget >= 2) {
    for (size_t i = 0; i < pool.size(); ++i)
      if (pool[i].size <= budget && (pool[i].supp & rmask)) hits.push_back((int)i);
  }
  if (hits.empty()) return 0.0;
  return sum_clusters_connected_hitting(pool, cx.graph, budget, hits);
}

}  // namespace detail

// exp(-sum of cluster weights hitting R), clusters of total size <= budget
inline double sub_pi_coefficient(const SubContext& cx, Bc bc, const std::vector<int>& R_host,
                                 int budget) {
  uint64_t rmask = 0;
  for (int v : R_host) {
    if (!cx.win->contains(v)) throw std::invalid_argument("polymer vertex outside window");
    rmask |= 1ull << cx.win->widx[v];
  }
  if (budget > cx.K - 2) throw std::invalid_argument("budget exceeds the context polymer cap");
  double s = detail::sub_hit_sum(cx, bc, rmask, budget);
  return std::exp(-s);
}

// Truncated connectivity series: sum over connected R containing X with
// |R| <= K of rho(R) * exp(-hitting cluster sum with budget K - |R|). The
// tail bound has a piece for the truncated exp factors of enumerated roots
// and a geometric piece for roots larger than K.
inline SubSeries sub_phi_series(const SubContext& cx, Bc bc, const std::vector<int>& X_host,
                                int K = 0) {
  if (K <= 0) K = cx.K;
  if (K > cx.K) throw std::invalid_argument("K exceeds the context cap");
  SubSeries out;
  out.K = K;
  out.cert = cx.cert;
  out.by_size.assign(K + 1, 0.0);
  const SubTailInfo& ti = cx.tail;
  detail::for_each_sub_root(cx, X_host, K, [&](const detail::SubRootVisit& rv) {
    double rho = detail::sub_rho_from_visit(cx, rv, bc);
    int budget = K - rv.size;
    double s = detail::sub_hit_sum(cx, bc, rv.mask, budget);
    double term = rho * std::exp(-s);
    out.value += term;
    out.by_size[rv.size] += term;
    ++out.roots;
    if (ti.ok) {
      double dr = ti.a * rv.size * std::pow(ti.t_star, -(double)(budget + 1));
      out.tail_roots += std::abs(rho) * std::pow(1 + ti.mu, (double)rv.size) * std::expm1(dr);
    }
  });
  if (ti.ok) {
    out.tail_geom = (1 + ti.mu) * std::pow(ti.y0, (double)K) / (1 - ti.y0);
    out.tail = out.tail_roots + out.tail_geom;
    out.tail_ok = true;
  }
  return out;
}

// Truncated log of the polymer partition function: all clusters of total
// size <= K. Tail: per-vertex hitting sums are bounded by a = ln(1+mu), and
// the missing clusters all have size >= K+1.
inline SubSeries sub_log_xi_series(const SubContext& cx, Bc bc, int K = 0) {
  // the context pool holds polymers of size <= cx.K - 2, so that is the
  // largest budget whose clusters are all representable
  if (K <= 0) K = cx.K - 2;
  if (K > cx.K - 2) throw std::invalid_argument("log xi budget exceeds the context polymer cap");
  SubSeries out;
  out.K = K;
  out.cert = cx.cert;
  out.by_size.assign(K + 1, 0.0);
  out.value = sum_clusters_connected(cx.gas[(int)bc], cx.graph, K, &out.by_size);
  const SubTailInfo& ti = cx.tail;
  if (ti.ok) {
    out.tail = cx.win->nv() * ti.a * std::pow(ti.t_star, -(double)(K + 1));
    out.tail_ok = true;
  }
  return out;
}

// |phi with free activities - phi with wired activities| on one window, and
// the decay scale it should follow in the distance from X to the window's
// internal boundary.
struct SubGap {
  double phi_free = 0, phi_wired = 0;
  double gap = 0;
  double scale = 0;
  int distance = -1;  // host-graph hops from X to the internal boundary
  bool tail_ok = false;
  double tail = std::numeric_limits<double>::infinity();
};

inline SubGap sub_bc_gap(const SubContext& cx, const std::vector<int>& X_host, int K = 0) {
  if (K <= 0) K = cx.K;
  if (K > cx.K) throw std::invalid_argument("K exceeds the context cap");
  SubGap g;
  const SubTailInfo& ti = cx.tail;
  double tail_roots[2] = {0, 0};
  detail::for_each_sub_root(cx, X_host, K, [&](const detail::SubRootVisit& rv) {
    int budget = K - rv.size;
    for (Bc bc : {Bc::free_, Bc::wired}) {
      double rho = detail::sub_rho_from_visit(cx, rv, bc);
      double s = detail::sub_hit_sum(cx, bc, rv.mask, budget);
      double term = rho * std::exp(-s);
      (bc == Bc::free_ ? g.phi_free : g.phi_wired) += term;
      if (ti.ok) {
        double dr = ti.a * rv.size * std::pow(ti.t_star, -(double)(budget + 1));
        tail_roots[(int)bc] +=
            std::abs(rho) * std::pow(1 + ti.mu, (double)rv.size) * std::expm1(dr);
      }
    }
  });
  g.gap = std::abs(g.phi_free - g.phi_wired);
  if (ti.ok) {
    double geom = (1 + ti.mu) * std::pow(ti.y0, (double)K) / (1 - ti.y0);
    g.tail = tail_roots[0] + tail_roots[1] + 2 * geom;
    g.tail_ok = true;
  }
  // distance from X to the internal boundary
  int d = INT32_MAX;
  for (int x : X_host)
    for (int i = 0; i < cx.win->nv(); ++i)
      if (cx.win->internal_bdry[i]) {
        int dd = cx.win->g->distance(x, cx.win->vert[i]);
        if (dd >= 0) d = std::min(d, dd);
      }
  if (d != INT32_MAX) {
    g.distance = d;
    g.scale = std::pow(ti.y0, (double)d);
  }
  return g;
}

// Finite-window pressure from the truncated cluster series, free activities:
//   (|E_N|/|V_N|) ln(1-p) + ln q + (1/|V_N|) ln Xi.
struct SubPressure {
  double value = 0;
  double log_xi = 0;
  double tail = std::numeric_limits<double>::infinity();
  bool tail_ok = false;
  double edge_density = 0;  // finite-window |E_N|/|V_N|
  SubCertificate cert;
  int K = 0;
};

inline SubPressure sub_pressure_series(const SubContext& cx, int K = 0) {
  SubPressure out;
  SubSeries xi = sub_log_xi_series(cx, Bc::free_, K);
  out.K = xi.K;
  out.log_xi = xi.value;
  out.cert = cx.cert;
  double nv = cx.win->nv();
  out.edge_density = cx.win->ne() / nv;
  out.value = out.edge_density * std::log1p(-cx.p_d) + std::log(cx.q_d) + xi.value / nv;
  // the pressure certificate is the eps_star one
  if (xi.tail_ok && cx.cert.pressure_ok) {
    out.tail = xi.tail / nv;
    out.tail_ok = true;
  }
  return out;
}

// Per-size activity sums pinned at a vertex: sum over connected R containing
// x with |R| = n of |rho(R)|, against the unconditional bound eps^(n-1).
struct SubRootSum {
  double sum = 0;
  double bound = 0;
  bool ok = false;
};

inline SubRootSum sub_activity_sum(const Window& win, const Rat& p, const Rat& q, Bc bc,
                                   int x_host, int n, int degree = -1) {
  if (n < 2 || n > 16) throw std::invalid_argument("size must be in [2, 16]");
  if (!win.contains(x_host)) throw std::invalid_argument("vertex outside window");
  double pd = mpq_get_d(p.get_mpq_t());
  double qd = mpq_get_d(q.get_mpq_t());
  double lambda = pd / (1 - pd);
  SubCertificate cert = sub_certificate(pd, qd, degree > 0 ? degree : win.g->max_degree());
  SubRootSum out;
  out.bound = std::pow(cert.eps, (double)(n - 1));
  VertexSetOptions opt;
  opt.min_size = n;
  opt.max_size = n;
  opt.contain = {x_host};
  detail::SubsetWeights<double> scratch;
  std::vector<int> wv;
  enumerate_connected_vertex_sets(*win.g, win.vert, opt, [&](const std::vector<int>& hv) {
    wv.clear();
    for (int v : hv) wv.push_back(win.widx[v]);
    std::sort(wv.begin(), wv.end());
    out.sum += std::abs(detail::sub_activity_d(win, wv, lambda, qd, bc, scratch));
  });
  out.ok = out.sum <= out.bound;
  return out;
}

}  // namespace rcm
