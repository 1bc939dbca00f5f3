#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rcm/graph.hpp"
#include "rcm/rational.hpp"

namespace rcm {

constexpr int kDefaultOracleEdgeCap = 22;
constexpr int kHardOracleEdgeCap = 30;

enum class Bc { free_ = 0, wired = 1 };

inline const char* bc_name(Bc b) { return b == Bc::free_ ? "free" : "wired"; }

inline int resolve_threads() {
  if (const char* env = std::getenv("RCM_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return std::min(t, 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : (int)std::min(hw, 8u);
}

// Component structure of one edge configuration on a window.
struct ConfigComponents {
  int k_free = 0;   // all components, isolated vertices included
  int k_wired = 0;  // components disjoint from the internal boundary
  std::vector<int> comp;        // window index -> component root (window index)
  std::vector<int> comp_size;   // by root
  std::vector<char> comp_bdry;  // by root: touches the internal boundary
};

inline ConfigComponents components_of(const Window& win, uint32_t open_mask) {
  int nv = win.nv();
  ConfigComponents cc;
  cc.comp.resize(nv);
  for (int i = 0; i < nv; ++i) cc.comp[i] = i;
  std::vector<int> parent = cc.comp;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e = 0; e < win.ne(); ++e)
    if (open_mask >> e & 1) {
      int a = find(win.edge_w[e][0]), b = find(win.edge_w[e][1]);
      if (a != b) parent[b] = a;
    }
  cc.comp_size.assign(nv, 0);
  cc.comp_bdry.assign(nv, 0);
  for (int i = 0; i < nv; ++i) {
    int r = find(i);
    cc.comp[i] = r;
    cc.comp_size[r]++;
    if (win.internal_bdry[i]) cc.comp_bdry[r] = 1;
  }
  for (int i = 0; i < nv; ++i)
    if (cc.comp[i] == i) {
      cc.k_free++;
      if (!cc.comp_bdry[i]) cc.k_wired++;
    }
  return cc;
}

inline int cluster_count(const Window& win, uint32_t open_mask, Bc bc) {
  auto cc = components_of(win, open_mask);
  return bc == Bc::free_ ? cc.k_free : cc.k_wired;
}

// Events whose probability the oracle reports alongside Z. The component of
// reference is the open component of X[0].
//   Connected:      all of X in one open component with >= 2 vertices
//   ConnectedFinite: same, and the component avoids the internal boundary
//   CompInterior:   the component of X[0] avoids the internal boundary
//                   (isolated X[0] counts when it is an interior vertex)
enum class EventKind { Connected, ConnectedFinite, CompInterior };

struct Event {
  EventKind kind;
  std::vector<int> X;  // host vertex ids inside the window
};

struct ExactValues {
  Rat Z;                        // sum of p^{|open|} (1-p)^{|closed|} q^{k}
  Rat Zbar;                     // sum of lambda^{|closed|} q^{k}, lambda = (1-p)/p
  bool zbar_valid = false;      // requires p > 0
  std::vector<Rat> event_prob;  // aligned with the request's events
};

struct ExactRequest {
  const Window* win = nullptr;
  Rat p, q;
  Bc bc = Bc::free_;
  std::vector<Event> events;
  int edge_cap = kDefaultOracleEdgeCap;
};

namespace detail {

struct EventPlan {
  EventKind kind;
  std::vector<int> xw;  // window indices
};

// One contiguous block of configurations; exact integer accumulation.
// weight(config) * beta^E * v^nv = alpha^{|O|} (beta-alpha)^{|C|} u^k v^{nv-k}
struct OracleBlock {
  Int z_num = 0;
  std::vector<Int> ev_num;
};

inline void run_block(const Window& win, const std::vector<EventPlan>& plans,
                      const std::vector<Int>& pow_open, const std::vector<Int>& pow_closed,
                      const std::vector<Int>& pow_q, bool wired, uint64_t begin, uint64_t end,
                      OracleBlock& out) {
  int nv = win.nv(), ne = win.ne();
  out.ev_num.assign(plans.size(), Int(0));
  std::vector<int> parent(nv);
  std::vector<char> bad(nv);
  Int term;
  for (uint64_t mask = begin; mask < end; ++mask) {
    for (int i = 0; i < nv; ++i) parent[i] = i;
    int opens = 0;
    for (int e = 0; e < ne; ++e)
      if (mask >> e & 1) {
        ++opens;
        int a = win.edge_w[e][0], b = win.edge_w[e][1];
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        while (parent[b] != b) b = parent[b] = parent[parent[b]];
        if (a != b) parent[b] = a;
      }
    for (int i = 0; i < nv; ++i) {
      int r = i;
      while (parent[r] != r) r = parent[r];
      parent[i] = r;
    }
    int k = 0;
    if (!wired) {
      for (int i = 0; i < nv; ++i)
        if (parent[i] == i) ++k;
    } else {
      std::fill(bad.begin(), bad.end(), 0);
      for (int i = 0; i < nv; ++i)
        if (win.internal_bdry[i]) bad[parent[i]] = 1;
      for (int i = 0; i < nv; ++i)
        if (parent[i] == i && !bad[i]) ++k;
    }
    term = pow_open[opens];
    term *= pow_closed[ne - opens];
    term *= pow_q[k];
    out.z_num += term;
    for (size_t pi = 0; pi < plans.size(); ++pi) {
      const EventPlan& pl = plans[pi];
      int r0 = parent[pl.xw[0]];
      bool ok = true;
      for (size_t j = 1; j < pl.xw.size() && ok; ++j) ok = parent[pl.xw[j]] == r0;
      if (!ok) continue;
      if (pl.kind != EventKind::CompInterior) {
        // component must hold an edge, i.e. have >= 2 vertices
        int sz = 0;
        for (int i = 0; i < nv && sz < 2; ++i)
          if (parent[i] == r0) ++sz;
        if (sz < 2) continue;
      }
      if (pl.kind != EventKind::Connected) {
        bool touches = false;
        for (int i = 0; i < nv && !touches; ++i)
          if (parent[i] == r0 && win.internal_bdry[i]) touches = true;
        if (touches) continue;
      }
      out.ev_num[pi] += term;
    }
  }
}

}  // namespace detail

inline ExactValues exact_compute(const ExactRequest& req) {
  const Window& win = *req.win;
  int ne = win.ne(), nv = win.nv();
  if (ne > req.edge_cap)
    throw std::invalid_argument("oracle: window has " + std::to_string(ne) +
                                " edges, above the cap of " + std::to_string(req.edge_cap));
  if (ne > kHardOracleEdgeCap) throw std::invalid_argument("oracle: edge count above hard cap");
  Rat p = req.p, q = req.q;
  p.canonicalize();
  q.canonicalize();
  if (sgn(p) < 0 || p > 1) throw std::invalid_argument("oracle: p outside [0,1]");
  if (sgn(q) <= 0) throw std::invalid_argument("oracle: q must be positive");

  Int alpha = p.get_num(), beta = p.get_den();
  Int u = q.get_num(), v = q.get_den();
  std::vector<Int> pow_open(ne + 1), pow_closed(ne + 1), pow_q(nv + 1);
  Int closed_base = beta - alpha;
  for (int i = 0; i <= ne; ++i) {
    pow_open[i] = int_pow(alpha, i);
    pow_closed[i] = int_pow(closed_base, i);
  }
  // q^k scaled by v^nv: u^k v^(nv-k)
  for (int k = 0; k <= nv; ++k) pow_q[k] = int_pow(u, k) * int_pow(v, nv - k);

  std::vector<detail::EventPlan> plans;
  for (const Event& ev : req.events) {
    detail::EventPlan pl;
    pl.kind = ev.kind;
    if (ev.X.empty()) throw std::invalid_argument("oracle: event with empty X");
    for (int hv : ev.X) {
      if (!win.contains(hv)) throw std::invalid_argument("oracle: event vertex outside window");
      pl.xw.push_back(win.widx[hv]);
    }
    if (ev.kind != EventKind::Connected) {
      // boundary-avoiding events need X off the internal boundary to be satisfiable
      for (int i : pl.xw)
        if (win.internal_bdry[i])
          throw std::invalid_argument("oracle: event vertex on the window boundary");
    }
    plans.push_back(std::move(pl));
  }

  uint64_t total = 1ull << ne;
  int threads = resolve_threads();
  if (total < 4096 || threads <= 1) threads = 1;
  std::vector<detail::OracleBlock> blocks(threads);
  if (threads == 1) {
    detail::run_block(win, plans, pow_open, pow_closed, pow_q, req.bc == Bc::wired, 0, total,
                      blocks[0]);
  } else {
    std::vector<std::thread> pool;
    uint64_t chunk = total / threads;
    for (int t = 0; t < threads; ++t) {
      uint64_t b = t * chunk, e = (t == threads - 1) ? total : b + chunk;
      pool.emplace_back([&, t, b, e] {
        detail::run_block(win, plans, pow_open, pow_closed, pow_q, req.bc == Bc::wired, b, e,
                          blocks[t]);
      });
    }
    for (auto& th : pool) th.join();
  }
  Int z_num = 0;
  std::vector<Int> ev_num(plans.size(), Int(0));
  for (int t = 0; t < threads; ++t) {  // fixed reduction order
    z_num += blocks[t].z_num;
    for (size_t i = 0; i < plans.size(); ++i) ev_num[i] += blocks[t].ev_num[i];
  }

  ExactValues out;
  Int denom = int_pow(beta, ne) * int_pow(v, nv);
  out.Z = Rat(z_num) / Rat(denom);
  out.Z.canonicalize();
  if (sgn(alpha) > 0) {
    Int zbar_den = int_pow(alpha, ne) * int_pow(v, nv);
    out.Zbar = Rat(z_num) / Rat(zbar_den);
    out.Zbar.canonicalize();
    out.zbar_valid = true;
  }
  for (size_t i = 0; i < plans.size(); ++i) {
    if (z_num == 0) throw std::domain_error("oracle: vanishing partition function");
    Rat pr = Rat(ev_num[i]) / Rat(z_num);
    pr.canonicalize();
    out.event_prob.push_back(pr);
  }
  return out;
}

inline Rat partition_function(const Window& win, const Rat& p, const Rat& q, Bc bc,
                              int edge_cap = kDefaultOracleEdgeCap) {
  ExactRequest req;
  req.win = &win;
  req.p = p;
  req.q = q;
  req.bc = bc;
  req.edge_cap = edge_cap;
  return exact_compute(req).Z;
}

inline Rat connectivity_exact(const Window& win, const Rat& p, const Rat& q, Bc bc,
                              const std::vector<int>& X, int edge_cap = kDefaultOracleEdgeCap) {
  ExactRequest req;
  req.win = &win;
  req.p = p;
  req.q = q;
  req.bc = bc;
  req.events = {{EventKind::Connected, X}};
  req.edge_cap = edge_cap;
  return exact_compute(req).event_prob[0];
}

inline Rat finite_connectivity_exact(const Window& win, const Rat& p, const Rat& q, Bc bc,
                                     const std::vector<int>& X,
                                     int edge_cap = kDefaultOracleEdgeCap) {
  ExactRequest req;
  req.win = &win;
  req.p = p;
  req.q = q;
  req.bc = bc;
  req.events = {{EventKind::ConnectedFinite, X}};
  req.edge_cap = edge_cap;
  return exact_compute(req).event_prob[0];
}

// 1 - P(the open component of x0 avoids the window boundary); the isolated
// case counts as an interior component of size one.
inline Rat theta_exact(const Window& win, const Rat& p, const Rat& q, Bc bc, int x0,
                       int edge_cap = kDefaultOracleEdgeCap) {
  ExactRequest req;
  req.win = &win;
  req.p = p;
  req.q = q;
  req.bc = bc;
  req.events = {{EventKind::CompInterior, {x0}}};
  req.edge_cap = edge_cap;
  Rat r = 1 - exact_compute(req).event_prob[0];
  r.canonicalize();
  return r;
}

inline double pressure_finite(const Window& win, const Rat& p, const Rat& q, Bc bc,
                              int edge_cap = kDefaultOracleEdgeCap) {
  Rat Z = partition_function(win, p, q, bc, edge_cap);
  return rat_ln(Z) / (double)win.nv();
}

}  // namespace rcm
