#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rcm/dsu.hpp"
#include "rcm/graph.hpp"

namespace rcm {

constexpr int kDefaultVertexSetCap = 10;
constexpr int kDefaultEdgeSetCap = 8;

// Connected-subgraph enumeration by rooted growth: at each level the
// extension list is consumed left to right, and everything already passed
// over becomes forbidden for the whole subtree. Each connected superset of
// the root inside `allowed` is emitted exactly once.
//
// Generic over an adjacency oracle so the same machinery serves vertex sets
// (graph adjacency) and edge sets (distance-R adjacency between edges).
template <class Neighbors, class Emit>
void enumerate_connected_rooted(int root, int universe_size, const std::vector<char>& allowed,
                                int min_size, int max_size, Neighbors&& neighbors, Emit&& emit,
                                const std::vector<int>* required = nullptr,
                                const std::function<int(const std::vector<int>&)>* reach_lb = nullptr) {
  std::vector<char> state(universe_size, 0);  // 1 = in set, 2 = forbidden
  std::vector<int> set = {root};
  state[root] = 1;
  std::vector<int> ext;
  for (int u : neighbors(root))
    if (allowed[u] && !state[u]) {
      state[u] = 3;  // queued
      ext.push_back(u);
    }

  auto contains_required = [&]() {
    if (!required) return true;
    for (int v : *required)
      if (state[v] != 1) return false;
    return true;
  };
  auto required_dead = [&]() {
    if (!required) return false;
    for (int v : *required)
      if (state[v] == 2) return true;
    return false;
  };

  std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& cand) {
    if ((int)set.size() >= min_size && contains_required()) emit(set);
    if ((int)set.size() == max_size) return;
    for (size_t i = 0; i < cand.size(); ++i) {
      int v = cand[i];
      if (state[v] == 2) continue;  // forbidden by an outer level
      state[v] = 1;
      set.push_back(v);
      bool viable = !required_dead();
      if (viable && reach_lb) {
        int need = (*reach_lb)(set);
        if ((int)set.size() + need > max_size) viable = false;
      }
      if (viable) {
        std::vector<int> next(cand.begin() + i + 1, cand.end());
        std::vector<int> added;
        for (int u : neighbors(v))
          if (allowed[u] && !state[u]) {
            state[u] = 3;
            next.push_back(u);
            added.push_back(u);
          }
        rec(next);
        for (int u : added) state[u] = 0;
      }
      set.pop_back();
      state[v] = 2;  // forbidden for the remaining candidates at this level
    }
    for (size_t i = 0; i < cand.size(); ++i)
      if (state[cand[i]] == 2) state[cand[i]] = 3;
  };
  rec(ext);
}

struct VertexSetOptions {
  int min_size = 1;
  int max_size = kDefaultVertexSetCap;
  std::vector<int> contain;  // host ids the set must include (may be empty)
  bool prune_by_reach = true;
};

// All connected vertex sets inside `universe` (host ids). With `contain`
// nonempty, exactly the connected sets including all of it; otherwise all
// connected sets, enumerated by their minimal vertex. Sets are emitted as
// sorted host-id vectors; global emission order is not sorted.
template <class Emit>
void enumerate_connected_vertex_sets(const HostGraph& g, const std::vector<int>& universe,
                                     const VertexSetOptions& opt, Emit&& emit) {
  if (opt.max_size < 1) return;
  std::vector<char> allowed(g.n(), 0);
  for (int v : universe) allowed[v] = 1;
  auto neighbors = [&](int v) -> const std::vector<int>& { return g.adj[v]; };
  std::vector<int> sorted;
  auto emit_sorted = [&](const std::vector<int>& s) {
    sorted = s;
    std::sort(sorted.begin(), sorted.end());
    emit(sorted);
  };
  if (!opt.contain.empty()) {
    for (int v : opt.contain)
      if (!allowed[v]) return;  // nothing can contain it
    int root = opt.contain[0];
    std::vector<int> rest(opt.contain.begin() + 1, opt.contain.end());
    std::function<int(const std::vector<int>&)> lb = [&](const std::vector<int>& s) {
      // lower bound on extra vertices needed to absorb the missing targets
      int need = 0;
      for (int t : rest) {
        int d = INT32_MAX;
        bool in = false;
        for (int v : s) {
          if (v == t) {
            in = true;
            break;
          }
          d = std::min(d, g.distance(v, t) < 0 ? INT32_MAX : g.distance(v, t));
        }
        if (!in) need = std::max(need, d);
      }
      return need == INT32_MAX ? opt.max_size + 1 : need;
    };
    enumerate_connected_rooted(root, g.n(), allowed, std::max(opt.min_size, 1), opt.max_size,
                               neighbors, emit_sorted, rest.empty() ? nullptr : &rest,
                               (opt.prune_by_reach && !rest.empty()) ? &lb : nullptr);
    return;
  }
  std::vector<int> uni = universe;
  std::sort(uni.begin(), uni.end());
  for (int v : uni) {
    enumerate_connected_rooted(v, g.n(), allowed, std::max(opt.min_size, 1), opt.max_size,
                               neighbors, emit_sorted);
    allowed[v] = 0;  // later pivots may not use it: fixes the minimal vertex
  }
}

inline long count_connected_vertex_sets(const HostGraph& g, const std::vector<int>& universe,
                                        const VertexSetOptions& opt) {
  long c = 0;
  enumerate_connected_vertex_sets(g, universe, opt, [&](const std::vector<int>&) { ++c; });
  return c;
}

// Adjacency between edges at hop distance <= R, restricted to a universe of
// host edge ids. Reused across enumerations over the same window.
struct EdgeAdjacency {
  const HostGraph* g = nullptr;
  int R = 1;
  std::vector<int> universe;               // sorted host edge ids
  std::vector<char> allowed;               // host-edge-indexed
  std::vector<std::vector<int>> neighbor;  // host-edge-indexed, within universe

  EdgeAdjacency() = default;
  EdgeAdjacency(const HostGraph& gg, std::vector<int> edges, int r) : g(&gg), R(r) {
    universe = std::move(edges);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    allowed.assign(gg.m(), 0);
    for (int e : universe) allowed[e] = 1;
    neighbor.assign(gg.m(), {});
    for (size_t i = 0; i < universe.size(); ++i)
      for (size_t j = i + 1; j < universe.size(); ++j) {
        int e = universe[i], f = universe[j];
        if (gg.edge_distance(e, f) <= R) {
          neighbor[e].push_back(f);
          neighbor[f].push_back(e);
        }
      }
  }

  bool connected(const std::vector<int>& S) const {
    if (S.empty()) return false;
    Dsu d((int)S.size());
    for (size_t i = 0; i < S.size(); ++i)
      for (size_t j = i + 1; j < S.size(); ++j)
        if (g->edge_distance(S[i], S[j]) <= R) d.unite((int)i, (int)j);
    int root = d.find(0);
    for (size_t i = 1; i < S.size(); ++i)
      if (d.find((int)i) != root) return false;
    return true;
  }

  // Split S into its distance-R connected parts (each sorted).
  std::vector<std::vector<int>> split(const std::vector<int>& S) const {
    std::vector<std::vector<int>> parts;
    if (S.empty()) return parts;
    Dsu d((int)S.size());
    for (size_t i = 0; i < S.size(); ++i)
      for (size_t j = i + 1; j < S.size(); ++j)
        if (g->edge_distance(S[i], S[j]) <= R) d.unite((int)i, (int)j);
    std::vector<int> root_of(S.size());
    std::vector<int> order;
    for (size_t i = 0; i < S.size(); ++i) {
      root_of[i] = d.find((int)i);
      if (root_of[i] == (int)i) order.push_back((int)i);
    }
    for (int r : order) {
      parts.emplace_back();
      for (size_t i = 0; i < S.size(); ++i)
        if (root_of[i] == r) parts.back().push_back(S[i]);
    }
    return parts;
  }
};

struct EdgeSetOptions {
  int min_size = 1;
  int max_size = kDefaultEdgeSetCap;
  std::vector<int> contain;  // host edge ids
};

// All distance-R connected edge sets in the adjacency's universe, emitted as
// sorted host-edge-id vectors, by minimal edge unless `contain` pins them.
template <class Emit>
void enumerate_r_connected_edge_sets(const EdgeAdjacency& ea, const EdgeSetOptions& opt,
                                     Emit&& emit) {
  if (opt.max_size < 1) return;
  auto neighbors = [&](int e) -> const std::vector<int>& { return ea.neighbor[e]; };
  std::vector<int> sorted;
  auto emit_sorted = [&](const std::vector<int>& s) {
    sorted = s;
    std::sort(sorted.begin(), sorted.end());
    emit(sorted);
  };
  if (!opt.contain.empty()) {
    for (int e : opt.contain)
      if (!ea.allowed[e]) return;
    int root = opt.contain[0];
    std::vector<int> rest(opt.contain.begin() + 1, opt.contain.end());
    enumerate_connected_rooted(root, ea.g->m(), ea.allowed, std::max(opt.min_size, 1),
                               opt.max_size, neighbors, emit_sorted,
                               rest.empty() ? nullptr : &rest);
    return;
  }
  std::vector<char> allowed = ea.allowed;
  for (int e : ea.universe) {
    enumerate_connected_rooted(e, ea.g->m(), allowed, std::max(opt.min_size, 1), opt.max_size,
                               neighbors, emit_sorted);
    allowed[e] = 0;
  }
}

// Self-avoiding walk counts c_x(n) for n = 1..n_max, by depth-first search.
// Errors out if any walk could leave the represented region.
inline std::vector<long> saw_counts(const HostGraph& g, int x, int n_max) {
  for (int v = 0; v < g.n(); ++v)
    if (g.virtual_boundary[v] && g.distance(x, v) >= 0 && g.distance(x, v) <= n_max)
      throw std::invalid_argument("saw_counts: walk range reaches the virtual rim, grow the margin");
  std::vector<long> count(n_max + 1, 0);
  std::vector<char> used(g.n(), 0);
  std::function<void(int, int)> dfs = [&](int v, int len) {
    if (len > 0) ++count[len];
    if (len == n_max) return;
    used[v] = 1;
    for (int u : g.adj[v])
      if (!used[u]) dfs(u, len + 1);
    used[v] = 0;
  };
  dfs(x, 0);
  return count;  // count[0] unused
}

struct CutSetValue {
  int value = 0;          // min edge-boundary over enumerated sets
  long sets_enumerated = 0;
  int size_cap = 0;
};

// f(n): minimum |edge boundary| over connected sets of diameter exactly n
// anchored at any of the given vertices. Enumerated sets must keep clear of
// the virtual rim so their boundary is fully represented.
inline CutSetValue cut_set_function(const HostGraph& g, const std::vector<int>& anchors, int n,
                                    int size_cap = kDefaultVertexSetCap) {
  if (n < 0) throw std::invalid_argument("cut_set_function: negative diameter");
  CutSetValue out;
  out.size_cap = size_cap;
  int best = INT32_MAX;
  std::vector<int> universe;
  for (int v = 0; v < g.n(); ++v)
    if (!g.virtual_boundary[v]) universe.push_back(v);
  std::vector<char> in_universe(g.n(), 0);
  for (int v : universe) in_universe[v] = 1;
  for (int a : anchors) {
    if (!in_universe[a])
      throw std::invalid_argument("cut_set_function: anchor on the virtual rim");
    VertexSetOptions opt;
    opt.min_size = n + 1;  // diameter n needs at least n+1 vertices
    opt.max_size = size_cap;
    opt.contain = {a};
    enumerate_connected_vertex_sets(g, universe, opt, [&](const std::vector<int>& S) {
      ++out.sets_enumerated;
      if (set_diameter(g, S) != n) return;
      best = std::min(best, (int)edge_boundary(g, S).size());
    });
  }
  if (best == INT32_MAX)
    throw std::invalid_argument("cut_set_function: no connected set of that diameter within caps");
  out.value = best;
  return out;
}

}  // namespace rcm
