#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rcm/rational.hpp"

namespace rcm {

// Ursell coefficient of the graph given by adjacency bitmasks: the signed sum
// of (-1)^{|E'|} over connected spanning edge subsets E'. Zero whenever the
// graph is disconnected. Computed through the subset recursion
//   A(S) = sum_{T subset S, T containing low(S)} C(T) * A(S \ T),
// where A(S) = 1 iff S spans no edge: inverting it yields C on every subset.
inline long long ursell_int(const std::vector<uint32_t>& adj) {
  int n = (int)adj.size();
  if (n == 0) throw std::invalid_argument("ursell: empty cluster");
  if (n > 16) throw std::invalid_argument("ursell: cluster too large");
  uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<long long> C(full + 1, 0);
  std::vector<char> indep(full + 1, 0);
  indep[0] = 1;
  for (uint32_t S = 1; S <= full; ++S) {
    int low = __builtin_ctz(S);
    uint32_t rest = S & (S - 1);
    indep[S] = indep[rest] && (adj[low] & S) == 0;
  }
  for (uint32_t S = 1; S <= full; ++S) {
    int low = __builtin_ctz(S);
    uint32_t rest = S & ~(1u << low);
    long long c = indep[S];
    // proper subsets T of S containing low: T = {low} + sub, sub proper subset of rest
    for (uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
      uint32_t T = sub | (1u << low);
      if (T != S) c -= C[T] * indep[S & ~T];
      if (sub == 0) break;
    }
    C[S] = c;
  }
  return C[full];
}

// One polymer of an abstract gas over a universe of at most 64 items
// (vertices in the subcritical regime, edges in the supercritical one).
// Two polymers are incompatible iff one's support meets the other's
// exclusion footprint; excl must contain supp and be built from a symmetric
// relation so the test is symmetric.
struct GasPolymer {
  uint64_t supp = 0;
  uint64_t excl = 0;
  int size = 0;
  double activity = 0;
  std::vector<int> items;  // sorted universe ids
};

inline bool gas_incompatible(const GasPolymer& a, const GasPolymer& b) {
  return (a.excl & b.supp) != 0;
}

// weight of one cluster: Ursell(incompatibility graph) / (prod multiplicities!)
// * prod activities. `expanded` holds pool indices, sorted, repeats allowed.
inline double cluster_weight(const std::vector<GasPolymer>& pool,
                             const std::vector<int>& expanded) {
  int n = (int)expanded.size();
  if (n == 1) return pool[expanded[0]].activity;
  // cheap connectivity screen before the exact Ursell evaluation
  std::vector<uint32_t> adj(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (expanded[i] == expanded[j] ||
          gas_incompatible(pool[expanded[i]], pool[expanded[j]])) {
        adj[i] |= 1u << j;
        adj[j] |= 1u << i;
      }
  uint32_t seen = 1, frontier = 1;
  while (frontier) {
    uint32_t next = 0;
    for (int i = 0; i < n; ++i)
      if (frontier >> i & 1) next |= adj[i];
    frontier = next & ~seen;
    seen |= next;
  }
  if (seen != (n == 32 ? ~0u : (1u << n) - 1)) return 0.0;
  long long C = ursell_int(adj);
  if (C == 0) return 0.0;
  double w = (double)C;
  for (int i = 0; i < n;) {
    int j = i;
    long long fact = 1, m = 0;
    while (j < n && expanded[j] == expanded[i]) fact *= ++m, ++j;
    w /= (double)fact;
    for (int t = i; t < j; ++t) w *= pool[expanded[t]].activity;
    i = j;
  }
  return w;
}

// Sum of cluster weights over connected multisets drawn from `pool` with
// total size <= budget and keep(expanded) true. Pool must be sorted by
// nondecreasing size. Disconnected multisets contribute zero and are
// screened out inside cluster_weight.
template <class Keep>
double sum_clusters(const std::vector<GasPolymer>& pool, int budget, Keep&& keep) {
  double total = 0;
  std::vector<int> chosen;
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (!chosen.empty() && keep(chosen)) total += cluster_weight(pool, chosen);
    for (int i = start; i < (int)pool.size(); ++i) {
      if (pool[i].size > left) break;
      chosen.push_back(i);
      rec(i, left - pool[i].size);
      chosen.pop_back();
    }
  };
  rec(0, budget);
  return total;
}

inline double sum_clusters_all(const std::vector<GasPolymer>& pool, int budget) {
  return sum_clusters(pool, budget, [](const std::vector<int>&) { return true; });
}

// Incompatibility graph over the pool. Only pairs whose combined size fits
// `pair_budget` get an edge: any pair appearing together in a cluster of
// total size <= pair_budget satisfies this, so cluster enumeration with that
// budget sees every edge it can use, while large polymers (which can only
// ever appear alone) keep empty lists.
struct GasGraph {
  std::vector<std::vector<int>> nbr;
};

inline GasGraph build_gas_graph(const std::vector<GasPolymer>& pool, int pair_budget) {
  GasGraph gg;
  int n = (int)pool.size();
  gg.nbr.resize(n);
  for (int i = 0; i < n; ++i) {
    if (pool[i].size + 1 > pair_budget) continue;
    for (int j = i + 1; j < n; ++j) {
      if (pool[i].size + pool[j].size > pair_budget) continue;
      if (gas_incompatible(pool[i], pool[j]) || gas_incompatible(pool[j], pool[i])) {
        gg.nbr[i].push_back(j);
        gg.nbr[j].push_back(i);
      }
    }
  }
  return gg;
}

namespace detail {

// Sum over multiplicity assignments m_i >= 1 for a connected distinct set,
// total size <= budget. Every multiset built from a connected distinct set is
// itself connected (equal copies are mutually incompatible). With `weight`
// non-null each cluster is scaled by weight(expanded).
inline double gas_multiset_sum(const std::vector<GasPolymer>& pool, std::vector<int> S,
                               int budget, std::vector<double>* by_size,
                               const std::function<double(const std::vector<int>&)>* weight) {
  std::sort(S.begin(), S.end());
  int k = (int)S.size();
  std::vector<int> suffix(k + 1, 0);
  for (int i = k - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + pool[S[i]].size;
  if (suffix[0] > budget) return 0.0;
  double total = 0;
  std::vector<int> expanded;
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == k) {
      double w = cluster_weight(pool, expanded);
      if (weight && w != 0) w *= (*weight)(expanded);
      total += w;
      if (by_size) (*by_size)[used] += w;
      return;
    }
    int s = pool[S[i]].size;
    int room = budget - used - suffix[i + 1];
    for (int m = 1; m * s <= room; ++m) {
      expanded.insert(expanded.end(), m, S[i]);
      rec(i + 1, used + m * s);
      expanded.resize(expanded.size() - m);
    }
  };
  rec(0, 0);
  return total;
}

// Connected distinct sets containing `root` inside the pool graph, avoiding
// indices with state 2 on entry; each set feeds gas_multiset_sum. Same
// growth-with-forbidding scheme as the vertex-set enumerator. `state` must be
// 0 except for persistent bans (2); restored on exit apart from those.
inline double gas_rooted_sum(const std::vector<GasPolymer>& pool, const GasGraph& gg, int budget,
                             int root, std::vector<char>& state, std::vector<double>* by_size,
                             const std::function<double(const std::vector<int>&)>* weight = nullptr) {
  if (pool[root].size > budget) return 0.0;
  double total = 0;
  std::vector<int> set = {root};
  state[root] = 1;
  std::vector<int> ext;
  for (int u : gg.nbr[root])
    if (!state[u]) {
      state[u] = 3;
      ext.push_back(u);
    }
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& cand, int used) {
    total += gas_multiset_sum(pool, set, budget, by_size, weight);
    for (size_t i = 0; i < cand.size(); ++i) {
      int v = cand[i];
      if (state[v] == 2 || used + pool[v].size > budget) continue;
      state[v] = 1;
      set.push_back(v);
      std::vector<int> next(cand.begin() + i + 1, cand.end());
      std::vector<int> added;
      for (int u : gg.nbr[v])
        if (!state[u]) {
          state[u] = 3;
          next.push_back(u);
          added.push_back(u);
        }
      rec(next, used + pool[v].size);
      for (int u : added) state[u] = 0;
      set.pop_back();
      state[v] = 2;
    }
    for (size_t i = 0; i < cand.size(); ++i)
      if (state[cand[i]] == 2) state[cand[i]] = 3;
  };
  rec(ext, pool[root].size);
  for (int u : ext) state[u] = 0;
  state[root] = 0;
  return total;
}

inline void gas_check_budget(int budget) {
  if (budget > 16) throw std::invalid_argument("cluster budget exceeds the 16-item cap");
}

}  // namespace detail

// Production cluster sums: same values as sum_clusters / sum_clusters_hitting
// but enumerated over the incompatibility graph, so only connected sets are
// ever visited. `gg` must come from build_gas_graph with pair_budget >= budget.
// With `by_size` non-null, by_size[s] accumulates the weight of clusters of
// total size s (vector must have budget+1 entries).
inline double sum_clusters_connected(const std::vector<GasPolymer>& pool, const GasGraph& gg,
                                     int budget, std::vector<double>* by_size = nullptr) {
  detail::gas_check_budget(budget);
  double total = 0;
  std::vector<char> state(pool.size(), 0);
  for (int root = 0; root < (int)pool.size(); ++root) {
    total += detail::gas_rooted_sum(pool, gg, budget, root, state, by_size);
    state[root] = 2;  // later roots may not revisit it: fixes the minimal index
  }
  return total;
}

// Connected cluster sum with a per-cluster multiplier: each cluster
// contributes weight(expanded) times its Ursell weight, where `expanded` is
// the nondecreasing multiset of pool indices. Used for marginal densities
// that reweight clusters by which polymers they contain.
inline double sum_clusters_connected_weighted(
    const std::vector<GasPolymer>& pool, const GasGraph& gg, int budget,
    const std::function<double(const std::vector<int>&)>& weight) {
  detail::gas_check_budget(budget);
  double total = 0;
  std::vector<char> state(pool.size(), 0);
  for (int root = 0; root < (int)pool.size(); ++root) {
    total += detail::gas_rooted_sum(pool, gg, budget, root, state, nullptr, &weight);
    state[root] = 2;
  }
  return total;
}

// Clusters containing at least one polymer from `hits` (sorted pool indices).
inline double sum_clusters_connected_hitting(const std::vector<GasPolymer>& pool,
                                             const GasGraph& gg, int budget,
                                             const std::vector<int>& hits,
                                             std::vector<double>* by_size = nullptr) {
  detail::gas_check_budget(budget);
  double total = 0;
  std::vector<char> state(pool.size(), 0);
  for (int h : hits) {
    total += detail::gas_rooted_sum(pool, gg, budget, h, state, by_size);
    state[h] = 2;
  }
  for (int h : hits) state[h] = 0;
  return total;
}

// Sum over clusters incompatible with a reference polymer (used for the
// pinned ratio of partition functions with and without the reference).
inline double sum_clusters_hitting(const std::vector<GasPolymer>& pool, int budget,
                                   const GasPolymer& ref) {
  return sum_clusters(pool, budget, [&](const std::vector<int>& expanded) {
    for (int i : expanded)
      if (gas_incompatible(ref, pool[i])) return true;
    return false;
  });
}

}  // namespace rcm
