#pragma once

#include <numeric>
#include <vector>

namespace rcm {

struct Dsu {
  std::vector<int> parent, rank_;

  explicit Dsu(int n) : parent(n), rank_(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  void reset() {
    std::iota(parent.begin(), parent.end(), 0);
    std::fill(rank_.begin(), rank_.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }
};

}  // namespace rcm
