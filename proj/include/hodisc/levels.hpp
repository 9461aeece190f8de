#pragma once

#include <cstddef>
#include <vector>

namespace hodisc {

/// Calls f(j) for every j in N_0^d with j_1 + ... + j_d == total.
template <class F>
void for_each_composition(std::size_t dim, int total, F&& f) {
  std::vector<int> j(dim, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == dim) {
      j[i] = left;
      f(static_cast<const std::vector<int>&>(j));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      j[i] = v;
      self(self, i + 1, left - v);
    }
  };
  if (dim == 0 || total < 0) return;
  rec(rec, 0, total);
}

/// Calls f(j) for every j in {lo, ..., hi}^d in lexicographic order.
template <class F>
void for_each_level(std::size_t dim, int lo, int hi, F&& f) {
  if (dim == 0 || hi < lo) return;
  std::vector<int> j(dim, lo);
  while (true) {
    f(static_cast<const std::vector<int>&>(j));
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (j[i] < hi) {
        ++j[i];
        break;
      }
      j[i] = lo;
      if (i == 0) return;
    }
  }
}

/// |j| = sum of max(j_i, 0).
inline int level_order(const std::vector<int>& j) {
  int s = 0;
  for (int v : j) s += v > 0 ? v : 0;
  return s;
}

}  // namespace hodisc
