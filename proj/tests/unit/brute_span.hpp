#pragma once

// Enumerative oracles for submodules of (Z/p^m)^k.

#include <cstdint>
#include <set>
#include <vector>

#include "hb/zmod_module.hpp"

namespace hb::testing {

using Span = std::set<ZVec>;

inline Span enumerate_span(const ZmodRing& R, const ZMat& gens, std::size_t dim) {
  Span s{ZVec(dim, 0)};
  for (const ZVec& g : gens) {
    Span next;
    for (const ZVec& v : s) {
      ZVec w = v;
      for (std::int64_t c = 0; c < R.q; ++c) {
        next.insert(w);
        for (std::size_t i = 0; i < dim; ++i) w[i] = R.add(w[i], g[i]);
      }
    }
    s = std::move(next);
  }
  return s;
}

// Invariants of a finite abelian p-group from the sizes of its p^k-torsion:
// #S[p^k] = p^(sum min(e_i, k)).
inline InvariantSeq invariants_by_counting(const ZmodRing& R, const Span& s) {
  std::vector<int> log_torsion(static_cast<std::size_t>(R.m) + 1, 0);
  for (int k = 1; k <= R.m; ++k) {
    const std::int64_t pk = R.power_of_p(k);
    std::size_t n = 0;
    for (const ZVec& v : s) {
      bool killed = true;
      for (auto c : v) killed = killed && R.mul(c, pk) == 0;
      n += killed ? 1 : 0;
    }
    int l = 0;
    while (n > 1) {
      n /= R.p;
      ++l;
    }
    log_torsion[static_cast<std::size_t>(k)] = l;
  }
  // Number of e_i >= k is log_torsion[k] - log_torsion[k - 1].
  InvariantSeq out;
  for (int k = R.m; k >= 1; --k) {
    const int at_least_k = log_torsion[static_cast<std::size_t>(k)] - log_torsion[static_cast<std::size_t>(k) - 1];
    const int at_least_next = k < R.m ? log_torsion[static_cast<std::size_t>(k) + 1] - log_torsion[static_cast<std::size_t>(k)] : 0;
    for (int i = 0; i < at_least_k - at_least_next; ++i) out.push_back(k);
  }
  return out;
}

inline int log_size(const ZmodRing& R, std::size_t n) {
  int l = 0;
  while (n > 1) {
    n /= R.p;
    ++l;
  }
  return l;
}

}  // namespace hb::testing
