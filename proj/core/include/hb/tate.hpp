#pragma once

// Tate's algorithm at a single prime.

#include <cstdint>
#include <vector>

#include "hb/curve.hpp"

namespace hb {

struct TateResult {
  LocalData data;
  /// Transform from the input model to a model minimal at p.
  Transform to_minimal;
  bool input_minimal = true;
};

TateResult tate_algorithm(const Coefficients& a, std::uint64_t p);

/// Number of distinct roots in F_p of a polynomial with integer coefficients
/// (constant term first).
int count_roots_mod(const std::vector<BigInt>& poly, std::uint64_t p);

}  // namespace hb
