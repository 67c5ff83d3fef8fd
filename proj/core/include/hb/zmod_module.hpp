#pragma once

// Finitely generated submodules of (Z/p^m)^k given by generator rows, with a
// deterministic Smith normal form.

#include <cstdint>
#include <vector>

namespace hb {

struct ZmodRing {
  std::uint64_t p = 3;
  int m = 1;
  std::int64_t q = 3;  // p^m

  ZmodRing(std::uint64_t p, int m);
  [[nodiscard]] std::int64_t reduce(std::int64_t a) const;
  [[nodiscard]] std::int64_t add(std::int64_t a, std::int64_t b) const { return reduce(a + b); }
  [[nodiscard]] std::int64_t sub(std::int64_t a, std::int64_t b) const { return reduce(a - b); }
  [[nodiscard]] std::int64_t mul(std::int64_t a, std::int64_t b) const;
  /// p-adic valuation of a reduced element; m for zero.
  [[nodiscard]] int valuation(std::int64_t a) const;
  /// Inverse of a unit.
  [[nodiscard]] std::int64_t inverse(std::int64_t a) const;
  [[nodiscard]] std::int64_t power_of_p(int k) const;
  friend bool operator==(const ZmodRing& a, const ZmodRing& b) { return a.p == b.p && a.m == b.m; }
};

using ZVec = std::vector<std::int64_t>;
using ZMat = std::vector<ZVec>;

/// Nonincreasing exponents e_i > 0 with M isomorphic to the sum of Z/p^{e_i}.
using InvariantSeq = std::vector<int>;

struct SmithForm {
  ZMat P, Q;  // P A Q = diag(p^{d_0}, p^{d_1}, ...) with invertible P, Q
  std::vector<int> diagonal_valuations;  // length min(rows, cols); m means zero
};

/// Pivot rule: smallest valuation in the remaining block, ties broken by
/// lowest row then lowest column.
SmithForm smith_normal_form(const ZmodRing& R, const ZMat& A, std::size_t cols);

ZMat multiply(const ZmodRing& R, const ZMat& A, const ZMat& B, std::size_t inner, std::size_t cols);

/// Generators of {y : y A = 0}, y of length rows(A).
ZMat left_kernel(const ZmodRing& R, const ZMat& A, std::size_t cols);

/// Invariants of the row span of `gens` (vectors of length `dim`).
InvariantSeq invariants(const ZmodRing& R, const ZMat& gens, std::size_t dim);
/// log_p of the order of the row span.
int length(const ZmodRing& R, const ZMat& gens, std::size_t dim);
/// Minimal number of generators of the row span.
int rank(const ZmodRing& R, const ZMat& gens, std::size_t dim);

ZMat concat(const ZMat& a, const ZMat& b);
ZMat scale(const ZmodRing& R, const ZMat& a, std::int64_t c);

/// True iff span(sub) is contained in span(sup).
bool contains(const ZmodRing& R, const ZMat& sup, const ZMat& sub, std::size_t dim);
bool same_span(const ZmodRing& R, const ZMat& a, const ZMat& b, std::size_t dim);

/// Generators of span(a) intersected with span(b).
ZMat intersection(const ZmodRing& R, const ZMat& a, const ZMat& b, std::size_t dim);

/// Minimal number of generators of span(sup) / span(sub); sub must lie in sup.
int quotient_rank(const ZmodRing& R, const ZMat& sup, const ZMat& sub, std::size_t dim);

/// Canonical generators (echelon form with p-power pivots); equal spans give
/// equal outputs.
ZMat canonical_basis(const ZmodRing& R, const ZMat& gens, std::size_t dim);

}  // namespace hb
