#include "hb/zmod_module.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "hb/errors.hpp"
#include "hb/numeric.hpp"

namespace hb {

ZmodRing::ZmodRing(std::uint64_t p_, int m_) : p(p_), m(m_), q(1) {
  if (!is_prime(p_)) throw ValidationError("ZmodRing: p must be prime");
  if (m_ < 1) throw ValidationError("ZmodRing: m must be positive");
  for (int i = 0; i < m_; ++i) {
    if (q > (std::int64_t{1} << 40) / static_cast<std::int64_t>(p_)) throw ValidationError("ZmodRing: p^m too large");
    q *= static_cast<std::int64_t>(p_);
  }
}

std::int64_t ZmodRing::reduce(std::int64_t a) const { return hb::mod(a, q); }

std::int64_t ZmodRing::mul(std::int64_t a, std::int64_t b) const { return mulmod(reduce(a), reduce(b), q); }

int ZmodRing::valuation(std::int64_t a) const {
  a = reduce(a);
  if (a == 0) return m;
  int v = 0;
  const auto pp = static_cast<std::int64_t>(p);
  while (a % pp == 0) {
    a /= pp;
    ++v;
  }
  return v;
}

std::int64_t ZmodRing::inverse(std::int64_t a) const {
  a = reduce(a);
  if (valuation(a) != 0) throw InternalError("ZmodRing: inverse of a non-unit");
  return invmod(a, q);
}

std::int64_t ZmodRing::power_of_p(int k) const {
  if (k >= m) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::int64_t>(p);
  return r;
}

namespace {

ZMat identity(std::size_t n) {
  ZMat I(n, ZVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

// row_i -= f * row_k
void row_axpy(const ZmodRing& R, ZVec& row_i, const ZVec& row_k, std::int64_t f) {
  if (f == 0) return;
  for (std::size_t j = 0; j < row_i.size(); ++j) row_i[j] = R.sub(row_i[j], R.mul(f, row_k[j]));
}

void col_axpy(const ZmodRing& R, ZMat& M, std::size_t i, std::size_t k, std::int64_t f) {
  if (f == 0) return;
  for (auto& row : M) row[i] = R.sub(row[i], R.mul(f, row[k]));
}

void check_width(const ZMat& A, std::size_t cols) {
  for (const auto& row : A)
    if (row.size() != cols) throw ValidationError("matrix rows must all have the declared width");
}

}  // namespace

SmithForm smith_normal_form(const ZmodRing& R, const ZMat& A, std::size_t cols) {
  check_width(A, cols);
  const std::size_t rows = A.size();
  ZMat D = A;
  for (auto& row : D)
    for (auto& x : row) x = R.reduce(x);
  SmithForm s{identity(rows), identity(cols), {}};
  const std::size_t n = std::min(rows, cols);
  for (std::size_t k = 0; k < n; ++k) {
    int best = R.m;
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < rows && best > 0; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        int v = R.valuation(D[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == R.m) {
      s.diagonal_valuations.resize(n, R.m);
      break;
    }
    std::swap(D[k], D[bi]);
    std::swap(s.P[k], s.P[bi]);
    for (auto& row : D) std::swap(row[k], row[bj]);
    for (auto& row : s.Q) std::swap(row[k], row[bj]);

    const std::int64_t pv = R.power_of_p(best);
    const std::int64_t uinv = R.inverse(D[k][k] / pv);
    for (auto& x : D[k]) x = R.mul(x, uinv);
    for (auto& x : s.P[k]) x = R.mul(x, uinv);

    for (std::size_t i = k + 1; i < rows; ++i) {
      const std::int64_t f = D[i][k] / pv;
      row_axpy(R, D[i], D[k], f);
      row_axpy(R, s.P[i], s.P[k], f);
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      const std::int64_t f = D[k][j] / pv;
      col_axpy(R, D, j, k, f);
      col_axpy(R, s.Q, j, k, f);
    }
    s.diagonal_valuations.push_back(best);
  }
  return s;
}

ZMat multiply(const ZmodRing& R, const ZMat& A, const ZMat& B, std::size_t inner, std::size_t cols) {
  check_width(A, inner);
  check_width(B, cols);
  if (B.size() != inner) throw ValidationError("multiply: dimension mismatch");
  ZMat C(A.size(), ZVec(cols, 0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (A[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) C[i][j] = R.add(C[i][j], R.mul(A[i][k], B[k][j]));
    }
  return C;
}

ZMat left_kernel(const ZmodRing& R, const ZMat& A, std::size_t cols) {
  const SmithForm s = smith_normal_form(R, A, cols);
  ZMat out;
  const std::size_t n = s.diagonal_valuations.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int d = s.diagonal_valuations[i];
    if (d == 0) continue;
    const std::int64_t f = R.power_of_p(R.m - d);
    ZVec row(A.size());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = R.mul(f, s.P[i][j]);
    out.push_back(std::move(row));
  }
  for (std::size_t i = n; i < A.size(); ++i) out.push_back(s.P[i]);
  return out;
}

InvariantSeq invariants(const ZmodRing& R, const ZMat& gens, std::size_t dim) {
  InvariantSeq inv;
  for (int d : smith_normal_form(R, gens, dim).diagonal_valuations)
    if (d < R.m) inv.push_back(R.m - d);
  std::sort(inv.begin(), inv.end(), std::greater<>());
  return inv;
}

int length(const ZmodRing& R, const ZMat& gens, std::size_t dim) {
  int total = 0;
  for (int e : invariants(R, gens, dim)) total += e;
  return total;
}

int rank(const ZmodRing& R, const ZMat& gens, std::size_t dim) {
  return static_cast<int>(invariants(R, gens, dim).size());
}

ZMat concat(const ZMat& a, const ZMat& b) {
  ZMat out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

ZMat scale(const ZmodRing& R, const ZMat& a, std::int64_t c) {
  ZMat out = a;
  for (auto& row : out)
    for (auto& x : row) x = R.mul(x, c);
  return out;
}

bool contains(const ZmodRing& R, const ZMat& sup, const ZMat& sub, std::size_t dim) {
  return length(R, concat(sup, sub), dim) == length(R, sup, dim);
}

bool same_span(const ZmodRing& R, const ZMat& a, const ZMat& b, std::size_t dim) {
  const int la = length(R, a, dim), lb = length(R, b, dim);
  return la == lb && length(R, concat(a, b), dim) == la;
}

ZMat intersection(const ZmodRing& R, const ZMat& a, const ZMat& b, std::size_t dim) {
  // u a = w b  <=>  (u, w) [a; -b] = 0
  ZMat stacked = concat(a, scale(R, b, -1));
  ZMat out;
  for (const ZVec& k : left_kernel(R, stacked, dim)) {
    ZVec x(dim, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < dim; ++j) x[j] = R.add(x[j], R.mul(k[i], a[i][j]));
    out.push_back(std::move(x));
  }
  return out;
}

int quotient_rank(const ZmodRing& R, const ZMat& sup, const ZMat& sub, std::size_t dim) {
  const ZMat p_sup = scale(R, sup, static_cast<std::int64_t>(R.p));
  return length(R, sup, dim) - length(R, concat(sub, p_sup), dim);
}

ZMat canonical_basis(const ZmodRing& R, const ZMat& gens, std::size_t dim) {
  check_width(gens, dim);
  ZMat work = gens;
  for (auto& row : work)
    for (auto& x : row) x = R.reduce(x);
  ZMat out;
  for (std::size_t col = 0; col < dim; ++col) {
    // Pivot: least valuation in this column, lowest index on ties.
    int best = R.m;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      int v = R.valuation(work[i][col]);
      if (v < best) {
        best = v;
        bi = i;
      }
    }
    if (best == R.m) continue;
    ZVec piv = work[bi];
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(bi));
    const std::int64_t pv = R.power_of_p(best);
    const std::int64_t uinv = R.inverse(piv[col] / pv);
    for (auto& x : piv) x = R.mul(x, uinv);
    for (auto& row : work) row_axpy(R, row, piv, row[col] / pv);
    // p^{m-v} times the pivot row vanishes in this column but may not elsewhere.
    if (best > 0) {
      ZVec extra = piv;
      for (auto& x : extra) x = R.mul(x, R.power_of_p(R.m - best));
      work.push_back(std::move(extra));
    }
    for (auto& row : out) {
      std::int64_t f = row[col] / pv;
      row_axpy(R, row, piv, f);
    }
    out.push_back(std::move(piv));
  }
  return out;
}

}  // namespace hb
