#pragma once

// Kolyvagin primes, square-free conductors built from them, derivative
// operators in Z[Z/(l+1)] and the three Sha exponents.

#include <cstdint>
#include <map>
#include <vector>

#include "hb/curve.hpp"
#include "hb/heegner.hpp"

namespace hb {

struct KolyvaginPrime {
  std::uint64_t ell = 0;
  std::int64_t a_ell = 0;
  int M = 0;  // ord_p gcd(a_l, l + 1)
  friend bool operator==(const KolyvaginPrime&, const KolyvaginPrime&) = default;
};

/// True iff l is a Kolyvagin prime for (E, D, p): l prime to N D p, inert in
/// Q(sqrt(-D)), p | a_l and p | l + 1.
bool is_kolyvagin_prime(const EllipticCurveQ& e, std::int64_t D, std::uint64_t p, std::uint64_t ell);

/// All Kolyvagin primes <= bound, ascending.
std::vector<KolyvaginPrime> find_kolyvagin_primes(const EllipticCurveQ& e, std::int64_t D, std::uint64_t p,
                                                  std::uint64_t bound);

struct Conductor {
  std::vector<KolyvaginPrime> factors;
  BigInt c{1};
  int f_c = 0;
  Valuation M = Valuation::infinite();  // min over factors; infinite for c = 1
  int epsilon = 1;                      // eps (-1)^f_c
};

/// eps (-1)^f_c. eps must be +1 or -1.
int epsilon_sign(int eps, const Conductor& c);

/// All r-element subsets (in lexicographic order of the input) with
/// min M >= m. r = 0 gives the unit conductor.
std::vector<Conductor> enumerate_conductors(const std::vector<KolyvaginPrime>& primes, int r, int m, int eps = 1);

using GroupRingElement = std::vector<BigInt>;  // coefficients of sigma^0 .. sigma^n

/// D_l = sum_{i=1}^{l} i sigma^i in Z[Z/(l+1)].
GroupRingElement derivative_operator(std::uint64_t ell);
/// Product in Z[Z/n] for equal-length inputs.
GroupRingElement group_ring_multiply(const GroupRingElement& a, const GroupRingElement& b);
/// Checks (sigma - 1) D_l = (l + 1) - Tr by exact multiplication.
bool verify_derivative_identity(std::uint64_t ell);

/// Order exponent of kappa_{c,m}: 0 when m <= m_c, else m - m_c. Rejects
/// m > M_c.
int kappa_order(int m, const Valuation& m_c, int M_c);

struct BoundReport {
  std::uint64_t p = 0;
  int m0 = 0;
  std::map<std::uint64_t, int> tamagawa_valuations;  // q -> ord_p c_q
  int m_max = 0;
  int exponent_kolyvagin = 0;
  int exponent_improved = 0;
  int exponent_bsd = 0;
  int m_infinity_lower = 0;
};

BoundReport sha_bounds(int m0, const std::vector<LocalData>& local_data, std::uint64_t p);

}  // namespace hb
