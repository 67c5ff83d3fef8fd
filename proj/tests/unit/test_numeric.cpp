#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "hb/errors.hpp"
#include "hb/numeric.hpp"

using namespace hb;

namespace {

// Legendre symbol by listing squares mod an odd prime.
int legendre_by_squares(std::int64_t a, std::int64_t p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  for (std::int64_t y = 1; y < p; ++y)
    if (y * y % p == a) return 1;
  return -1;
}

// (a|2) from the definition: 0 for even a, +1 for a = +-1 mod 8, -1 for +-3.
int kronecker_two(std::int64_t a) {
  if (a % 2 == 0) return 0;
  const std::int64_t r = ((a % 8) + 8) % 8;
  return (r == 1 || r == 7) ? 1 : -1;
}

bool slow_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Kronecker symbol from the prime factorisation of n, using the two oracles above.
int kronecker_by_factoring(std::int64_t a, std::int64_t n) {
  int s = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) s = -s;
  }
  if (n == 1) return s;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (!slow_prime(p)) continue;
    while (n % p == 0) {
      n /= p;
      s *= (p == 2) ? kronecker_two(a) : legendre_by_squares(a, p);
    }
  }
  return s;
}

}  // namespace

TEST(Kronecker, Fixtures) {
  EXPECT_EQ(kronecker_symbol(-3, 37), 1);
  EXPECT_EQ(kronecker_symbol(-7, 2), 1);
  EXPECT_EQ(kronecker_symbol(-8, 37), -1);
  EXPECT_EQ(kronecker_symbol(5, 1), 1);
  EXPECT_THROW(static_cast<void>(kronecker_symbol(3, 0)), ValidationError);
}

TEST(Kronecker, MatchesFactoringOracle) {
  for (std::int64_t n = -60; n <= 200; ++n) {
    if (n == 0) continue;
    for (std::int64_t a = -120; a <= 120; ++a) ASSERT_EQ(kronecker_symbol(a, n), kronecker_by_factoring(a, n)) << a << " " << n;
  }
}

TEST(Kronecker, BigIntAgrees) {
  for (std::int64_t n = 1; n <= 99; n += 2)
    for (std::int64_t a = -50; a <= 50; ++a)
      ASSERT_EQ(kronecker_symbol(BigInt(static_cast<long>(a)), BigInt(static_cast<long>(n))), kronecker_symbol(a, n));
}

TEST(PValuation, MatchesRepeatedDivision) {
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 37}) {
    for (std::int64_t n = -5000; n <= 5000; ++n) {
      const Valuation v = p_valuation(n, p);
      if (n == 0) {
        ASSERT_TRUE(v.is_infinite());
        continue;
      }
      int k = 0;
      for (std::int64_t m = n; m % static_cast<std::int64_t>(p) == 0; m /= static_cast<std::int64_t>(p)) ++k;
      ASSERT_EQ(v.value(), k) << n << " " << p;
      ASSERT_EQ(p_valuation(BigInt(static_cast<long>(n)), p), v);
    }
  }
}

TEST(PValuation, RejectsComposite) { EXPECT_THROW(static_cast<void>(p_valuation(12, 4)), ValidationError); }

TEST(PValuation, Fixtures) {
  EXPECT_EQ(p_valuation(BigInt(5) * 5 * 5 * 7, 5).value(), 3);
  EXPECT_TRUE(p_valuation(0, 3).is_infinite());
  EXPECT_LT(Valuation(4), Valuation::infinite());
}

TEST(Primes, SieveAndMillerRabinAgree) {
  const auto ps = primes_up_to(20000);
  std::size_t i = 0;
  for (std::uint64_t n = 0; n <= 20000; ++n) {
    const bool expect = slow_prime(static_cast<std::int64_t>(n));
    ASSERT_EQ(is_prime(n), expect) << n;
    if (expect) { ASSERT_EQ(ps.at(i++), n); }
  }
  EXPECT_EQ(i, ps.size());
  EXPECT_TRUE(is_prime(std::uint64_t{18446744073709551557ULL}));
  EXPECT_FALSE(is_prime(std::uint64_t{3215031751ULL}));
}

TEST(Factor, ReconstructsInput) {
  for (long n : {1L, 2L, 360L, 9991L, 1000003L * 999983L, -4620L}) {
    BigInt prod = 1;
    for (const auto& pp : factor(BigInt(n))) {
      EXPECT_TRUE(is_prime(pp.prime));
      for (int k = 0; k < pp.exponent; ++k) prod *= pp.prime;
    }
    EXPECT_EQ(prod, BigInt(n < 0 ? -n : n));
  }
}

TEST(Modular, InverseAndPower) {
  for (std::int64_t a = 1; a < 101; ++a) {
    EXPECT_EQ(mulmod(a, invmod(a, 101), 101), 1);
    EXPECT_EQ(powmod(a, 100, 101), 1);
  }
  EXPECT_EQ(mod(-7, 5), 3);
}

TEST(Rational, SqrtAndParsing) {
  EXPECT_EQ(*exact_sqrt(BigInt(144)), 12);
  EXPECT_FALSE(exact_sqrt(BigInt(145)));
  EXPECT_EQ(*exact_sqrt(BigRational(9, 49)), BigRational(3, 7));
  EXPECT_EQ(parse_rational("-6/4"), BigRational(-3, 2));
  EXPECT_EQ(to_string(parse_rational("10/4")), "5/2");
  EXPECT_TRUE(is_squarefree(-30));
  EXPECT_FALSE(is_squarefree(18));
}
