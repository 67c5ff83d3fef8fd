#include <gtest/gtest.h>

#include <numeric>

#include "hb/errors.hpp"
#include "hb/kolyvagin.hpp"
#include "hb/tate.hpp"

using namespace hb;

namespace {
const Coefficients k37a1{0, 0, 1, -1, 0};
}

TEST(KolyvaginPrimes, MatchDefinition37a1) {
  const EllipticCurveQ e(k37a1);
  const auto primes = find_kolyvagin_primes(e, 7, 3, 400);
  std::vector<KolyvaginPrime> expect;
  for (std::uint64_t l = 2; l <= 400; ++l) {
    if (!is_prime(l) || l == 3 || l == 7 || l == 37) continue;
    const std::int64_t a = trace_of_frobenius(e, l);
    const auto li = static_cast<std::int64_t>(l);
    if (kronecker_symbol(-7, li) != -1 || a % 3 != 0 || (li + 1) % 3 != 0) continue;
    int M = 0;
    for (std::int64_t g = std::gcd(a, li + 1); g % 3 == 0; g /= 3) ++M;
    expect.push_back({l, a, M});
  }
  EXPECT_EQ(primes, expect);
  ASSERT_FALSE(primes.empty());
  EXPECT_EQ(primes.front().ell, 17U);
  EXPECT_TRUE(is_kolyvagin_prime(e, 7, 3, 17));
  EXPECT_FALSE(is_kolyvagin_prime(e, 7, 3, 37));
}

TEST(DerivativeOperator, TelescopingIdentity) {
  for (std::uint64_t l = 2; l <= 199; ++l)
    if (is_prime(l)) { ASSERT_TRUE(verify_derivative_identity(l)) << l; }
  const auto d = derivative_operator(3);
  EXPECT_EQ(d, (GroupRingElement{0, 1, 2, 3}));
  // (sigma - 1) D_3 = 4 - (1 + sigma + sigma^2 + sigma^3).
  const GroupRingElement s_minus_1{-1, 1, 0, 0};
  EXPECT_EQ(group_ring_multiply(s_minus_1, d), (GroupRingElement{3, -1, -1, -1}));
}

TEST(Conductors, EnumerationAndSigns) {
  const std::vector<KolyvaginPrime> ps{{17, 0, 2}, {41, 3, 1}, {53, -6, 1}};
  EXPECT_EQ(enumerate_conductors(ps, 0, 0).size(), 1U);
  EXPECT_TRUE(enumerate_conductors(ps, 0, 0).front().M.is_infinite());
  const auto two = enumerate_conductors(ps, 2, 1, -1);
  ASSERT_EQ(two.size(), 3U);
  EXPECT_EQ(two[0].c, 17 * 41);
  EXPECT_EQ(two[0].M, Valuation(1));
  EXPECT_EQ(two[0].epsilon, -1);
  EXPECT_EQ(enumerate_conductors(ps, 2, 2).size(), 0U);
  EXPECT_EQ(enumerate_conductors(ps, 1, 2).size(), 1U);
  EXPECT_EQ(epsilon_sign(1, two[0]), 1 * ((two[0].f_c % 2 == 0) ? 1 : -1));
  EXPECT_THROW(static_cast<void>(epsilon_sign(0, two[0])), ValidationError);
}

TEST(KappaOrder, Reconstruction) {
  for (int M = 1; M <= 5; ++M)
    for (int mc = 0; mc <= M; ++mc)
      for (int m = 1; m <= M; ++m) {
        const int k = kappa_order(m, Valuation(mc), M);
        EXPECT_EQ(k, m <= mc ? 0 : m - mc);
        if (k > 0) { EXPECT_EQ(k + mc, m); }
      }
  EXPECT_EQ(kappa_order(2, Valuation::infinite(), 3), 0);
  EXPECT_THROW(static_cast<void>(kappa_order(4, Valuation(1), 3)), ValidationError);
}

TEST(ShaBounds, Fixture141a1) {
  const EllipticCurveQ e(Coefficients{0, 1, 1, -12, 2});
  const auto b = sha_bounds(1, e.bad_primes(), 7);
  EXPECT_EQ(b.m_max, 1);
  EXPECT_EQ(b.exponent_kolyvagin, 2);
  EXPECT_EQ(b.exponent_improved, 0);
  EXPECT_EQ(b.exponent_bsd, 0);
  EXPECT_EQ(b.m_infinity_lower, 1);
  EXPECT_THROW(static_cast<void>(sha_bounds(0, e.bad_primes(), 7)), InternalError);
}

TEST(ShaBounds, DefinitionsAndOrdering) {
  const EllipticCurveQ e(Coefficients{0, -1, 1, -10, -20});
  const auto b = sha_bounds(3, e.bad_primes(), 5);  // c_11 = 5
  EXPECT_EQ(b.tamagawa_valuations.at(11), 1);
  EXPECT_EQ(b.exponent_kolyvagin, 6);
  EXPECT_EQ(b.exponent_improved, 4);
  EXPECT_EQ(b.exponent_bsd, 4);
  // Two bad primes with p | c_q separate the improved and BSD exponents.
  LocalData a = e.bad_primes().front(), c = a;
  c.q = 13;
  const auto two = sha_bounds(3, {a, c}, 5);
  EXPECT_EQ(two.exponent_improved, 4);
  EXPECT_EQ(two.exponent_bsd, 2);
  EXPECT_LE(two.exponent_bsd, two.exponent_improved);
  EXPECT_THROW(static_cast<void>(sha_bounds(1, e.bad_primes(), 11)), ValidationError);
  EXPECT_THROW(static_cast<void>(sha_bounds(1, e.bad_primes(), 4)), ValidationError);
  EXPECT_THROW(static_cast<void>(sha_bounds(-1, e.bad_primes(), 3)), ValidationError);
}
