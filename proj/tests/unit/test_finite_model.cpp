#include <gtest/gtest.h>

#include "hb/errors.hpp"
#include "hb/finite_model.hpp"
#include "hb/kolyvagin.hpp"

using namespace hb;

namespace {
const Coefficients k37a1{0, 0, 1, -1, 0};
}

TEST(FieldFl2, ArithmeticLaws) {
  const FieldFl2 F(7);
  for (std::int64_t a = 0; a < 7; ++a)
    for (std::int64_t b = 0; b < 7; ++b) {
      const FieldFl2::Elt x{a, b};
      if (a == 0 && b == 0) continue;
      EXPECT_EQ(F.mul(x, F.inv(x)), F.from_int(1));
      EXPECT_EQ(F.pow(x, 48), F.from_int(1));
      EXPECT_EQ(F.frob(F.frob(x)), x);
      const auto s = F.sqrt(F.mul(x, x));
      ASSERT_TRUE(s);
      EXPECT_EQ(F.mul(*s, *s), F.mul(x, x));
    }
}

TEST(ReducedGroup, SmallFixtures) {
  const EllipticCurveQ e(k37a1);
  EXPECT_EQ(reduced_group(e, 2).order, 5);
  EXPECT_EQ(reduced_group(e, 3).order, 7);
}

// #E(F_{l^2}) = (l + 1)^2 - a_l^2 independently of the enumeration.
TEST(ReducedGroup, OrderMatchesTraceFormula) {
  const EllipticCurveQ e(k37a1);
  for (std::uint64_t l = 2; l < 120; ++l) {
    if (!is_prime(l) || !e.is_good(l)) continue;
    const auto g = reduced_group(e, l);
    const auto a = trace_of_frobenius(e, l);
    const BigInt expect = BigInt(static_cast<long>((l + 1) * (l + 1))) - BigInt(a * a);
    EXPECT_EQ(g.order, expect) << l;
    EXPECT_EQ(g.n1 * g.n2, g.order);
    EXPECT_EQ(g.n2 % g.n1, 0);
    if (l <= kExhaustiveEllBound) {
      EXPECT_TRUE(g.enumerated);
      EXPECT_EQ(BigInt(static_cast<unsigned long>(ReducedCurve(e, l).enumerate().size())), expect);
    }
  }
}

TEST(ChiEll, KolyvaginPrimesOf37a1) {
  const EllipticCurveQ e(k37a1);
  const auto primes = find_kolyvagin_primes(e, 7, 3, 200);
  ASSERT_FALSE(primes.empty());
  for (const auto& k : primes) {
    const auto v = verify_chi_ell(e, k.ell, 3);
    EXPECT_TRUE(v.exhaustive);
    EXPECT_TRUE(v.passed()) << k.ell;
    EXPECT_EQ(v.split.plus_order, v.split.expected_plus);
    EXPECT_EQ(v.split.minus_order, v.split.expected_minus);
    EXPECT_TRUE(v.kernel_matches);
    EXPECT_EQ(v.M, k.M);
  }
}

TEST(ChiEll, ExponentRules) {
  EXPECT_EQ(kolyvagin_exponent(0, 17, 3), 2);  // gcd(0, 18) = 18
  EXPECT_EQ(kolyvagin_exponent(-6, 17, 3), 1);
  EXPECT_THROW(static_cast<void>(kolyvagin_exponent(1, 17, 3)), ValidationError);
}
