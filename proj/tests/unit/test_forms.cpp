#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "hb/errors.hpp"
#include "hb/forms.hpp"
#include "hb/numeric.hpp"

using namespace hb;

namespace {

// Every primitive reduced (a, b, c) of discriminant disc, by the bound a <= sqrt(|disc| / 3).
std::vector<QuadForm> reduced_by_enumeration(long disc) {
  std::vector<QuadForm> out;
  for (long a = 1; 3 * a * a <= -disc; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      const long num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const long c = num / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      out.push_back({BigInt(a), BigInt(b), BigInt(c)});
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(ReducedForms, Fixtures) {
  EXPECT_EQ(reduced_forms(-3), (std::vector<QuadForm>{{1, 1, 1}}));
  EXPECT_EQ(reduced_forms(-4), (std::vector<QuadForm>{{1, 0, 1}}));
  EXPECT_EQ(reduced_forms(-23), (std::vector<QuadForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}}));
  EXPECT_EQ(class_number(-23), 3U);
  EXPECT_THROW(static_cast<void>(reduced_forms(-5)), ValidationError);
  EXPECT_THROW(static_cast<void>(reduced_forms(8)), ValidationError);
}

TEST(ReducedForms, MatchEnumerationOracle) {
  for (long disc = -3; disc >= -4000; --disc) {
    if (((disc % 4) + 4) % 4 > 1) continue;
    ASSERT_EQ(reduced_forms(disc), reduced_by_enumeration(disc)) << disc;
  }
}

TEST(ReducedForms, ReduceLandsInList) {
  const QuadForm f{BigInt(7), BigInt(31), BigInt(35)};  // disc -19
  const QuadForm r = reduce(f);
  EXPECT_TRUE(r.is_reduced());
  EXPECT_EQ(r.discriminant(), f.discriminant());
  const auto list = reduced_forms(-19);
  EXPECT_NE(std::find(list.begin(), list.end(), r), list.end());
  const QuadForm g = act(f, BigInt(2), BigInt(1), BigInt(1), BigInt(1));
  EXPECT_EQ(reduce(g), r);
}

TEST(Discriminants, Fundamental) {
  EXPECT_TRUE(is_fundamental_discriminant(-3));
  EXPECT_TRUE(is_fundamental_discriminant(-4));
  EXPECT_TRUE(is_fundamental_discriminant(-8));
  EXPECT_FALSE(is_fundamental_discriminant(-12));
  EXPECT_FALSE(is_fundamental_discriminant(-16));
}

TEST(Discriminants, HeegnerFor37) {
  const auto ds = heegner_discriminants(37, 12);
  for (long d : {3L, 4L, 7L, 11L}) EXPECT_NE(std::find(ds.begin(), ds.end(), d), ds.end()) << d;
  EXPECT_EQ(std::find(ds.begin(), ds.end(), 8L), ds.end());
  for (long d : ds) EXPECT_EQ(kronecker_symbol(-d, 37), 1);
}

TEST(Discriminants, SplitConditionMatchesKronecker) {
  const std::vector<std::uint64_t> Ns{11, 37, 43, 57, 77, 141};
  for (auto N : Ns) {
    const auto ds = heegner_discriminants(N, 400);
    for (long D = 1; D <= 400; ++D) {
      bool expect = is_fundamental_discriminant(-D);
      for (auto q : prime_divisors(static_cast<std::int64_t>(N))) expect = expect && kronecker_symbol(-D, q) == 1;
      EXPECT_EQ(std::find(ds.begin(), ds.end(), D) != ds.end(), expect) << N << " " << D;
    }
  }
}
