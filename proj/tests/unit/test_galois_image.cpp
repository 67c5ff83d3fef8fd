#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "hb/errors.hpp"
#include "hb/galois_image.hpp"

using namespace hb;

TEST(GaloisImage, SlotsPerPrime) {
  EXPECT_EQ(required_slots(3).size(), 2U);
  EXPECT_EQ(required_slots(5).size(), 3U);
}

TEST(GaloisImage, SurjectiveFor37a1) {
  const EllipticCurveQ e(Coefficients{0, 0, 1, -1, 0});
  for (std::uint64_t p : {3, 5, 7, 11}) {
    const auto v = mod_p_image_surjective(e, p, 10000);
    EXPECT_EQ(v.status, ImageStatus::surjective) << p;
    EXPECT_TRUE(v.missing.empty());
    for (const auto& [slot, ell] : v.witnesses) {
      EXPECT_NE(ell, p);
      EXPECT_TRUE(e.is_good(ell)) << slot;
    }
  }
}

// y^2 = x^3 - x has CM by Z[i]: 5 splits, so the image lies in a split
// Cartan normalizer; 3 is inert, so it lies in a nonsplit one.
TEST(GaloisImage, CmCurveStaysInconclusive) {
  const EllipticCurveQ e(Coefficients{0, 0, 0, -1, 0});
  auto missing = [&](std::uint64_t p, const std::string& slot) {
    const auto v = mod_p_image_surjective(e, p, 100000);
    EXPECT_EQ(v.status, ImageStatus::inconclusive);
    return std::find(v.missing.begin(), v.missing.end(), slot) != v.missing.end();
  };
  EXPECT_TRUE(missing(5, "borel_split_cartan"));
  EXPECT_TRUE(missing(3, "nonsplit_cartan_normalizer"));
}

TEST(GaloisImage, FiveIsogenyStaysInconclusive) {
  const EllipticCurveQ e(Coefficients{0, -1, 1, -10, -20});
  EXPECT_EQ(mod_p_image_surjective(e, 5, 100000).status, ImageStatus::inconclusive);
  EXPECT_EQ(mod_p_image_surjective(e, 3, 10000).status, ImageStatus::surjective);
}

TEST(GaloisImage, Fixture141a1) {
  const EllipticCurveQ e(Coefficients{0, 1, 1, -12, 2});
  EXPECT_EQ(mod_p_image_surjective(e, 7, 2000).status, ImageStatus::surjective);
}

TEST(GaloisImage, RejectsBadInput) {
  const EllipticCurveQ e(Coefficients{0, 0, 1, -1, 0});
  EXPECT_THROW(static_cast<void>(mod_p_image_surjective(e, 2, 100)), ValidationError);
  EXPECT_THROW(static_cast<void>(mod_p_image_surjective(e, 37, 100)), ValidationError);
}
