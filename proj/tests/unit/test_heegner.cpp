#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "hb/errors.hpp"
#include "hb/heegner.hpp"
#include "hb/height.hpp"

using namespace hb;

namespace {

const Coefficients k37a1{0, 0, 1, -1, 0};
const Coefficients k11a1{0, -1, 1, -10, -20};

void expect_level_n(const HeegnerSetup& s, const HeegnerForm& f) {
  const BigInt N(static_cast<unsigned long>(s.N));
  EXPECT_EQ(f.form.a % N, 0) << f.form.to_string();
  EXPECT_EQ(f.form.discriminant(), BigInt(-s.D) * f.conductor * f.conductor);
  BigInt r = (f.form.b - BigInt(s.beta) * f.conductor) % (2 * N);
  EXPECT_EQ(r, 0) << f.form.to_string();
}

}  // namespace

TEST(HeegnerSetup, BetaAndValidation) {
  const EllipticCurveQ e(k37a1);
  const auto s = make_heegner_setup(e, 7);
  EXPECT_EQ(s.beta, 17);
  EXPECT_EQ((s.beta * s.beta + 7) % (4 * 37), 0);
  EXPECT_EQ(s.unit_index(), 1);
  EXPECT_THROW(static_cast<void>(make_heegner_setup(e, 8)), ValidationError);   // 37 inert
  EXPECT_THROW(static_cast<void>(make_heegner_setup(e, 12)), ValidationError);  // not fundamental
  EXPECT_THROW(static_cast<void>(make_heegner_setup(e, 3)), ValidationError);   // extra units
  EXPECT_EQ(make_heegner_setup(e, 3, true).unit_index(), 3);
}

TEST(HeegnerForms, ConductorOneCoversClassGroup) {
  const EllipticCurveQ e(Coefficients{0, 1, 1, -12, 2});
  for (std::int64_t D : heegner_discriminants(141, 200)) {
    const auto s = make_heegner_setup(e, D);
    const auto forms = heegner_forms(s, 1);
    EXPECT_EQ(forms.size(), class_number(-D)) << D;
    std::set<QuadForm> classes;
    for (const auto& f : forms) {
      expect_level_n(s, f);
      classes.insert(reduce(f.form));
    }
    EXPECT_EQ(classes.size(), forms.size());
  }
}

// For l inert in K, h(-D l^2) = h(-D) (l + 1) and the level-l forms hit every class.
TEST(HeegnerForms, InertConductorHitsRingClassGroup) {
  const EllipticCurveQ e(k37a1);
  const auto s = make_heegner_setup(e, 7);
  for (std::int64_t ell : {3, 5, 13, 17, 19}) {
    ASSERT_EQ(kronecker_symbol(-7, ell), -1);
    const auto forms = heegner_forms(s, ell);
    const auto expect = reduced_forms(-7 * ell * ell);
    EXPECT_EQ(forms.size(), static_cast<std::size_t>(ell + 1));
    std::set<QuadForm> classes;
    for (const auto& f : forms) {
      expect_level_n(s, f);
      classes.insert(reduce(f.form));
    }
    EXPECT_EQ(std::vector<QuadForm>(classes.begin(), classes.end()), expect);
  }
  EXPECT_THROW(static_cast<void>(heegner_forms(s, 37)), ValidationError);
}

TEST(ModularParam, FourierCoefficients37a1) {
  const auto an = fourier_coefficients(EllipticCurveQ(k37a1), 12);
  const std::vector<std::int64_t> expect{0, 1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5, -6};
  EXPECT_EQ(an, expect);
}

// phi(gamma tau) - phi(tau) is a period for gamma in Gamma_0(37).
TEST(ModularParam, GammaZeroInvariance) {
  const int digits = 30;
  const EllipticCurveQ e(k37a1);
  const PeriodLattice lat = period_lattice(e, digits + 10);
  const Real s = Real(1L, digits + 10) / sqrt(Real(37L, digits + 10));
  const Complex tau(Real(-1L, digits + 10) / 37L + Real("0.001", digits + 10), s / 37L);
  const Complex one(Real(1L, digits + 10));
  const Complex gtau = tau / (tau * 37L + one);
  const double im = std::min(tau.im().to_double(), gtau.im().to_double());
  const long n = required_terms(im, digits);
  const auto an = fourier_coefficients(e, static_cast<std::size_t>(n));
  const Complex d = modular_param(an, gtau, digits, n) - modular_param(an, tau, digits, n);
  EXPECT_LT(distance_to_lattice(lat, d), ten_pow_neg(digits - 5, digits + 10));
  // A generic translate is not a period.
  EXPECT_GT(distance_to_lattice(lat, modular_param(an, tau, digits, n)), ten_pow_neg(5, digits + 10));
  EXPECT_THROW(static_cast<void>(modular_param(an, tau, digits, 10)), ValidationError);
}

TEST(HeegnerPoint, ThirtySevenA1) {
  const EllipticCurveQ e(k37a1);
  const auto r = heegner_point(make_heegner_setup(e, 7), 60);
  ASSERT_TRUE(r.recognized) << r.failure;
  EXPECT_FALSE(r.on_twist);
  EXPECT_EQ(r.form_count, 1U);
  EXPECT_EQ(r.point, RationalPoint::affine(1, 0));
  EXPECT_LT(abs(r.height - r.analytic_height), ten_pow_neg(20, 60));
  // (1, 0) = 2 (0, 0)
  const Real hg = canonical_height(e, RationalPoint::affine(0, 0), 40);
  EXPECT_LT(abs(r.height.with_digits(40) - hg * 4L), ten_pow_neg(30, 40));
}

TEST(HeegnerPoint, PDivision) {
  const EllipticCurveQ e(k37a1);
  const auto r = heegner_point(make_heegner_setup(e, 7), 60);
  ASSERT_TRUE(r.recognized);
  EXPECT_EQ(p_division_depth(e, r.point_lattice, r.log_on_curve, 2, 40), 1);
  EXPECT_EQ(p_division_depth(e, r.point_lattice, r.log_on_curve, 3, 40), 0);
  const auto half = divide_by_p(e, r.point_lattice, r.log_on_curve, 2, 40);
  ASSERT_TRUE(half);
  EXPECT_EQ(e.multiply(half->first, 2), r.point);
}

TEST(HeegnerPoint, RankZeroLandsOnTwist) {
  const EllipticCurveQ e(k11a1);
  const auto r = heegner_point(make_heegner_setup(e, 7), 60);
  ASSERT_TRUE(r.recognized) << r.failure;
  EXPECT_TRUE(r.on_twist);
  EXPECT_EQ(r.twist_d, -7);
  ASSERT_TRUE(r.point_curve);
  EXPECT_EQ(r.point_curve->conductor(), 11 * 49);
  EXPECT_TRUE(r.point_curve->contains(r.point));
  EXPECT_FALSE(is_torsion(*r.point_curve, r.point));
}

TEST(HeegnerIndex, IntegerSquareRatio) {
  const EllipticCurveQ e(k37a1);
  const auto g = RationalPoint::affine(0, 0);
  const auto idx = heegner_index(e, e.multiply(g, 10), g, 5);
  EXPECT_EQ(idx.n, 10);
  EXPECT_EQ(idx.m0, 1);
  EXPECT_THROW(static_cast<void>(heegner_index(e, g, g, 2)), ValidationError);
}

TEST(Distribution, LevelEllRelation) {
  const EllipticCurveQ e(k37a1);
  const auto s = make_heegner_setup(e, 7);
  const auto lo = verify_distribution(s, 3, 40);
  EXPECT_EQ(lo.forms_level_ell, 4U);
  EXPECT_EQ(lo.a_ell, -3);
  EXPECT_LT(lo.residual, ten_pow_neg(30, 40));
  const auto hi = verify_distribution(s, 3, 80);
  EXPECT_LT(hi.residual, lo.residual * ten_pow_neg(10, 80) + ten_pow_neg(70, 80));
  EXPECT_THROW(static_cast<void>(verify_distribution(s, 2, 40)), ValidationError);  // 2 splits in Q(sqrt(-7))
}
