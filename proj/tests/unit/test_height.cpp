#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hb/curve.hpp"
#include "hb/height.hpp"
#include "hb/periods.hpp"

using namespace hb;

namespace {

const Coefficients k37a1{0, 0, 1, -1, 0};

// h(x(2^n P)) / 4^n with exact doubling.
double doubling_height(const EllipticCurveQ& e, RationalPoint P, int n) {
  for (int i = 0; i < n; ++i) P = e.add(P, P);
  return naive_height(P) / std::pow(4.0, n);
}

}  // namespace

TEST(Height, Generator37a1) {
  const EllipticCurveQ e(k37a1);
  const Real h = canonical_height(e, RationalPoint::affine(0, 0), 40);
  EXPECT_EQ(h.to_string(15), "0.0511114082399688");
  EXPECT_NEAR(h.to_double(), doubling_height(e, RationalPoint::affine(0, 0), 9), 1e-5);
}

TEST(Height, QuadraticInMultiples) {
  const EllipticCurveQ e(k37a1);
  const auto P = RationalPoint::affine(0, 0);
  const Real h1 = canonical_height(e, P, 40);
  for (long n : {2L, 3L, 5L}) {
    const Real hn = canonical_height(e, e.multiply(P, n), 40);
    EXPECT_LT(abs(hn - h1 * (n * n)), ten_pow_neg(30, 40)) << n;
  }
  EXPECT_TRUE(canonical_height(e, RationalPoint::at_infinity(), 40).is_zero());
}

TEST(Height, TorsionHasZeroHeight) {
  const EllipticCurveQ e(Coefficients{0, -1, 1, -10, -20});
  EXPECT_LT(abs(canonical_height(e, RationalPoint::affine(5, 5), 40)), ten_pow_neg(30, 40));
}

TEST(Height, AnalyticArchimedeanAgrees) {
  const EllipticCurveQ e(k37a1);
  const PeriodLattice lat = period_lattice(e, 50);
  const auto P = e.multiply(RationalPoint::affine(0, 0), 4);  // on the identity component
  const Real direct = archimedean_local_height(e, P, 40);
  // Locate the elliptic logarithm of P by matching x on the real component.
  const Real target(P.x, 50);
  Real lo(BigRational(1, 1000), 50), hi = lat.omega1.re() / 2L;
  for (int i = 0; i < 200; ++i) {
    const Real mid = (lo + hi) / 2L;
    const auto [x, w] = point_from_log(e, lat, Complex(mid));
    // x decreases from infinity as z runs from 0 to omega1 / 2.
    if (x.re() > target) lo = mid; else hi = mid;
  }
  const Real analytic = archimedean_local_height_analytic(lat, Complex(lo), e.discriminant());
  EXPECT_LT(abs(analytic.with_digits(40) - direct), ten_pow_neg(25, 40));
}

// Twice the sum of local heights of nP, checked against n^2 h^(P).
TEST(Height, LocalDecompositionScalesQuadratically) {
  const EllipticCurveQ e(k37a1);
  const auto P = RationalPoint::affine(0, 0);
  const Real h1 = canonical_height(e, P, 40);
  for (long n : {1L, 3L, 5L, 7L}) {
    const auto Q = e.multiply(P, n);
    Real sum = archimedean_local_height(e, Q, 40);
    std::vector<std::uint64_t> places{37};
    for (const auto& pp : factor(BigInt(Q.x.get_den()))) places.push_back(pp.prime.get_ui());
    for (std::uint64_t q : places) {
      const BigRational r = nonarchimedean_local_height(e, Q, q);
      sum = sum + Real(r, 40) * log(Real(static_cast<long>(q), 40));
    }
    EXPECT_LT(abs(sum * 2L - h1 * (n * n)), ten_pow_neg(25, 40)) << n;
  }
}
