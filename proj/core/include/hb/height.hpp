#pragma once

// Neron-Tate canonical height, normalised so that h^(P) = lim h(x(2^n P))/4^n
// with h the logarithmic Weil height of x.

#include "hb/curve.hpp"
#include "hb/periods.hpp"
#include "hb/real.hpp"

namespace hb {

/// Archimedean local height (Silverman normalisation, includes log|Delta|/12).
Real archimedean_local_height(const EllipticCurveQ& e, const RationalPoint& pt, int digits);

/// Same, for a real x-coordinate of a point of E(R).
Real archimedean_local_height_at(const Invariants& inv, const Real& x, int digits);

/// Non-archimedean local height at q as a rational multiple of log q:
/// returns r with lambda_q(P) = r * log q. P must be affine.
BigRational nonarchimedean_local_height(const EllipticCurveQ& e, const RationalPoint& pt, std::uint64_t q);

/// Archimedean local height of the point with elliptic logarithm z, from
/// the q-expansion of the Weierstrass sigma function on the lattice of a
/// model with discriminant `disc`. Same normalisation as
/// archimedean_local_height.
Real archimedean_local_height_analytic(const PeriodLattice& lat, const Complex& z, const BigInt& disc);

/// Canonical height with absolute error below 10^-digits. Zero at infinity.
Real canonical_height(const EllipticCurveQ& e, const RationalPoint& pt, int digits);

}  // namespace hb
