#pragma once

// Period lattices and Weierstrass functions of curves over Q.

#include <vector>

#include "hb/curve.hpp"
#include "hb/real.hpp"

namespace hb {

/// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, descending (three if the
/// discriminant is positive, one otherwise).
std::vector<Real> real_two_division_roots(const Invariants& inv, int digits);

struct PeriodLattice {
  /// omega1 > 0 generates the real sublattice; Im(omega2 / omega1) > 0.
  /// Rectangular when the discriminant is positive, Re(omega2) = -omega1/2
  /// otherwise.
  Complex omega1, omega2;
  /// A basis of the same lattice with tau = w2/w1 in the standard
  /// fundamental domain; used for series evaluation.
  Complex w1, w2;
  int digits = kMinDigits;

  [[nodiscard]] Complex tau() const { return w2 / w1; }
  /// Volume of the real locus: omega1 times the number of real components.
  [[nodiscard]] Real real_period() const;
  bool two_components = false;
};

PeriodLattice period_lattice(const EllipticCurveQ& e, int digits);

/// Coordinates of z with respect to (omega1, omega2).
std::pair<Real, Real> lattice_coordinates(const PeriodLattice& lat, const Complex& z);
/// Representative of z mod the lattice with coordinates in [-1/2, 1/2).
Complex reduce_mod_lattice(const PeriodLattice& lat, const Complex& z);
/// Distance from z to the nearest lattice point.
Real distance_to_lattice(const PeriodLattice& lat, const Complex& z);

struct WeierstrassValue {
  Complex p, dp;
};

/// Weierstrass p and p' of the lattice at z (z not a lattice point).
WeierstrassValue weierstrass(const PeriodLattice& lat, const Complex& z);

/// (x, 2y + a1 x + a3) of the point with elliptic logarithm z on the model.
std::pair<Complex, Complex> point_from_log(const EllipticCurveQ& e, const PeriodLattice& lat, const Complex& z);

/// c4 and c6 recomputed from the lattice by Eisenstein series.
std::pair<Complex, Complex> lattice_invariants(const PeriodLattice& lat);

}  // namespace hb
