#pragma once

// Heegner points on X_0(N): CM forms, the modular parametrisation as a
// q-series, and recognition of the trace y_K as an exact rational point.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hb/curve.hpp"
#include "hb/forms.hpp"
#include "hb/periods.hpp"
#include "hb/real.hpp"

namespace hb {

struct HeegnerSetup {
  EllipticCurveQ curve;
  std::int64_t D = 0;     // K = Q(sqrt(-D))
  std::int64_t beta = 0;  // least beta >= 0 with beta^2 = -D mod 4N
  std::uint64_t N = 0;
  std::vector<QuadForm> class_forms;  // reduced forms of discriminant -D
  bool extra_units = false;           // D in {3, 4}

  /// [O_K^* : {+-1}]: 3 for D = 3, 2 for D = 4, else 1.
  [[nodiscard]] int unit_index() const;
};

/// Validates D (fundamental, every prime of N split, D > 4 unless
/// allow_extra_units) and picks beta.
HeegnerSetup make_heegner_setup(const EllipticCurveQ& e, std::int64_t D, bool allow_extra_units = false);

struct HeegnerForm {
  QuadForm form;  // [A, B, C] with N | A, B = beta c mod 2N
  std::int64_t conductor = 1;

  [[nodiscard]] Complex tau(int digits) const;
  [[nodiscard]] double im_tau() const;
};

/// One level-N form per class of Pic(O_c), in the order of the reduced forms
/// of discriminant -D c^2. Requires gcd(c, N D) = 1.
std::vector<HeegnerForm> heegner_forms(const HeegnerSetup& setup, std::int64_t c);

/// a_1..a_n of the newform attached to E (index 0 unused).
std::vector<std::int64_t> fourier_coefficients(const EllipticCurveQ& e, std::size_t n);

/// Terms needed so that sum_{m > n} d(m) sqrt(m) |q|^m < 10^-digits.
long required_terms(double im_tau, int digits);

/// sum_{n <= n_terms} a_n / n q^n with q = e^{2 pi i tau}; `an` must cover
/// n_terms. Throws ValidationError if n_terms is too small for `digits`.
Complex modular_param(const std::vector<std::int64_t>& an, const Complex& tau, int digits, long n_terms);
Complex modular_param(const EllipticCurveQ& e, const Complex& tau, int digits, long n_terms);

/// Sum of modular_param over the forms, evaluated on up to `workers`
/// threads and added in list order.
Complex sum_over_forms(const std::vector<std::int64_t>& an, const std::vector<HeegnerForm>& forms, int digits,
                       unsigned workers);

/// Exact point with coordinates (x, 2y + a1 x + a3) close to the given
/// complex values, or nullopt.
std::optional<RationalPoint> recognize_point(const EllipticCurveQ& e, const Complex& x, const Complex& w, int digits);

struct HeegnerPointResult {
  std::int64_t D = 0, beta = 0;
  int digits = 0;
  std::size_t form_count = 0;
  long max_terms = 0;
  PeriodLattice lattice;
  Complex z;        // sum over the class group, reduced mod the lattice
  int sign = 0;     // s with z - s conj(z) torsion; y_K lies in E(K)^s
  Complex z_trace;  // z + s conj(z)
  bool recognized = false;
  std::string failure;
  bool on_twist = false;
  BigInt twist_d = 1;
  std::optional<EllipticCurveQ> point_curve;  // E or its minimal twist by d
  RationalPoint point;                        // 2 y_K + T on point_curve
  Complex log_on_curve;                       // elliptic log of point on point_curve
  PeriodLattice point_lattice;
  Real residual, height, analytic_height;
};

HeegnerPointResult heegner_point(const HeegnerSetup& setup, int digits, unsigned workers = 1);

/// Rational Q with p Q = P found by dividing the elliptic logarithm, together
/// with the logarithm of Q.
std::optional<std::pair<RationalPoint, Complex>> divide_by_p(const EllipticCurveQ& e, const PeriodLattice& lat,
                                                            const Complex& z, std::uint64_t p, int digits);

/// Largest k <= max_depth with P in p^k E(Q), by repeated analytic division.
int p_division_depth(const EllipticCurveQ& e, const PeriodLattice& lat, const Complex& z, std::uint64_t p, int digits,
                     int max_depth = 8);

struct IndexResult {
  int m0 = 0;
  BigInt n;      // sqrt of the height ratio
  Real ratio;    // h(y') / h(g)
  Real deviation;
};

/// m0 = ord_p sqrt(h(y') / h(g)); throws ComputationError unless the ratio is
/// within 10^-10 of an integer square. p must be odd.
IndexResult heegner_index(const EllipticCurveQ& e, const RationalPoint& y, const RationalPoint& generator,
                          std::uint64_t p, int digits = 40);

struct DistributionCheck {
  std::uint64_t ell = 0;
  std::int64_t a_ell = 0;
  std::size_t forms_level_ell = 0, forms_level_one = 0;
  long max_terms = 0;
  Complex sum_ell, sum_one;
  Real residual;
};

/// Distance to the lattice of sum_{level l} z - a_l sum_{level 1} z (with the
/// level-l sum weighted by the unit index for D in {3, 4}). l must be inert
/// in K and prime to N D.
DistributionCheck verify_distribution(const HeegnerSetup& setup, std::uint64_t ell, int digits,
                                      unsigned workers = 1);

}  // namespace hb
