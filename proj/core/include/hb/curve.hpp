#pragma once

// Integral Weierstrass models y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
// over Q, their reduction data, and exact rational points.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hb/numeric.hpp"

namespace hb {

struct Coefficients {
  BigInt a1, a2, a3, a4, a6;
  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

struct Invariants {
  BigInt b2, b4, b6, b8, c4, c6, disc;
};

Invariants compute_invariants(const Coefficients& a);

/// Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct Transform {
  BigRational u{1}, r{0}, s{0}, t{0};

  /// Transform equal to applying *this first and then `next`.
  [[nodiscard]] Transform then(const Transform& next) const;
  [[nodiscard]] Transform inverse() const;
};

/// Coefficients of the transformed model; throws InternalError if not integral.
Coefficients apply(const Transform& tr, const Coefficients& a);

struct RationalPoint {
  bool infinity = true;
  BigRational x, y;

  static RationalPoint at_infinity() { return {}; }
  static RationalPoint affine(BigRational x, BigRational y) { return {false, std::move(x), std::move(y)}; }
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
  [[nodiscard]] std::string to_string() const;
};

/// Image of a point of the source model on the transformed model.
RationalPoint apply(const Transform& tr, const RationalPoint& pt);

enum class Reduction { good, split_multiplicative, nonsplit_multiplicative, additive };
std::string to_string(Reduction r);

struct Kodaira {
  enum class Kind { I, I_star, II, III, IV, IV_star, III_star, II_star };
  Kind kind = Kind::I;
  int n = 0;  // only for I_n and I_n*

  [[nodiscard]] std::string to_string() const;
  /// Number of irreducible components of the special fibre.
  [[nodiscard]] int components() const;
  friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

struct LocalData {
  std::uint64_t q = 0;
  Kodaira kodaira;
  int tamagawa = 1;
  Reduction reduction = Reduction::good;
  int disc_valuation = 0;
  int conductor_exponent = 0;
  friend bool operator==(const LocalData&, const LocalData&) = default;
};

class EllipticCurveQ {
 public:
  /// Validates a globally minimal model; throws ValidationError for a
  /// singular or non-minimal one.
  explicit EllipticCurveQ(const Coefficients& a, std::string label = {});

  /// Globally minimal reduced model of an arbitrary integral model. When
  /// `to_minimal` is given it receives the transform from `a` to the result.
  static EllipticCurveQ minimal_model(const Coefficients& a, std::string label = {},
                                      Transform* to_minimal = nullptr);

  [[nodiscard]] const Coefficients& coefficients() const { return a_; }
  [[nodiscard]] const Invariants& invariants() const { return inv_; }
  [[nodiscard]] const BigInt& discriminant() const { return inv_.disc; }
  [[nodiscard]] const BigInt& conductor() const { return conductor_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Local data at the bad primes, ascending.
  [[nodiscard]] const std::vector<LocalData>& bad_primes() const { return bad_; }
  [[nodiscard]] bool is_good(std::uint64_t q) const;
  /// Local data at any prime q (I_0 data for good q).
  [[nodiscard]] LocalData local_data(std::uint64_t q) const;

  [[nodiscard]] bool contains(const RationalPoint& pt) const;
  [[nodiscard]] RationalPoint negate(const RationalPoint& pt) const;
  [[nodiscard]] RationalPoint add(const RationalPoint& p, const RationalPoint& q) const;
  [[nodiscard]] RationalPoint multiply(const RationalPoint& pt, long n) const;

  [[nodiscard]] std::string to_string() const;

 private:
  Coefficients a_;
  Invariants inv_;
  BigInt conductor_;
  std::vector<LocalData> bad_;
  std::string label_;
};

LocalData local_data(const EllipticCurveQ& e, std::uint64_t q);

/// #E~(F_l) by a quadratic-character sum; l must be of good reduction.
std::uint64_t count_points_mod(const EllipticCurveQ& e, std::uint64_t ell);
std::int64_t trace_of_frobenius(const EllipticCurveQ& e, std::uint64_t ell);

/// Integer roots of x^3 + a x^2 + b x + c, ascending and without repetition.
std::vector<BigInt> integer_roots_monic_cubic(const BigInt& a, const BigInt& b, const BigInt& c);

/// All rational torsion points (including infinity).
std::vector<RationalPoint> torsion_points(const EllipticCurveQ& e);
std::uint64_t torsion_order(const EllipticCurveQ& e);
bool is_torsion(const EllipticCurveQ& e, const RationalPoint& pt);

/// log max(|num x|, |den x|); 0 at infinity.
double naive_height(const RationalPoint& pt);

/// Non-torsion point with x = m/e^2, |m| <= bound, 1 <= e <= bound, of least
/// canonical height among those found.
std::optional<RationalPoint> search_generator(const EllipticCurveQ& e, long bound);

/// Squarefree part of a nonzero integer, with sign.
BigInt squarefree_part(const BigInt& d);

/// Minimal model of the quadratic twist by squarefree d. When `from_short`
/// is given it receives the transform from the twisted short model
/// y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3 to the result.
EllipticCurveQ quadratic_twist(const EllipticCurveQ& e, const BigInt& d, Transform* from_short = nullptr);

/// True iff P reduces to a nonsingular point of the special fibre at q.
bool in_identity_component(const EllipticCurveQ& e, const RationalPoint& pt, std::uint64_t q);

}  // namespace hb
