#pragma once

// The reduction of E over F_{l^2}: group structure, Frobenius eigenspaces on
// the p-primary part, and the map chi_l = p^-M (a_l - (l+1) Fr_l).

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hb/curve.hpp"

namespace hb {

/// F_{l^2} = F_l[t]/(t^2 - c1 t - c0); for odd l, c1 = 0 and c0 is the least
/// quadratic nonresidue.
class FieldFl2 {
 public:
  struct Elt {
    std::int64_t a = 0, b = 0;  // a + b t
    friend bool operator==(const Elt&, const Elt&) = default;
    friend auto operator<=>(const Elt&, const Elt&) = default;
  };

  explicit FieldFl2(std::uint64_t ell);

  [[nodiscard]] std::uint64_t characteristic() const { return static_cast<std::uint64_t>(l_); }
  [[nodiscard]] Elt from_int(std::int64_t v) const { return {mod(v, l_), 0}; }
  [[nodiscard]] Elt add(const Elt& x, const Elt& y) const;
  [[nodiscard]] Elt sub(const Elt& x, const Elt& y) const;
  [[nodiscard]] Elt neg(const Elt& x) const;
  [[nodiscard]] Elt mul(const Elt& x, const Elt& y) const;
  [[nodiscard]] Elt pow(Elt x, std::uint64_t e) const;
  /// x^l.
  [[nodiscard]] Elt frob(const Elt& x) const;
  /// Throws InternalError on zero.
  [[nodiscard]] Elt inv(const Elt& x) const;
  /// Some square root, or nullopt for a nonsquare.
  [[nodiscard]] std::optional<Elt> sqrt(const Elt& x) const;
  [[nodiscard]] std::int64_t nonresidue() const { return c0_; }

 private:
  std::int64_t l_;
  std::int64_t c0_, c1_;
  Elt frob_t_;
  Elt qnr_;  // a nonsquare of F_{l^2}
};

struct FinitePoint {
  bool infinity = true;
  FieldFl2::Elt x, y;
  friend bool operator==(const FinitePoint&, const FinitePoint&) = default;
  friend auto operator<=>(const FinitePoint&, const FinitePoint&) = default;
};

/// E reduced mod l as a curve over F_{l^2}.
class ReducedCurve {
 public:
  ReducedCurve(const EllipticCurveQ& e, std::uint64_t ell);

  [[nodiscard]] const FieldFl2& field() const { return f_; }
  [[nodiscard]] bool contains(const FinitePoint& pt) const;
  [[nodiscard]] FinitePoint neg(const FinitePoint& pt) const;
  [[nodiscard]] FinitePoint add(const FinitePoint& p, const FinitePoint& q) const;
  [[nodiscard]] FinitePoint mul(const FinitePoint& pt, const BigInt& k) const;
  [[nodiscard]] FinitePoint frob(const FinitePoint& pt) const;
  /// Every point over F_{l^2}, sorted; infinity first.
  [[nodiscard]] std::vector<FinitePoint> enumerate() const;
  [[nodiscard]] FinitePoint random_point(std::mt19937_64& rng) const;
  /// Order of pt given a multiple n of it.
  [[nodiscard]] BigInt order(const FinitePoint& pt, const BigInt& n) const;

 private:
  [[nodiscard]] std::vector<FinitePoint> points_over(const FieldFl2::Elt& x) const;
  FieldFl2 f_;
  FieldFl2::Elt a1_, a2_, a3_, a4_, a6_;
};

/// Largest l for which groups are enumerated exhaustively.
inline constexpr std::uint64_t kExhaustiveEllBound = 200;

struct FiniteCurveGroup {
  std::uint64_t ell = 0;
  std::int64_t a_ell = 0;
  BigInt order;       // #E(F_{l^2})
  BigInt n1, n2;      // E(F_{l^2}) = Z/n1 x Z/n2, n1 | n2
  bool enumerated = false;
};

FiniteCurveGroup reduced_group(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t seed = 1);

struct EigenspaceSplit {
  std::uint64_t p = 0;
  BigInt plus_order, minus_order;         // observed
  BigInt expected_plus, expected_minus;   // p^ord(l+1-a), p^ord(l+1+a)
  bool plus_cyclic = false, minus_cyclic = false;
  bool trivial_intersection = false;
  bool generate_p_part = false;
  bool enumerated = false;
};

/// M(l) = ord_p gcd(a_l, l+1); throws ValidationError unless p | a_l, p | l+1.
int kolyvagin_exponent(std::int64_t a_ell, std::uint64_t ell, std::uint64_t p);

EigenspaceSplit frobenius_split(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t p,
                                std::uint64_t seed = 1);

/// The operator chi_l on E~(F_{l^2}) and its verification.
class ChiEll {
 public:
  ChiEll(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t p);

  [[nodiscard]] const ReducedCurve& curve() const { return curve_; }
  [[nodiscard]] int M() const { return M_; }
  [[nodiscard]] std::int64_t a_ell() const { return a_; }
  [[nodiscard]] const BigInt& group_order() const { return n_; }
  /// Idempotent projection onto the p-primary part.
  [[nodiscard]] FinitePoint project(const FinitePoint& pt) const;
  /// chi_l(P); asserts p^M chi(P) = (a_l - (l+1) Fr) pi(P).
  [[nodiscard]] FinitePoint apply(const FinitePoint& pt) const;

 private:
  ReducedCurve curve_;
  std::uint64_t ell_, p_;
  std::int64_t a_;
  int M_;
  BigInt n_, pk_, proj_, a_div_, l1_div_;
};

struct ChiVerification {
  std::uint64_t ell = 0, p = 0;
  std::int64_t a_ell = 0;
  int M = 0;
  EigenspaceSplit split;
  bool exhaustive = false;
  std::uint64_t points_checked = 0;
  bool kernel_matches = false;       // ker chi = p^M E
  bool image_is_full_torsion = false;
  bool homomorphism = false;
  bool commutes_with_frobenius = false;
  [[nodiscard]] bool passed() const;
};

/// Exhaustive for l <= kExhaustiveEllBound, seeded sampling otherwise.
ChiVerification verify_chi_ell(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t p, std::uint64_t seed = 1,
                               std::size_t samples = 200);

}  // namespace hb
