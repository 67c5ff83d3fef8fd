#pragma once

// Fixed-precision binary floating point over MPFR. Every value carries its own
// precision; binary operations round to the smaller of the two operand
// precisions, so mixing precisions never silently widens a result.

#include <mpfr.h>

#include <compare>
#include <optional>
#include <string>

#include "hb/numeric.hpp"

namespace hb {

/// Bits needed for `digits` decimal digits.
long digits_to_bits(int digits);
int bits_to_digits(long bits);

/// Minimum working precision accepted anywhere in the library.
inline constexpr int kMinDigits = 15;
/// Over-provisioning applied by analytic routines on top of a requested output
/// precision.
inline constexpr int kGuardDigits = 10;

class Real {
 public:
  explicit Real(int digits = kMinDigits);
  Real(long v, int digits);
  Real(int v, int digits) : Real(static_cast<long>(v), digits) {}
  Real(double v, int digits);
  Real(const BigInt& v, int digits);
  Real(const BigRational& v, int digits);
  /// Parses a decimal string.
  Real(const std::string& s, int digits);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  [[nodiscard]] int digits() const { return bits_to_digits(mpfr_get_prec(v_)); }
  [[nodiscard]] long bits() const { return mpfr_get_prec(v_); }
  /// Same value rounded to a new precision.
  [[nodiscard]] Real with_digits(int digits) const;

  [[nodiscard]] mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  [[nodiscard]] double to_double() const;
  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  [[nodiscard]] int sign() const { return mpfr_sgn(v_); }
  /// Exponent e with 2^(e-1) <= |x| < 2^e; very negative for 0.
  [[nodiscard]] long exponent2() const;

  /// Decimal rendering with `digits` significant digits (default: own precision).
  [[nodiscard]] std::string to_string(int digits = 0) const;
  /// Nearest integer.
  [[nodiscard]] BigInt round() const;
  [[nodiscard]] BigInt floor() const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long o);
  Real& operator/=(long o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator*(const Real& a, long b);
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator/(const Real& a, long b);
  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator-(const Real& a);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }

 private:
  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real pi(int digits);
/// 10^(-n) at the given precision.
Real ten_pow_neg(int n, int digits);

/// Arithmetic-geometric mean of two positive reals, iterated until the gap is
/// below 10^-(digits + guard). Throws ValidationError on nonpositive input.
Real agm(const Real& a, const Real& b, int digits);

/// First continued-fraction convergent h/k of x with |x - h/k| < tol and
/// k <= max_den; nullopt if none.
std::optional<BigRational> rational_reconstruction(const Real& x, const BigInt& max_den, const Real& tol);

/// Complex value with Real parts; precision is the smaller of the parts.
class Complex {
 public:
  explicit Complex(int digits = kMinDigits) : re_(digits), im_(digits) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit Complex(Real re) : re_(re), im_(0L, re.digits()) {}

  [[nodiscard]] const Real& re() const { return re_; }
  [[nodiscard]] const Real& im() const { return im_; }
  [[nodiscard]] int digits() const;

  [[nodiscard]] Complex conj() const { return {re_, -im_}; }
  [[nodiscard]] Real norm() const { return re_ * re_ + im_ * im_; }
  [[nodiscard]] Real abs() const;
  [[nodiscard]] Real arg() const { return atan2(im_, re_); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(const Complex& a, const Real& r) { return {a.re_ * r, a.im_ * r}; }
  friend Complex operator*(const Real& r, const Complex& a) { return a * r; }
  friend Complex operator/(const Complex& a, const Real& r) { return {a.re_ / r, a.im_ / r}; }
  friend Complex operator*(const Complex& a, long k) { return {a.re_ * k, a.im_ * k}; }
  friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }

 private:
  Real re_, im_;
};

/// e^{2 pi i z}.
Complex exp_2pi_i(const Complex& z);
Complex exp(const Complex& z);
/// Principal square root.
Complex sqrt(const Complex& z);

}  // namespace hb
