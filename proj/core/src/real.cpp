#include "hb/real.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hb/errors.hpp"

namespace hb {

namespace {
constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

long min_prec(const Real& a, const Real& b) { return std::min(a.bits(), b.bits()); }
}  // namespace

long digits_to_bits(int digits) {
  return static_cast<long>(std::ceil(std::max(digits, 1) * 3.3219280948873623)) + 8;
}

int bits_to_digits(long bits) {
  return std::max(1, static_cast<int>(std::floor(static_cast<double>(bits - 8) / 3.3219280948873623)));
}

Real::Real(int digits) {
  mpfr_init2(v_, digits_to_bits(digits));
  mpfr_set_zero(v_, 1);
}

Real::Real(long v, int digits) {
  mpfr_init2(v_, digits_to_bits(digits));
  mpfr_set_si(v_, v, kRnd);
}

Real::Real(double v, int digits) {
  mpfr_init2(v_, digits_to_bits(digits));
  mpfr_set_d(v_, v, kRnd);
}

Real::Real(const BigInt& v, int digits) {
  mpfr_init2(v_, digits_to_bits(digits));
  mpfr_set_z(v_, v.get_mpz_t(), kRnd);
}

Real::Real(const BigRational& v, int digits) {
  mpfr_init2(v_, digits_to_bits(digits));
  mpfr_set_q(v_, v.get_mpq_t(), kRnd);
}

Real::Real(const std::string& s, int digits) {
  mpfr_init2(v_, digits_to_bits(digits));
  if (mpfr_set_str(v_, s.c_str(), 10, kRnd) != 0) {
    mpfr_clear(v_);
    throw ValidationError("not a decimal number: '" + s + "'");
  }
}

Real::Real(const Real& o) {
  mpfr_init2(v_, o.bits());
  mpfr_set(v_, o.v_, kRnd);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, o.bits());
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.bits());
    mpfr_set(v_, o.v_, kRnd);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::with_digits(int digits) const {
  Real r(digits);
  mpfr_set(r.v_, v_, kRnd);
  return r;
}

double Real::to_double() const { return mpfr_get_d(v_, kRnd); }

long Real::exponent2() const {
  if (is_zero()) return MPFR_EMIN_DEFAULT;
  return mpfr_get_exp(v_);
}

std::string Real::to_string(int digits) const {
  if (digits <= 0) digits = this->digits();
  if (is_zero()) return "0";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  int n = mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  if (n < 0 || static_cast<std::size_t>(n) >= buf.size()) {
    buf.resize(static_cast<std::size_t>(std::max(n, 0)) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  }
  return buf.data();
}

BigInt Real::round() const {
  if (!mpfr_number_p(v_)) throw ComputationError("round of non-finite value");
  mpfr_t t;
  mpfr_init2(t, std::max(bits(), 64L));
  mpfr_round(t, v_);
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), t, kRnd);
  mpfr_clear(t);
  return z;
}

BigInt Real::floor() const {
  if (!mpfr_number_p(v_)) throw ComputationError("floor of non-finite value");
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

Real& Real::operator+=(const Real& o) { return *this = *this + o; }
Real& Real::operator-=(const Real& o) { return *this = *this - o; }
Real& Real::operator*=(const Real& o) { return *this = *this * o; }
Real& Real::operator/=(const Real& o) { return *this = *this / o; }
Real& Real::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator/=(long o) {
  mpfr_div_si(v_, v_, o, kRnd);
  return *this;
}

#define HB_REAL_BINOP(op, fn)                             \
  Real operator op(const Real& a, const Real& b) {        \
    Real r(bits_to_digits(min_prec(a, b)));               \
    mpfr_set_prec(r.v_, min_prec(a, b));                  \
    fn(r.v_, a.v_, b.v_, kRnd);                           \
    return r;                                             \
  }
HB_REAL_BINOP(+, mpfr_add)
HB_REAL_BINOP(-, mpfr_sub)
HB_REAL_BINOP(*, mpfr_mul)
HB_REAL_BINOP(/, mpfr_div)
#undef HB_REAL_BINOP

Real operator*(const Real& a, long b) {
  Real r(a);
  mpfr_mul_si(r.v_, a.v_, b, kRnd);
  return r;
}

Real operator/(const Real& a, long b) {
  Real r(a);
  mpfr_div_si(r.v_, a.v_, b, kRnd);
  return r;
}

Real operator+(const Real& a, long b) {
  Real r(a);
  mpfr_add_si(r.v_, a.v_, b, kRnd);
  return r;
}

Real operator-(const Real& a, long b) {
  Real r(a);
  mpfr_sub_si(r.v_, a.v_, b, kRnd);
  return r;
}

Real operator-(const Real& a) {
  Real r(a);
  mpfr_neg(r.v_, a.v_, kRnd);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_) != 0) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

namespace {
template <typename F>
Real unary(const Real& x, F fn) {
  Real r(x);
  fn(r.get(), x.get(), kRnd);
  return r;
}
}  // namespace

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) {
  if (x.sign() < 0) throw ComputationError("sqrt of negative real");
  return unary(x, mpfr_sqrt);
}
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real log(const Real& x) {
  if (x.sign() <= 0) throw ComputationError("log of nonpositive real");
  return unary(x, mpfr_log);
}
Real sin(const Real& x) { return unary(x, mpfr_sin); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }

Real atan2(const Real& y, const Real& x) {
  Real r(bits_to_digits(std::min(x.bits(), y.bits())));
  mpfr_set_prec(r.get(), std::min(x.bits(), y.bits()));
  mpfr_atan2(r.get(), y.get(), x.get(), kRnd);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(x);
  mpfr_pow_si(r.get(), x.get(), n, kRnd);
  return r;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pi(int digits) {
  Real r(digits);
  mpfr_const_pi(r.get(), kRnd);
  return r;
}

Real ten_pow_neg(int n, int digits) {
  Real r(10L, digits);
  mpfr_pow_si(r.get(), r.get(), -static_cast<long>(n), kRnd);
  return r;
}

Real agm(const Real& a0, const Real& b0, int digits) {
  if (a0.sign() <= 0 || b0.sign() <= 0) throw ValidationError("agm requires positive arguments");
  const int work = digits + kGuardDigits;
  Real a = a0.with_digits(work);
  Real b = b0.with_digits(work);
  const Real tol = ten_pow_neg(work, work);
  for (int iter = 0; iter < 10000; ++iter) {
    if (abs(a - b) <= tol * abs(a)) return a.with_digits(digits);
    Real next = (a + b) / 2;
    b = sqrt(a * b);
    a = std::move(next);
  }
  throw ComputationError("agm did not converge");
}

std::optional<BigRational> rational_reconstruction(const Real& x, const BigInt& max_den, const Real& tol) {
  BigInt h_prev = 1, h = x.floor();
  BigInt k_prev = 0, k = 1;
  Real frac = x - Real(h, x.digits());
  for (int iter = 0; iter < 10000; ++iter) {
    const BigRational cand = make_rational(h, k);
    if (abs(x - Real(cand, x.digits())) < tol) return cand;
    if (frac.is_zero() || abs(frac) < ten_pow_neg(x.digits(), x.digits())) return std::nullopt;
    const Real inv = Real(1L, x.digits()) / frac;
    const BigInt a = inv.floor();
    frac = inv - Real(a, x.digits());
    const BigInt h_next = a * h + h_prev, k_next = a * k + k_prev;
    if (k_next > max_den) return std::nullopt;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

int Complex::digits() const { return std::min(re_.digits(), im_.digits()); }

Real Complex::abs() const {
  Real r(re_);
  mpfr_hypot(r.get(), re_.get(), im_.get(), kRnd);
  return r;
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real re = re_ * o.re_ - im_ * o.im_;
  im_ = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  const Real d = o.norm();
  if (d.is_zero()) throw ComputationError("complex division by zero");
  Real re = (re_ * o.re_ + im_ * o.im_) / d;
  im_ = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  return *this;
}

Complex exp_2pi_i(const Complex& z) {
  const Real two_pi = pi(z.digits()) * 2;
  const Real mod = exp(-(two_pi * z.im()));
  const Real ang = two_pi * z.re();
  return {mod * cos(ang), mod * sin(ang)};
}

Complex exp(const Complex& z) {
  const Real mod = exp(z.re());
  return {mod * cos(z.im()), mod * sin(z.im())};
}

Complex sqrt(const Complex& z) {
  const Real r = z.abs();
  if (r.is_zero()) return Complex(z.digits());
  Real hr = (r + z.re()) / 2;
  Real hi = (r - z.re()) / 2;
  Real re = hr.sign() > 0 ? sqrt(hr) : Real(z.digits());
  Real im = hi.sign() > 0 ? sqrt(hi) : Real(z.digits());
  if (z.im().sign() < 0) im = -im;
  return {std::move(re), std::move(im)};
}

}  // namespace hb
