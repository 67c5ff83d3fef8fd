#include "hb/height.hpp"

#include <cmath>

#include "hb/errors.hpp"
#include "hb/periods.hpp"

namespace hb {

namespace {

/// v_q of a rational; nullopt for zero.
std::optional<BigRational> rational_valuation(const BigRational& v, std::uint64_t q) {
  if (v == 0) return std::nullopt;
  return BigRational(ord(BigInt(v.get_num()), q) - ord(BigInt(v.get_den()), q));
}

}  // namespace

Real archimedean_local_height(const EllipticCurveQ& e, const RationalPoint& pt, int digits) {
  if (pt.infinity) return Real(digits);
  return archimedean_local_height_at(e.invariants(), Real(pt.x, digits + kGuardDigits), digits);
}

Real archimedean_local_height_at(const Invariants& inv, const Real& x_in, int digits) {
  const int work = digits + kGuardDigits;
  const std::vector<Real> roots = real_two_division_roots(inv, work);
  // shift so every real point has x' >= 1
  const Real r = roots.back() - 1;
  const Real b2(inv.b2, work), b4(inv.b4, work), b6(inv.b6, work), b8(inv.b8, work);
  const Real r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
  const Real B2 = b2 + r * 12;
  const Real B4 = b4 + r * b2 + r2 * 6;
  const Real B6 = b6 + r * b4 * 2 + r2 * b2 + r3 * 4;
  const Real B8 = b8 + r * b6 * 3 + r2 * b4 * 3 + r3 * b2 + r4 * 3;
  const Real x = x_in.with_digits(work) - r;
  if (x < 1 && !(abs(x - 1) < ten_pow_neg(work / 2, work)))
    throw InternalError("archimedean_local_height: point below the shifted real locus");

  const Real one(1L, work);
  Real t = one / x;
  Real sum(work);
  Real weight = one;
  const long terms = static_cast<long>(std::ceil((work + 2) * 2.302585092994046 / std::log(4.0))) + 5;
  for (long n = 0; n < terms; ++n) {
    const Real t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    const Real w = t * 4 + B2 * t2 + B4 * t3 * 2 + B6 * t4;
    const Real z = one - B4 * t2 - B6 * t3 * 2 - B8 * t4;
    if (z.is_zero()) throw ComputationError("archimedean_local_height: series hit a zero");
    sum += weight * log(abs(z));
    t = w / z;
    weight /= 4;
  }
  return (log(x) / 2 + sum / 8).with_digits(digits);
}

Real archimedean_local_height_analytic(const PeriodLattice& lat, const Complex& z, const BigInt& disc) {
  const int digits = std::min(z.digits(), lat.w1.digits());
  const Complex tau = lat.tau();
  const Complex zr = z / lat.w1;
  // shift so that 0 <= Im(z/w1) < Im(tau)
  const Real im_ratio = zr.im() / tau.im();
  const BigInt k = im_ratio.floor();
  const Complex zs = zr - tau * k.get_si();
  const Real t = zs.im() / tau.im();
  const Complex one(Real(1L, digits), Real(digits));
  const Complex u = exp_2pi_i(zs);
  const Complex q = exp_2pi_i(tau);
  const Real log_abs_q = -(pi(digits) * 2 * tau.im());
  const Real b2 = t * t - t + Real(1L, digits) / 6;
  Real lambda = -(b2 * log_abs_q / 2) - log((one - u).abs());
  const Complex uinv = one / u;
  const long terms = static_cast<long>(std::ceil((digits + kGuardDigits) * 2.302585092994046 /
                                                 (2 * M_PI * tau.im().to_double()))) + 3;
  Complex qn = one;
  for (long n = 1; n <= terms; ++n) {
    qn *= q;
    lambda -= log(((one - qn * u) * (one - qn * uinv)).abs());
  }
  return lambda + log(abs(Real(disc, digits))) / 12;
}

BigRational nonarchimedean_local_height(const EllipticCurveQ& e, const RationalPoint& pt, std::uint64_t q) {
  if (pt.infinity) throw ValidationError("nonarchimedean_local_height: point at infinity");
  const Coefficients& a = e.coefficients();
  const Invariants& inv = e.invariants();
  const BigRational &x = pt.x, &y = pt.y;
  const BigRational A1(a.a1), A2(a.a2), A3(a.a3), A4(a.a4);
  const auto vA = rational_valuation(3 * x * x + 2 * A2 * x + A4 - A1 * y, q);
  const auto vB = rational_valuation(2 * y + A1 * x + A3, q);
  const BigRational vx = rational_valuation(x, q).value_or(BigRational(0));
  const BigRational zero(0);
  if ((vA && *vA <= 0) || (vB && *vB <= 0)) return vx < 0 ? BigRational(-vx / 2) : zero;

  const int np = ord(inv.disc, q);
  if (np == 0) return zero;
  if (inv.c4 != 0 && ord(inv.c4, q) == 0) {
    const BigRational half_n(np, 2);
    const BigRational n = vB ? (*vB < half_n ? *vB : half_n) : half_n;
    return -(n * (np - n)) / np / 2;
  }
  const BigRational b2(inv.b2), b4(inv.b4), b6(inv.b6), b8(inv.b8);
  const auto vC = rational_valuation(3 * x * x * x * x + b2 * x * x * x + 3 * b4 * x * x + 3 * b6 * x + b8, q);
  if (!vB && !vC) throw InternalError("nonarchimedean_local_height: degenerate valuations");
  if (vC && (!vB || *vC < 3 * *vB)) return -*vC / 8;
  return -(2 * *vB) / 3 / 2;
}

Real canonical_height(const EllipticCurveQ& e, const RationalPoint& pt, int digits) {
  if (!e.contains(pt)) throw ValidationError("canonical_height: point not on curve " + e.to_string());
  if (pt.infinity) return Real(digits);
  const int work = digits + kGuardDigits;
  Real total = archimedean_local_height(e, pt, work);
  std::vector<std::uint64_t> primes;
  for (const auto& d : e.bad_primes()) primes.push_back(d.q);
  const BigInt den = pt.x.get_den();
  if (den > 1) {
    for (const auto& pp : factor(den)) {
      if (!pp.prime.fits_ulong_p()) throw ComputationError("canonical_height: denominator prime beyond 64 bits");
      const std::uint64_t q = pp.prime.get_ui();
      if (e.is_good(q)) primes.push_back(q);
    }
  }
  for (std::uint64_t q : primes) {
    const BigRational r = nonarchimedean_local_height(e, pt, q);
    if (r != 0) total += Real(r, work) * log(Real(static_cast<long>(q), work));
  }
  return (total * 2).with_digits(digits);
}

}  // namespace hb
