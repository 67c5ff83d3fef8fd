#include "hb/periods.hpp"

#include <cmath>

#include "hb/errors.hpp"

namespace hb {

namespace {

std::vector<long double> initial_roots(const Invariants& inv) {
  // 4x^3 + b2 x^2 + 2 b4 x + b6 with x = t - b2/12: t^3 + P t + Q = 0
  const long double b2 = inv.b2.get_d(), b4 = inv.b4.get_d(), b6 = inv.b6.get_d();
  const long double a = b2 / 4, b = b4 / 2, c = b6 / 4;
  const long double P = b - a * a / 3;
  const long double Q = 2 * a * a * a / 27 - a * b / 3 + c;
  const long double shift = -a / 3;
  std::vector<long double> roots;
  if (inv.disc > 0) {
    const long double m = 2 * std::sqrt(-P / 3);
    long double arg = 3 * Q / (P * m);
    arg = std::fmax(-1.0L, std::fmin(1.0L, arg));
    const long double theta = std::acos(arg) / 3;
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2 * M_PIl * k / 3) + shift);
  } else {
    const long double d = std::sqrt(Q * Q / 4 + P * P * P / 27);
    roots.push_back(std::cbrt(-Q / 2 + d) + std::cbrt(-Q / 2 - d) + shift);
  }
  return roots;
}

}  // namespace

std::vector<Real> real_two_division_roots(const Invariants& inv, int digits) {
  const int work = digits + kGuardDigits;
  const Real b2(inv.b2, work), b4(inv.b4, work), b6(inv.b6, work);
  const Real tol = ten_pow_neg(work, work);
  std::vector<Real> out;
  for (long double guess : initial_roots(inv)) {
    Real x(static_cast<double>(guess), work);
    for (int iter = 0;; ++iter) {
      if (iter > 200) throw ComputationError("2-division root refinement did not converge");
      const Real f = ((x * 4 + b2) * x + b4 * 2) * x + b6;
      const Real df = (x * 12 + b2 * 2) * x + b4 * 2;
      if (df.is_zero()) throw ComputationError("2-division polynomial has a repeated root");
      const Real step = f / df;
      x -= step;
      if (abs(step) <= tol * max(Real(1L, work), abs(x))) break;
    }
    out.push_back(x.with_digits(digits));
  }
  std::sort(out.begin(), out.end(), [](const Real& a, const Real& b) { return b < a; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] < out[i - 1])) throw ComputationError("2-division roots failed to separate");
  return out;
}

Real PeriodLattice::real_period() const { return two_components ? omega1.re() * 2 : omega1.re(); }

PeriodLattice period_lattice(const EllipticCurveQ& e, int digits) {
  const int work = digits + kGuardDigits;
  const Invariants& inv = e.invariants();
  const std::vector<Real> roots = real_two_division_roots(inv, work);
  const Real pi_w = pi(work);
  const Real zero(work);
  PeriodLattice lat;
  if (inv.disc > 0) {
    const Real &e1 = roots[0], &e2 = roots[1], &e3 = roots[2];
    const Real r13 = sqrt(e1 - e3);
    lat.omega1 = Complex(pi_w / agm(r13, sqrt(e1 - e2), work), zero);
    lat.omega2 = Complex(zero, pi_w / agm(r13, sqrt(e2 - e3), work));
    lat.two_components = true;
  } else {
    const Real& e1 = roots[0];
    const Real b2(inv.b2, work), b4(inv.b4, work);
    const Real A = e1 * 3 + b2 / 4;
    const Real B = sqrt(e1 * e1 * 3 + b2 * e1 / 2 + b4 / 2);
    const Real two_sqrt_b = sqrt(B) * 2;
    const Real w1 = pi_w * 2 / agm(two_sqrt_b, sqrt(B * 2 + A), work);
    lat.omega1 = Complex(w1, zero);
    lat.omega2 = Complex(-(w1 / 2), pi_w / agm(two_sqrt_b, sqrt(B * 2 - A), work));
  }
  Complex w1 = lat.omega1, w2 = lat.omega2;
  for (int iter = 0; iter < 200; ++iter) {
    Complex tau = w2 / w1;
    const long n = tau.re().round().get_si();
    if (n != 0) w2 -= w1 * n;
    tau = w2 / w1;
    if (tau.norm() < Real(1L, work) - ten_pow_neg(work / 2, work)) {
      Complex nw1 = w2;
      w2 = -w1;
      w1 = nw1;
    } else {
      break;
    }
  }
  lat.w1 = w1;
  lat.w2 = w2;
  lat.digits = work;
  return lat;
}

std::pair<Real, Real> lattice_coordinates(const PeriodLattice& lat, const Complex& z) {
  const Real b = z.im() / lat.omega2.im();
  const Real a = (z.re() - b * lat.omega2.re()) / lat.omega1.re();
  return {a, b};
}

Complex reduce_mod_lattice(const PeriodLattice& lat, const Complex& z) {
  auto [a, b] = lattice_coordinates(lat, z);
  const long na = a.round().get_si(), nb = b.round().get_si();
  return z - lat.omega1 * na - lat.omega2 * nb;
}

Real distance_to_lattice(const PeriodLattice& lat, const Complex& z) {
  const Complex r = reduce_mod_lattice(lat, z);
  Real best = r.abs();
  for (long i = -1; i <= 1; ++i)
    for (long j = -1; j <= 1; ++j) best = min(best, (r - lat.omega1 * i - lat.omega2 * j).abs());
  return best;
}

WeierstrassValue weierstrass(const PeriodLattice& lat, const Complex& z) {
  const int digits = std::min(z.digits(), lat.w1.digits());
  const Complex tau = lat.tau();
  // reduce z against (w1, w2)
  const Complex zr = z / lat.w1;
  const Real b = zr.im() / tau.im();
  const Real a = zr.re() - b * tau.re();
  const Complex t = zr - Complex(Real(a.round(), digits), Real(digits)) - tau * b.round().get_si();
  const Complex one(Real(1L, digits), Real(digits));
  const Complex u = exp_2pi_i(t);
  const Complex q = exp_2pi_i(tau);
  const Complex uinv = one / u;
  if ((one - u).abs() < ten_pow_neg(digits, digits)) throw ComputationError("weierstrass: z is a lattice point");

  const double im_tau = tau.im().to_double();
  const long terms = static_cast<long>(std::ceil((digits + kGuardDigits) * 2.302585092994046 / (M_PI * im_tau))) + 2;

  Complex sp = u / ((one - u) * (one - u));
  Complex sd = u * (one + u) / ((one - u) * (one - u) * (one - u));
  Complex qn = one;
  for (long n = 1; n <= terms; ++n) {
    qn *= q;
    const Complex w = qn * u, v = qn * uinv;
    const Complex omw = one - w, omv = one - v, omq = one - qn;
    sp += w / (omw * omw) + v / (omv * omv) - qn * 2 / (omq * omq);
    sd += w * (one + w) / (omw * omw * omw) - v * (one + v) / (omv * omv * omv);
  }
  const Real two_pi = pi(digits) * 2;
  const Complex c = Complex(Real(digits), two_pi) / lat.w1;  // 2 pi i / w1
  const Complex c2 = c * c;
  Complex twelfth(Real(1L, digits) / 12, Real(digits));
  return {c2 * (twelfth + sp), c2 * c * sd};
}

std::pair<Complex, Complex> point_from_log(const EllipticCurveQ& e, const PeriodLattice& lat, const Complex& z) {
  const WeierstrassValue w = weierstrass(lat, z);
  const int digits = w.p.digits();
  const Real shift = Real(e.invariants().b2, digits) / 12;
  return {w.p - Complex(shift, Real(digits)), w.dp};
}

std::pair<Complex, Complex> lattice_invariants(const PeriodLattice& lat) {
  const int digits = lat.w1.digits();
  const Complex q = exp_2pi_i(lat.tau());
  const Complex one(Real(1L, digits), Real(digits));
  Complex e4 = one, e6 = one, qn = one;
  const Real eps = ten_pow_neg(digits + kGuardDigits, digits);
  for (long n = 1; n < 100000; ++n) {
    qn *= q;
    long s3 = 0, s5 = 0;
    for (long d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      s3 += d * d * d;
      s5 += d * d * d * d * d;
    }
    e4 += qn * (240 * s3);
    e6 -= qn * (504 * s5);
    if (qn.abs() * Real(static_cast<double>(n), digits) * Real(static_cast<double>(s5), digits) < eps) break;
  }
  const Complex c = Complex(pi(digits) * 2, Real(digits)) / lat.w1;
  const Complex c2 = c * c, c4 = c2 * c2;
  return {c4 * e4, c4 * c2 * e6};
}

}  // namespace hb
