#include "hb/heegner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include "hb/errors.hpp"
#include "hb/height.hpp"

namespace hb {

namespace {

constexpr int kMaxTorsionMultiple = 24;
constexpr long kFormSearchRadius = 60;
constexpr long kGammaSearchRadius = 12;

BigInt to_big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

// x s - q y = 1 for coprime (x, y).
std::pair<BigInt, BigInt> complete_column(const BigInt& x, const BigInt& y) {
  BigInt g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  if (g < 0) {
    s = -s;
    t = -t;
  }
  // x s + y t = 1, so q = -t.
  return {-t, s};
}

// Equivalent form whose first coefficient is prime to N.
QuadForm with_first_coefficient_prime_to(const QuadForm& f, const BigInt& N) {
  std::optional<std::tuple<BigInt, long, long>> best;
  for (long x = -kFormSearchRadius; x <= kFormSearchRadius; ++x) {
    for (long y = 0; y <= kFormSearchRadius; ++y) {
      if (y == 0 && x != 1) continue;
      if (std::gcd(std::abs(x), y) != 1) continue;
      BigInt v = f.evaluate(BigInt(x), BigInt(y));
      BigInt g;
      mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), N.get_mpz_t());
      if (g != 1) continue;
      if (!best || v < std::get<0>(*best)) best = std::make_tuple(v, x, y);
    }
  }
  if (!best) throw ComputationError("no representative prime to N for " + f.to_string());
  const BigInt x(std::get<1>(*best)), y(std::get<2>(*best));
  auto [q, s] = complete_column(x, y);
  return act(f, x, q, y, s);
}

// Gamma_0(N)-equivalent Heegner form with the least first coefficient.
// gamma = [[a, b], [c, d]] with N | c sends the form to one with first
// coefficient f(d, -c); over c = N c' that is the form [A, -B N, C N^2] in
// (d, c'), minimised here after Gauss reduction.
QuadForm maximize_im_tau(const QuadForm& f, const BigInt& N) {
  QuadForm g{f.a, -f.b * N, f.c * N * N};
  BigInt m00 = 1, m01 = 0, m10 = 0, m11 = 1;  // (d, c') = M (x, y)
  while (true) {
    BigInt two_a = 2 * g.a;
    BigInt k;
    mpz_fdiv_q(k.get_mpz_t(), BigInt(g.a - g.b).get_mpz_t(), two_a.get_mpz_t());
    if (k != 0) {
      g = QuadForm{g.a, g.b + two_a * k, g.a * k * k + g.b * k + g.c};
      m01 += m00 * k;
      m11 += m10 * k;
    }
    if (g.a <= g.c) break;
    g = QuadForm{g.c, -g.b, g.a};
    BigInt t0 = m00, t1 = m10;
    m00 = m01;
    m10 = m11;
    m01 = -t0;
    m11 = -t1;
  }
  BigInt best_v = f.a, best_d = 1, best_c = 0;
  for (long x = -kGammaSearchRadius; x <= kGammaSearchRadius; ++x) {
    for (long y = 0; y <= kGammaSearchRadius; ++y) {
      if ((y == 0 && x != 1) || std::gcd(std::abs(x), y) != 1) continue;
      const BigInt v = g.evaluate(BigInt(x), BigInt(y));
      if (v >= best_v) continue;
      const BigInt d = m00 * x + m01 * y, c = N * (m10 * x + m11 * y);
      BigInt h;
      mpz_gcd(h.get_mpz_t(), d.get_mpz_t(), c.get_mpz_t());
      if (h != 1) continue;
      best_v = v;
      best_d = d;
      best_c = c;
    }
  }
  if (best_c == 0) return f;
  auto [b, a] = complete_column(best_d, best_c);
  return act(f, best_d, -b, -best_c, a);
}

// Smallest prime factor table for 1..n.
std::vector<std::uint32_t> smallest_prime_factors(std::size_t n) {
  std::vector<std::uint32_t> spf(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf[i] != 0) continue;
    for (std::size_t j = i; j <= n; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }
  return spf;
}

bool is_lattice_torsion(const PeriodLattice& lat, const Complex& z, const Real& tol) {
  for (int k = 1; k <= kMaxTorsionMultiple; ++k)
    if (distance_to_lattice(lat, z * static_cast<long>(k)) < tol) return true;
  return false;
}

BigRational two_division_rhs(const Invariants& inv, const BigRational& x) {
  return ((4 * x + BigRational(inv.b2)) * x + 2 * BigRational(inv.b4)) * x + BigRational(inv.b6);
}

Real point_residual(const EllipticCurveQ& e, const RationalPoint& pt, const Complex& x, const Complex& w) {
  const int d = x.digits();
  const Coefficients& a = e.coefficients();
  BigRational wx = 2 * pt.y + BigRational(a.a1) * pt.x + BigRational(a.a3);
  Complex dx = x - Complex(Real(pt.x, d));
  Complex dw = w - Complex(Real(wx, d));
  return max(dx.abs(), dw.abs());
}

}  // namespace

int HeegnerSetup::unit_index() const {
  if (D == 3) return 3;
  if (D == 4) return 2;
  return 1;
}

HeegnerSetup make_heegner_setup(const EllipticCurveQ& e, std::int64_t D, bool allow_extra_units) {
  if (D <= 0) throw ValidationError("D must be positive");
  if (!is_fundamental_discriminant(-D)) throw ValidationError("-" + std::to_string(D) + " is not a fundamental discriminant");
  if ((D == 3 || D == 4) && !allow_extra_units)
    throw ValidationError("D = " + std::to_string(D) + " has extra units; pass allow_extra_units");
  if (!e.conductor().fits_ulong_p()) throw ValidationError("conductor too large");
  const std::uint64_t N = e.conductor().get_ui();
  for (const LocalData& ld : e.bad_primes())
    if (kronecker_symbol(-D, static_cast<std::int64_t>(ld.q)) != 1)
      throw ValidationError(std::to_string(ld.q) + " is not split in Q(sqrt(-" + std::to_string(D) + "))");

  HeegnerSetup s{e, D, 0, N, reduced_forms(-D), D == 3 || D == 4};
  const auto four_n = static_cast<std::int64_t>(4 * N);
  bool found = false;
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(2 * N); ++b) {
    if (mod(mulmod(b, b, four_n) + D, four_n) == 0) {
      s.beta = b;
      found = true;
      break;
    }
  }
  if (!found) throw InternalError("no square root of -D mod 4N");
  return s;
}

Complex HeegnerForm::tau(int digits) const {
  const BigInt disc = form.discriminant();
  Real two_a(BigInt(2 * form.a), digits);
  Real re = Real(BigInt(-form.b), digits) / two_a;
  Real im = sqrt(Real(BigInt(-disc), digits)) / two_a;
  return {re, im};
}

double HeegnerForm::im_tau() const {
  return std::sqrt(-form.discriminant().get_d()) / (2.0 * form.a.get_d());
}

std::vector<HeegnerForm> heegner_forms(const HeegnerSetup& setup, std::int64_t c) {
  if (c < 1) throw ValidationError("conductor must be positive");
  const auto N = static_cast<std::int64_t>(setup.N);
  if (std::gcd(c, N * setup.D) != 1) throw ValidationError("conductor must be prime to N D");
  const std::int64_t disc = -setup.D * c * c;
  const BigInt bigN = to_big(N), two_n = 2 * bigN, disc_big = to_big(disc);
  const BigInt target = to_big(setup.beta) * to_big(c);

  std::vector<HeegnerForm> out;
  for (const QuadForm& f : reduced_forms(disc)) {
    QuadForm g = with_first_coefficient_prime_to(f, bigN);
    BigInt half = (target - g.b) / 2;
    BigInt a_mod = g.a % bigN;
    if (a_mod < 0) a_mod += bigN;
    BigInt inv;
    if (N == 1) {
      inv = 0;
    } else if (mpz_invert(inv.get_mpz_t(), a_mod.get_mpz_t(), bigN.get_mpz_t()) == 0) {
      throw InternalError("first coefficient not invertible mod N");
    }
    BigInt k = (half * inv) % bigN;
    BigInt B = g.b + 2 * g.a * k;
    BigInt A = g.a * bigN;
    BigInt num = B * B - disc_big;
    if (num % (4 * A) != 0 || (B - target) % two_n != 0) throw InternalError("Heegner form construction failed");
    QuadForm h = maximize_im_tau(QuadForm{A, B, num / (4 * A)}, bigN);
    if (h.a % bigN != 0 || (h.b - target) % two_n != 0 || h.discriminant() != disc_big || h.a <= 0)
      throw InternalError("Heegner form improvement left the Heegner set");
    out.push_back({std::move(h), c});
  }
  return out;
}

std::vector<std::int64_t> fourier_coefficients(const EllipticCurveQ& e, std::size_t n) {
  std::vector<std::int64_t> an(n + 1, 0);
  if (n == 0) return an;
  an[1] = 1;
  const auto spf = smallest_prime_factors(n);
  for (std::size_t p = 2; p <= n; ++p) {
    if (spf[p] != p) continue;
    std::int64_t ap;
    bool good = e.is_good(p);
    if (good) {
      ap = trace_of_frobenius(e, p);
    } else {
      switch (e.local_data(p).reduction) {
        case Reduction::split_multiplicative: ap = 1; break;
        case Reduction::nonsplit_multiplicative: ap = -1; break;
        default: ap = 0; break;
      }
    }
    // a at successive powers of p
    std::int64_t prev = 1, cur = ap;
    const auto ps = static_cast<std::int64_t>(p);
    for (std::size_t q = p; q <= n; q *= p) {
      an[q] = cur;
      std::int64_t next = good ? ap * cur - ps * prev : ap * cur;
      prev = cur;
      cur = next;
      if (q > n / p) break;
    }
  }
  for (std::size_t m = 2; m <= n; ++m) {
    std::size_t p = spf[m], q = 1, r = m;
    while (r % p == 0) {
      r /= p;
      q *= p;
    }
    if (r != 1) an[m] = an[q] * an[r];
  }
  return an;
}

long required_terms(double im_tau, int digits) {
  if (!(im_tau > 0)) throw ValidationError("tau must lie in the upper half plane");
  const double log_r = -2.0 * M_PI * im_tau;  // log |q|
  const double log_target = -digits * std::log(10.0);
  const double log_one_minus = std::log(-std::expm1(log_r));
  // sum_{m > n} 2 m |q|^m <= 2 (n + 1) |q|^(n+1) / (1 - |q|)^2
  for (long n = 1;; ++n) {
    double bound = std::log(2.0 * (n + 1)) + (n + 1) * log_r - 2 * log_one_minus;
    if (bound < log_target) return n;
  }
}

Complex modular_param(const std::vector<std::int64_t>& an, const Complex& tau, int digits, long n_terms) {
  const long need = required_terms(tau.im().to_double(), digits);
  if (n_terms < need)
    throw ValidationError("n_terms = " + std::to_string(n_terms) + " below the " + std::to_string(need) +
                          " needed for " + std::to_string(digits) + " digits");
  if (static_cast<long>(an.size()) <= n_terms) throw ValidationError("not enough Fourier coefficients");
  const int work = std::max(digits, tau.digits());
  const Complex q = exp_2pi_i(tau);
  Complex qn(Real(1L, work), Real(0L, work));
  Complex sum(Real(0L, work), Real(0L, work));
  for (long n = 1; n <= n_terms; ++n) {
    qn *= q;
    if (an[n] != 0) sum += qn * (Real(static_cast<long>(an[n]), work) / n);
  }
  return sum;
}

Complex modular_param(const EllipticCurveQ& e, const Complex& tau, int digits, long n_terms) {
  return modular_param(fourier_coefficients(e, static_cast<std::size_t>(n_terms)), tau, digits, n_terms);
}

Complex sum_over_forms(const std::vector<std::int64_t>& an, const std::vector<HeegnerForm>& forms, int digits,
                       unsigned workers) {
  auto eval = [&](std::size_t i) {
    const HeegnerForm& f = forms[i];
    return modular_param(an, f.tau(digits), digits, required_terms(f.im_tau(), digits));
  };
  std::vector<Complex> parts(forms.size(), Complex(digits));
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(forms.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < forms.size(); ++i) parts[i] = eval(i);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < forms.size(); i += workers) parts[i] = eval(i);
      }));
    for (auto& j : jobs) j.get();
  }
  Complex sum(Real(0L, digits), Real(0L, digits));
  for (const Complex& p : parts) sum += p;
  return sum;
}

std::optional<RationalPoint> recognize_point(const EllipticCurveQ& e, const Complex& x, const Complex& w, int digits) {
  const int work = x.digits();
  const Real one(1L, work);
  const Real scale_x = max(one, x.abs()), scale_w = max(one, w.abs());
  const Real tol = ten_pow_neg(std::max(digits - 5, 5), work);
  if (abs(x.im()) > tol * scale_x || abs(w.im()) > tol * scale_w) return std::nullopt;
  BigInt max_den;
  mpz_ui_pow_ui(max_den.get_mpz_t(), 10, static_cast<unsigned long>(std::max(digits / 3, 2)));
  auto xr = rational_reconstruction(x.re(), max_den, tol * scale_x);
  if (!xr || !exact_sqrt(BigInt(xr->get_den()))) return std::nullopt;
  auto root = exact_sqrt(two_division_rhs(e.invariants(), *xr));
  if (!root) return std::nullopt;
  BigRational wr = *root;
  if (w.re().sign() < 0) wr = -wr;
  const Coefficients& a = e.coefficients();
  BigRational y = (wr - BigRational(a.a1) * *xr - BigRational(a.a3)) / 2;
  RationalPoint pt = RationalPoint::affine(*xr, y);
  if (!e.contains(pt)) return std::nullopt;
  if (abs(w.re() - Real(wr, work)) > tol * scale_w) return std::nullopt;
  return pt;
}

HeegnerPointResult heegner_point(const HeegnerSetup& setup, int digits, unsigned workers) {
  if (digits < kMinDigits) throw ValidationError("precision below " + std::to_string(kMinDigits) + " digits");
  const int work = digits + kGuardDigits;
  const EllipticCurveQ& E = setup.curve;

  HeegnerPointResult r;
  r.D = setup.D;
  r.beta = setup.beta;
  r.digits = digits;
  r.lattice = period_lattice(E, work);

  const auto forms = heegner_forms(setup, 1);
  r.form_count = forms.size();
  for (const auto& f : forms) r.max_terms = std::max(r.max_terms, required_terms(f.im_tau(), work));
  const auto an = fourier_coefficients(E, static_cast<std::size_t>(r.max_terms));
  r.z = reduce_mod_lattice(r.lattice, sum_over_forms(an, forms, work, workers));

  const Real tol = ten_pow_neg(digits / 2, work);
  if (is_lattice_torsion(r.lattice, r.z, tol)) {
    r.failure = "Heegner point is torsion";
    return r;
  }
  const bool plus = is_lattice_torsion(r.lattice, r.z - r.z.conj(), tol);
  const bool minus = is_lattice_torsion(r.lattice, r.z + r.z.conj(), tol);
  if (plus == minus) {
    r.failure = "no eigen-sign for complex conjugation";
    return r;
  }
  r.sign = plus ? 1 : -1;
  r.z_trace = reduce_mod_lattice(r.lattice, plus ? r.z + r.z.conj() : r.z - r.z.conj());

  Complex zm = r.z_trace;
  if (r.sign == 1) {
    r.point_curve = E;
    r.point_lattice = r.lattice;
  } else {
    r.on_twist = true;
    r.twist_d = squarefree_part(BigInt(static_cast<long>(-setup.D)));
    Transform from_short;
    r.point_curve = quadratic_twist(E, r.twist_d, &from_short);
    r.point_lattice = period_lattice(*r.point_curve, work);
    // multiply by u / (6 sqrt(d)), sqrt(d) = i sqrt(|d|)
    Real scale = Real(from_short.u, work) / (6L * sqrt(Real(BigInt(abs(r.twist_d)), work)));
    zm = Complex(zm.im(), -zm.re()) * scale;
  }
  r.log_on_curve = reduce_mod_lattice(r.point_lattice, zm);
  if (distance_to_lattice(r.point_lattice, r.log_on_curve) < tol) {
    r.failure = "trace of the Heegner point is torsion";
    return r;
  }
  auto [x, w] = point_from_log(*r.point_curve, r.point_lattice, r.log_on_curve);
  auto pt = recognize_point(*r.point_curve, x, w, digits);
  if (!pt) {
    r.failure = "algebraic recognition failed";
    return r;
  }
  if (is_torsion(*r.point_curve, *pt)) {
    r.failure = "recognised point is torsion";
    return r;
  }
  r.point = *pt;
  r.recognized = true;
  r.residual = point_residual(*r.point_curve, *pt, x, w);
  r.height = canonical_height(*r.point_curve, *pt, digits);
  Real tate = archimedean_local_height(*r.point_curve, *pt, digits);
  Real analytic = archimedean_local_height_analytic(r.point_lattice, r.log_on_curve, r.point_curve->discriminant());
  r.analytic_height = r.height + 2L * (analytic.with_digits(digits) - tate);
  return r;
}

std::optional<std::pair<RationalPoint, Complex>> divide_by_p(const EllipticCurveQ& e, const PeriodLattice& lat,
                                                            const Complex& z, std::uint64_t p, int digits) {
  const int work = lat.digits;
  const Real tol = ten_pow_neg(digits / 2, work);
  std::optional<RationalPoint> P;
  if (distance_to_lattice(lat, z) >= tol) {
    auto [x, w] = point_from_log(e, lat, z);
    P = recognize_point(e, x, w, digits);
    if (!P) return std::nullopt;
  } else {
    P = RationalPoint::at_infinity();
  }
  const long pl = static_cast<long>(p);
  for (long i = 0; i < pl; ++i) {
    for (long j = 0; j < pl; ++j) {
      Complex cand = (z + lat.omega1 * i + lat.omega2 * j) / Real(pl, work);
      if (distance_to_lattice(lat, cand) < tol) continue;
      auto [x, w] = point_from_log(e, lat, cand);
      auto q = recognize_point(e, x, w, digits);
      if (q && e.multiply(*q, pl) == *P) return std::make_pair(*q, reduce_mod_lattice(lat, cand));
    }
  }
  return std::nullopt;
}

int p_division_depth(const EllipticCurveQ& e, const PeriodLattice& lat, const Complex& z, std::uint64_t p, int digits,
                     int max_depth) {
  int k = 0;
  Complex cur = z;
  while (k < max_depth) {
    auto q = divide_by_p(e, lat, cur, p, digits);
    if (!q) break;
    cur = q->second;
    ++k;
  }
  return k;
}

IndexResult heegner_index(const EllipticCurveQ& e, const RationalPoint& y, const RationalPoint& generator,
                          std::uint64_t p, int digits) {
  if (p < 3 || !is_prime(p)) throw ValidationError("p must be an odd prime");
  Real hy = canonical_height(e, y, digits), hg = canonical_height(e, generator, digits);
  if (hg < ten_pow_neg(digits / 2, digits)) throw ComputationError("generator has zero height");
  IndexResult r;
  r.ratio = hy / hg;
  r.n = sqrt(r.ratio).round();
  r.deviation = abs(r.ratio - Real(BigInt(r.n * r.n), digits));
  if (r.deviation > Real(1e-10, digits))
    throw ComputationError("height ratio " + r.ratio.to_string(20) + " is not an integer square");
  if (r.n == 0) throw ComputationError("Heegner point is torsion");
  r.m0 = ord(r.n, p);
  return r;
}

DistributionCheck verify_distribution(const HeegnerSetup& setup, std::uint64_t ell, int digits, unsigned workers) {
  if (!is_prime(ell)) throw ValidationError(std::to_string(ell) + " is not prime");
  const auto l = static_cast<std::int64_t>(ell);
  if (std::gcd(l, static_cast<std::int64_t>(setup.N) * setup.D) != 1)
    throw ValidationError(std::to_string(ell) + " divides N D");
  if (kronecker_symbol(-setup.D, l) != -1) throw ValidationError(std::to_string(ell) + " is not inert in K");
  const int work = digits + kGuardDigits;

  DistributionCheck c;
  c.ell = ell;
  const auto f_ell = heegner_forms(setup, l), f_one = heegner_forms(setup, 1);
  c.forms_level_ell = f_ell.size();
  c.forms_level_one = f_one.size();
  for (const auto* fs : {&f_ell, &f_one})
    for (const auto& f : *fs) c.max_terms = std::max(c.max_terms, required_terms(f.im_tau(), work));
  const auto an = fourier_coefficients(setup.curve, std::max<std::size_t>(c.max_terms, ell));
  c.a_ell = an[ell];
  c.sum_ell = sum_over_forms(an, f_ell, work, workers);
  c.sum_one = sum_over_forms(an, f_one, work, workers);
  Complex diff = c.sum_ell * static_cast<long>(setup.unit_index()) - c.sum_one * static_cast<long>(c.a_ell);
  c.residual = distance_to_lattice(period_lattice(setup.curve, work), diff);
  return c;
}

}  // namespace hb
