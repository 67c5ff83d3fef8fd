#include "hb/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hb/errors.hpp"
#include "hb/height.hpp"
#include "hb/tate.hpp"

namespace hb {

Invariants compute_invariants(const Coefficients& a) {
  Invariants v;
  v.b2 = a.a1 * a.a1 + 4 * a.a2;
  v.b4 = 2 * a.a4 + a.a1 * a.a3;
  v.b6 = a.a3 * a.a3 + 4 * a.a6;
  v.b8 = a.a1 * a.a1 * a.a6 + 4 * a.a2 * a.a6 - a.a1 * a.a3 * a.a4 + a.a2 * a.a3 * a.a3 - a.a4 * a.a4;
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
  v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
  return v;
}

Transform Transform::then(const Transform& n) const {
  Transform c;
  c.u = u * n.u;
  c.r = r + u * u * n.r;
  c.s = s + u * n.s;
  c.t = t + u * u * s * n.r + u * u * u * n.t;
  return c;
}

Transform Transform::inverse() const {
  Transform c;
  c.u = 1 / u;
  c.r = -r / (u * u);
  c.s = -s / u;
  c.t = (s * r - t) / (u * u * u);
  return c;
}

namespace {
BigInt require_integral(const BigRational& q) {
  if (q.get_den() != 1) throw InternalError("transform produced a non-integral coefficient " + to_string(q));
  return q.get_num();
}
}  // namespace

Coefficients apply(const Transform& tr, const Coefficients& c) {
  const BigRational a1 = c.a1, a2 = c.a2, a3 = c.a3, a4 = c.a4, a6 = c.a6;
  const BigRational &u = tr.u, &r = tr.r, &s = tr.s, &t = tr.t;
  const BigRational u2 = u * u, u3 = u2 * u, u4 = u3 * u, u6 = u3 * u3;
  Coefficients out;
  out.a1 = require_integral((a1 + 2 * s) / u);
  out.a2 = require_integral((a2 - s * a1 + 3 * r - s * s) / u2);
  out.a3 = require_integral((a3 + r * a1 + 2 * t) / u3);
  out.a4 = require_integral((a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u4);
  out.a6 = require_integral((a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6);
  return out;
}

RationalPoint apply(const Transform& tr, const RationalPoint& pt) {
  if (pt.infinity) return pt;
  const BigRational dx = pt.x - tr.r;
  const BigRational u2 = tr.u * tr.u;
  return RationalPoint::affine(dx / u2, (pt.y - tr.s * dx - tr.t) / (u2 * tr.u));
}

std::string RationalPoint::to_string() const {
  if (infinity) return "O";
  return "(" + hb::to_string(x) + ", " + hb::to_string(y) + ")";
}

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::good: return "good";
    case Reduction::split_multiplicative: return "split_multiplicative";
    case Reduction::nonsplit_multiplicative: return "nonsplit_multiplicative";
    case Reduction::additive: return "additive";
  }
  return "unknown";
}

std::string Kodaira::to_string() const {
  switch (kind) {
    case Kind::I: return "I" + std::to_string(n);
    case Kind::I_star: return "I" + std::to_string(n) + "*";
    case Kind::II: return "II";
    case Kind::III: return "III";
    case Kind::IV: return "IV";
    case Kind::IV_star: return "IV*";
    case Kind::III_star: return "III*";
    case Kind::II_star: return "II*";
  }
  return "?";
}

int Kodaira::components() const {
  switch (kind) {
    case Kind::I: return std::max(n, 1);
    case Kind::I_star: return 5 + n;
    case Kind::II: return 1;
    case Kind::III: return 2;
    case Kind::IV: return 3;
    case Kind::IV_star: return 7;
    case Kind::III_star: return 8;
    case Kind::II_star: return 9;
  }
  return 1;
}

namespace {

std::vector<std::uint64_t> disc_primes(const BigInt& disc) {
  std::vector<std::uint64_t> out;
  for (const auto& pp : factor(disc)) {
    if (!pp.prime.fits_ulong_p()) throw ComputationError("discriminant has a prime factor beyond 64 bits");
    out.push_back(pp.prime.get_ui());
  }
  return out;
}

Transform reduction_normalisation(const Coefficients& a) {
  // a1 in {0,1}, then a2 in {-1,0,1}, then a3 in {0,1}
  BigInt s;
  mpz_fdiv_q_ui(s.get_mpz_t(), a.a1.get_mpz_t(), 2);
  Transform ts{1, 0, BigRational(-s), 0};
  Coefficients b = apply(ts, a);
  BigInt r3 = b.a2 + 1;
  BigInt q;
  mpz_fdiv_q_ui(q.get_mpz_t(), r3.get_mpz_t(), 3);
  Transform tr{1, BigRational(-q), 0, 0};
  Coefficients c = apply(tr, b);
  BigInt t;
  mpz_fdiv_q_ui(t.get_mpz_t(), c.a3.get_mpz_t(), 2);
  Transform tt{1, 0, 0, BigRational(-t)};
  return ts.then(tr).then(tt);
}

}  // namespace

EllipticCurveQ::EllipticCurveQ(const Coefficients& a, std::string label)
    : a_(a), inv_(compute_invariants(a)), conductor_(1), label_(std::move(label)) {
  if (inv_.disc == 0) throw ValidationError("singular model " + to_string() + ": discriminant is zero");
  for (std::uint64_t p : disc_primes(inv_.disc)) {
    TateResult tr = tate_algorithm(a_, p);
    if (!tr.input_minimal)
      throw ValidationError("model " + to_string() + " is not minimal at " + std::to_string(p));
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(tr.data.conductor_exponent));
    conductor_ *= pe;
    bad_.push_back(tr.data);
  }
}

EllipticCurveQ EllipticCurveQ::minimal_model(const Coefficients& a, std::string label, Transform* to_minimal) {
  const Invariants inv = compute_invariants(a);
  if (inv.disc == 0) throw ValidationError("singular model: discriminant is zero");
  Coefficients cur = a;
  Transform total;
  for (const auto& pp : factor(inv.disc)) {
    if (pp.exponent < 12) continue;
    if (!pp.prime.fits_ulong_p()) throw ComputationError("discriminant has a prime factor beyond 64 bits");
    TateResult tr = tate_algorithm(cur, pp.prime.get_ui());
    if (tr.input_minimal) continue;
    cur = apply(tr.to_minimal, cur);
    total = total.then(tr.to_minimal);
  }
  const Transform norm = reduction_normalisation(cur);
  cur = apply(norm, cur);
  total = total.then(norm);
  if (to_minimal != nullptr) *to_minimal = total;
  return EllipticCurveQ(cur, std::move(label));
}

bool EllipticCurveQ::is_good(std::uint64_t q) const {
  return std::none_of(bad_.begin(), bad_.end(), [q](const LocalData& d) { return d.q == q; });
}

LocalData EllipticCurveQ::local_data(std::uint64_t q) const {
  if (!is_prime(q)) throw ValidationError("local_data: " + std::to_string(q) + " is not prime");
  for (const auto& d : bad_)
    if (d.q == q) return d;
  LocalData good;
  good.q = q;
  return good;
}

bool EllipticCurveQ::contains(const RationalPoint& pt) const {
  if (pt.infinity) return true;
  const BigRational &x = pt.x, &y = pt.y;
  const BigRational lhs = y * y + BigRational(a_.a1) * x * y + BigRational(a_.a3) * y;
  const BigRational rhs = x * x * x + BigRational(a_.a2) * x * x + BigRational(a_.a4) * x + BigRational(a_.a6);
  return lhs == rhs;
}

RationalPoint EllipticCurveQ::negate(const RationalPoint& pt) const {
  if (pt.infinity) return pt;
  return RationalPoint::affine(pt.x, -pt.y - BigRational(a_.a1) * pt.x - BigRational(a_.a3));
}

RationalPoint EllipticCurveQ::add(const RationalPoint& p, const RationalPoint& q) const {
  if (p.infinity) return q;
  if (q.infinity) return p;
  const BigRational a1 = a_.a1, a2 = a_.a2, a3 = a_.a3, a4 = a_.a4, a6 = a_.a6;
  BigRational lambda, nu;
  if (p.x == q.x) {
    if (p.y + q.y + a1 * q.x + a3 == 0) return RationalPoint::at_infinity();
    const BigRational den = 2 * p.y + a1 * p.x + a3;
    lambda = (3 * p.x * p.x + 2 * a2 * p.x + a4 - a1 * p.y) / den;
    nu = (-p.x * p.x * p.x + a4 * p.x + 2 * a6 - a3 * p.y) / den;
  } else {
    const BigRational dx = q.x - p.x;
    lambda = (q.y - p.y) / dx;
    nu = (p.y * q.x - q.y * p.x) / dx;
  }
  const BigRational x3 = lambda * lambda + a1 * lambda - a2 - p.x - q.x;
  const BigRational y3 = -(lambda + a1) * x3 - nu - a3;
  return RationalPoint::affine(x3, y3);
}

RationalPoint EllipticCurveQ::multiply(const RationalPoint& pt, long n) const {
  RationalPoint base = n < 0 ? negate(pt) : pt;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  RationalPoint acc = RationalPoint::at_infinity();
  while (k > 0) {
    if (k & 1UL) acc = add(acc, base);
    k >>= 1UL;
    if (k > 0) base = add(base, base);
  }
  return acc;
}

std::string EllipticCurveQ::to_string() const {
  std::ostringstream os;
  os << "[" << a_.a1 << "," << a_.a2 << "," << a_.a3 << "," << a_.a4 << "," << a_.a6 << "]";
  return os.str();
}

LocalData local_data(const EllipticCurveQ& e, std::uint64_t q) { return e.local_data(q); }

namespace {

// Affine points of y^2 = x^3 + A x + B over F_p; `inf` marks the identity.
struct ShortPoint {
  std::int64_t x = 0, y = 0;
  bool inf = true;
};

class ShortCurveFp {
 public:
  ShortCurveFp(std::int64_t p, std::int64_t A, std::int64_t B) : p_(p), A_(A), B_(B) {}

  [[nodiscard]] ShortPoint add(const ShortPoint& P, const ShortPoint& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    std::int64_t lambda;
    if (P.x == Q.x) {
      if (mod(P.y + Q.y, p_) == 0) return {};
      lambda = mulmod(mod(3 * mulmod(P.x, P.x, p_) + A_, p_), invmod(mod(2 * P.y, p_), p_), p_);
    } else {
      lambda = mulmod(mod(Q.y - P.y, p_), invmod(mod(Q.x - P.x, p_), p_), p_);
    }
    const std::int64_t x = mod(mulmod(lambda, lambda, p_) - P.x - Q.x, p_);
    return {x, mod(mulmod(lambda, P.x - x + p_, p_) - P.y, p_), false};
  }

  [[nodiscard]] ShortPoint mul(ShortPoint P, std::uint64_t n) const {
    ShortPoint R;
    while (n > 0) {
      if (n & 1U) R = add(R, P);
      P = add(P, P);
      n >>= 1U;
    }
    return R;
  }

  // Deterministic point with x-coordinate at least `from`.
  [[nodiscard]] std::optional<ShortPoint> point_from(std::int64_t& from) const {
    for (; from < p_; ++from) {
      const std::int64_t f = mod(mulmod(mod(mulmod(from, from, p_) + A_, p_), from, p_) + B_, p_);
      if (f == 0) continue;
      if (powmod(f, static_cast<std::uint64_t>((p_ - 1) / 2), p_) != 1) continue;
      return ShortPoint{from, sqrt_mod(f), false};
    }
    return std::nullopt;
  }

 private:
  // Tonelli-Shanks for a nonzero square f.
  [[nodiscard]] std::int64_t sqrt_mod(std::int64_t f) const {
    std::int64_t q = p_ - 1;
    int s = 0;
    while (q % 2 == 0) {
      q /= 2;
      ++s;
    }
    std::int64_t z = 2;
    while (powmod(z, static_cast<std::uint64_t>((p_ - 1) / 2), p_) != p_ - 1) ++z;
    std::int64_t c = powmod(z, static_cast<std::uint64_t>(q), p_);
    std::int64_t r = powmod(f, static_cast<std::uint64_t>((q + 1) / 2), p_);
    std::int64_t t = powmod(f, static_cast<std::uint64_t>(q), p_);
    int m = s;
    while (t != 1) {
      int i = 0;
      for (std::int64_t tt = t; tt != 1; tt = mulmod(tt, tt, p_)) ++i;
      std::int64_t b = c;
      for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p_);
      r = mulmod(r, b, p_);
      c = mulmod(b, b, p_);
      t = mulmod(t, c, p_);
      m = i;
    }
    return r;
  }

  std::int64_t p_, A_, B_;
};

std::uint64_t order_of(const ShortCurveFp& E, const ShortPoint& P, std::uint64_t multiple) {
  std::uint64_t n = multiple;
  for (const auto& pp : factor(BigInt(static_cast<unsigned long>(multiple)))) {
    const std::uint64_t q = pp.prime.get_ui();
    for (int i = 0; i < pp.exponent && n % q == 0 && E.mul(P, n / q).inf; ++i) n /= q;
  }
  return n;
}

// Baby-step giant-step over the Hasse interval; nullopt when no point of
// order above the interval width turns up.
std::optional<std::uint64_t> count_points_bsgs(const EllipticCurveQ& e, std::int64_t p) {
  auto red = [p](const BigInt& v) {
    BigInt r = v % p;
    if (r < 0) r += p;
    return r.get_si();
  };
  const ShortCurveFp E(p, mod(-27 * red(e.invariants().c4), p), mod(-54 * red(e.invariants().c6), p));
  const auto w = static_cast<std::int64_t>(std::ceil(4.0 * std::sqrt(static_cast<double>(p)))) + 2;
  const std::int64_t lo = p + 1 - w / 2;
  const auto m = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(w)))) + 1;
  std::int64_t x0 = 0;
  for (int attempt = 0; attempt < 16; ++attempt, ++x0) {
    const auto P = E.point_from(x0);
    if (!P) return std::nullopt;
    std::unordered_map<std::int64_t, std::int64_t> baby;  // x(jP) -> j, 1 <= j <= m
    ShortPoint jP;
    for (std::int64_t j = 1; j <= m; ++j) {
      jP = E.add(jP, *P);
      if (jP.inf) break;
      baby.emplace(jP.x, j);
    }
    const ShortPoint step = E.mul(*P, static_cast<std::uint64_t>(2 * m));
    ShortPoint R = E.mul(*P, static_cast<std::uint64_t>(lo + m));
    std::optional<std::uint64_t> hit;
    for (std::int64_t i = 0; i <= w / (2 * m) + 1 && !hit; ++i, R = E.add(R, step)) {
      // R = (lo + m + 2 m i) P; look for R = +-jP.
      const std::int64_t centre = lo + m + 2 * m * i;
      if (R.inf) {
        hit = static_cast<std::uint64_t>(centre);
        break;
      }
      if (auto it = baby.find(R.x); it != baby.end())
        for (std::int64_t cand : {centre - it->second, centre + it->second})
          if (cand > 0 && E.mul(*P, static_cast<std::uint64_t>(cand)).inf) {
            hit = static_cast<std::uint64_t>(cand);
            break;
          }
    }
    if (!hit) continue;
    if (order_of(E, *P, *hit) > static_cast<std::uint64_t>(w)) return *hit;
  }
  return std::nullopt;
}

constexpr std::uint64_t kBsgsThreshold = 1000;

}  // namespace

std::uint64_t count_points_mod(const EllipticCurveQ& e, std::uint64_t ell) {
  if (!is_prime(ell)) throw ValidationError("count_points_mod: " + std::to_string(ell) + " is not prime");
  if (!e.is_good(ell)) throw ValidationError("count_points_mod: bad reduction at " + std::to_string(ell));
  if (ell > kBsgsThreshold)
    if (auto n = count_points_bsgs(e, static_cast<std::int64_t>(ell))) return *n;
  const auto p = static_cast<std::int64_t>(ell);
  auto red = [p](const BigInt& v) {
    BigInt r = v % p;
    if (r < 0) r += p;
    return r.get_si();
  };
  const Coefficients& a = e.coefficients();
  if (ell == 2) {
    const std::int64_t a1 = red(a.a1), a2 = red(a.a2), a3 = red(a.a3), a4 = red(a.a4), a6 = red(a.a6);
    std::uint64_t n = 1;
    for (std::int64_t x = 0; x < 2; ++x)
      for (std::int64_t y = 0; y < 2; ++y)
        if ((y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) % 2 == 0) ++n;
    return n;
  }
  const Invariants& inv = e.invariants();
  const std::int64_t b2 = red(inv.b2), b4 = red(inv.b4), b6 = red(inv.b6);
  std::vector<std::int8_t> chi(ell, -1);
  chi[0] = 0;
  for (std::int64_t y = 1; y <= p / 2; ++y) chi[static_cast<std::size_t>(mulmod(y, y, p))] = 1;
  const std::int64_t c2 = b2, c1 = mod(2 * b4, p), c0 = b6;
  std::int64_t sum = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    // 4x^3 + b2 x^2 + 2 b4 x + b6
    std::int64_t v = mod(4 * x, p);
    v = mulmod(v + c2, x, p);
    v = mulmod(v + c1, x, p);
    v = mod(v + c0, p);
    sum += chi[static_cast<std::size_t>(v)];
  }
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(ell) + 1 + sum);
}

std::int64_t trace_of_frobenius(const EllipticCurveQ& e, std::uint64_t ell) {
  return static_cast<std::int64_t>(ell) + 1 - static_cast<std::int64_t>(count_points_mod(e, ell));
}

namespace {

BigInt eval_cubic(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& x) {
  return ((x + a) * x + b) * x + c;
}

BigInt floor_div(const BigInt& n, long d) {
  BigInt q;
  mpz_fdiv_q_ui(q.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(d));
  return q;
}

BigInt ceil_div(const BigInt& n, long d) {
  BigInt q;
  mpz_cdiv_q_ui(q.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(d));
  return q;
}

void bisect_roots(const BigInt& a, const BigInt& b, const BigInt& c, BigInt lo, BigInt hi, std::set<BigInt>& out) {
  if (lo > hi) return;
  BigInt flo = eval_cubic(a, b, c, lo), fhi = eval_cubic(a, b, c, hi);
  if (flo == 0) out.insert(lo);
  if (fhi == 0) out.insert(hi);
  if (sgn(flo) * sgn(fhi) >= 0) return;
  const bool increasing = flo < 0;
  while (hi - lo > 1) {
    BigInt mid = floor_div(lo + hi, 2);
    BigInt fm = eval_cubic(a, b, c, mid);
    if (fm == 0) {
      out.insert(mid);
      return;
    }
    if ((fm < 0) == increasing) lo = mid; else hi = mid;
  }
}

}  // namespace

std::vector<BigInt> integer_roots_monic_cubic(const BigInt& a, const BigInt& b, const BigInt& c) {
  BigInt bound = 1 + std::max({BigInt(abs(a)), BigInt(abs(b)), BigInt(abs(c))});
  std::set<BigInt> roots;
  const BigInt disc = 4 * a * a - 12 * b;
  if (disc <= 0) {
    bisect_roots(a, b, c, -bound, bound, roots);
  } else {
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
    const BigInt k1 = floor_div(-2 * a - s - 1, 6), k2 = ceil_div(-2 * a - s, 6);
    const BigInt j1 = floor_div(-2 * a + s, 6), j2 = ceil_div(-2 * a + s + 1, 6);
    bisect_roots(a, b, c, -bound, std::min(k1, bound), roots);
    if (k2 <= j1) bisect_roots(a, b, c, k2, j1, roots);
    bisect_roots(a, b, c, std::max(j2, BigInt(-bound)), bound, roots);
    for (BigInt x = k1; x <= k2; ++x)
      if (eval_cubic(a, b, c, x) == 0) roots.insert(x);
    for (BigInt x = j1; x <= j2; ++x)
      if (eval_cubic(a, b, c, x) == 0) roots.insert(x);
  }
  return {roots.begin(), roots.end()};
}

bool is_torsion(const EllipticCurveQ& e, const RationalPoint& pt) {
  RationalPoint q = pt;
  for (int k = 1; k <= 12; ++k) {
    if (q.infinity) return true;
    q = e.add(q, pt);
  }
  return false;
}

std::vector<RationalPoint> torsion_points(const EllipticCurveQ& e) {
  const Invariants& inv = e.invariants();
  const Coefficients& co = e.coefficients();
  // Y^2 = X^3 + A X + B with X = 36x + 3 b2, Y = 108 (2y + a1 x + a3)
  const BigInt A = -27 * inv.c4, B = -54 * inv.c6;
  std::vector<PrimePower> fac = factor(BigInt(4 * A * A * A + 27 * B * B));
  std::vector<BigInt> ys{0};
  std::vector<BigInt> divisors{1};
  for (const auto& pp : fac) {
    std::vector<BigInt> next;
    for (const auto& d : divisors) {
      BigInt m = d;
      for (int k = 0; k <= pp.exponent / 2; ++k) {
        next.push_back(m);
        m *= pp.prime;
      }
    }
    divisors = std::move(next);
  }
  ys.insert(ys.end(), divisors.begin(), divisors.end());

  std::vector<RationalPoint> out{RationalPoint::at_infinity()};
  for (const auto& Y : ys) {
    for (const auto& X : integer_roots_monic_cubic(0, A, B - Y * Y)) {
      for (int sign : {1, -1}) {
        if (Y == 0 && sign < 0) continue;
        const BigRational x = make_rational(X - 3 * inv.b2, 36);
        const BigRational w = make_rational(sign * Y, 108);
        const BigRational y = (w - BigRational(co.a1) * x - BigRational(co.a3)) / 2;
        RationalPoint pt = RationalPoint::affine(x, y);
        if (!e.contains(pt)) continue;
        if (is_torsion(e, pt)) out.push_back(pt);
      }
    }
  }
  return out;
}

std::uint64_t torsion_order(const EllipticCurveQ& e) { return torsion_points(e).size(); }

double naive_height(const RationalPoint& pt) {
  if (pt.infinity) return 0.0;
  auto log_abs = [](const BigInt& z) {
    if (z == 0) return 0.0;
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
  };
  return std::max(log_abs(pt.x.get_num()), log_abs(pt.x.get_den()));
}

std::optional<RationalPoint> search_generator(const EllipticCurveQ& e, long bound) {
  if (bound <= 0) return std::nullopt;
  const Coefficients& a = e.coefficients();
  const std::vector<RationalPoint> torsion = torsion_points(e);
  std::vector<RationalPoint> found;
  for (long den = 1; den <= bound; ++den) {
    const BigInt E(den), E2 = E * E, E3 = E2 * E, E4 = E2 * E2, E6 = E3 * E3;
    for (long num = -bound; num <= bound; ++num) {
      if (std::gcd(num, den) != 1) continue;
      const BigInt M(num);
      // e^6 times the discriminant of the quadratic in y
      const BigInt lin = a.a1 * M * E + a.a3 * E3;
      const BigInt q = lin * lin + 4 * (M * M * M + a.a2 * M * M * E2 + a.a4 * M * E4 + a.a6 * E6);
      if (q < 0 || mpz_perfect_square_p(q.get_mpz_t()) == 0) continue;
      BigInt s;
      mpz_sqrt(s.get_mpz_t(), q.get_mpz_t());
      const BigRational x = make_rational(M, E2);
      const BigRational y = make_rational(s - lin, 2 * E3);
      RationalPoint pt = RationalPoint::affine(x, y);
      if (!e.contains(pt)) throw InternalError("search_generator: constructed point off the curve");
      if (std::find(torsion.begin(), torsion.end(), pt) != torsion.end()) continue;
      found.push_back(std::move(pt));
    }
  }
  if (found.empty()) return std::nullopt;
  std::optional<RationalPoint> best;
  std::optional<Real> best_h;
  for (const auto& pt : found) {
    Real h = canonical_height(e, pt, 30);
    if (!best_h || h < *best_h) {
      best_h = h;
      best = pt;
    }
  }
  return best;
}

BigInt squarefree_part(const BigInt& d) {
  if (d == 0) throw ValidationError("squarefree_part of zero");
  BigInt out = d < 0 ? -1 : 1;
  for (const auto& pp : factor(d))
    if (pp.exponent % 2 == 1) out *= pp.prime;
  return out;
}

EllipticCurveQ quadratic_twist(const EllipticCurveQ& e, const BigInt& d, Transform* from_short) {
  if (d == 0 || squarefree_part(d) != d) throw ValidationError("quadratic_twist: d must be squarefree and nonzero");
  const Invariants& inv = e.invariants();
  const Coefficients shortm{0, 0, 0, -27 * inv.c4 * d * d, -54 * inv.c6 * d * d * d};
  return EllipticCurveQ::minimal_model(shortm, e.label().empty() ? "" : e.label() + "^(" + d.get_str() + ")",
                                       from_short);
}

bool in_identity_component(const EllipticCurveQ& e, const RationalPoint& pt, std::uint64_t q) {
  if (!is_prime(q)) throw ValidationError("in_identity_component: " + std::to_string(q) + " is not prime");
  if (!e.contains(pt)) throw ValidationError("in_identity_component: point not on curve");
  if (pt.infinity) return true;
  const BigInt Q(static_cast<unsigned long>(q));
  if (mpz_divisible_p(pt.x.get_den().get_mpz_t(), Q.get_mpz_t()) != 0) return true;
  const Coefficients& a = e.coefficients();
  const BigRational &x = pt.x, &y = pt.y;
  const BigRational fx = BigRational(a.a1) * y - 3 * x * x - 2 * BigRational(a.a2) * x - BigRational(a.a4);
  const BigRational fy = 2 * y + BigRational(a.a1) * x + BigRational(a.a3);
  auto zero_mod_q = [&](const BigRational& v) {
    return v == 0 || mpz_divisible_p(v.get_num().get_mpz_t(), Q.get_mpz_t()) != 0;
  };
  return !(zero_mod_q(fx) && zero_mod_q(fy));
}

}  // namespace hb
