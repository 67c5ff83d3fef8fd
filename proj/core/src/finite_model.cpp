#include "hb/finite_model.hpp"

#include <algorithm>
#include <set>

#include "hb/errors.hpp"

namespace hb {

using Elt = FieldFl2::Elt;

FieldFl2::FieldFl2(std::uint64_t ell) : l_(static_cast<std::int64_t>(ell)) {
  if (!is_prime(ell)) throw ValidationError("FieldFl2: " + std::to_string(ell) + " is not prime");
  if (ell == 2) {
    c0_ = 1;
    c1_ = 1;
  } else {
    c1_ = 0;
    c0_ = 2;
    while (kronecker_symbol(c0_, l_) != -1) ++c0_;
  }
  frob_t_ = pow({0, 1}, ell);
  if (ell != 2) {
    const std::uint64_t half = (ell * ell - 1) / 2;
    for (std::int64_t k = 0;; ++k) {
      const Elt z{k, 1};
      if (pow(z, half) != from_int(1)) {
        qnr_ = z;
        break;
      }
    }
  }
}

Elt FieldFl2::add(const Elt& x, const Elt& y) const { return {mod(x.a + y.a, l_), mod(x.b + y.b, l_)}; }
Elt FieldFl2::sub(const Elt& x, const Elt& y) const { return {mod(x.a - y.a, l_), mod(x.b - y.b, l_)}; }
Elt FieldFl2::neg(const Elt& x) const { return {mod(-x.a, l_), mod(-x.b, l_)}; }

Elt FieldFl2::mul(const Elt& x, const Elt& y) const {
  const std::int64_t bd = mulmod(x.b, y.b, l_);
  return {mod(mulmod(x.a, y.a, l_) + mulmod(bd, c0_, l_), l_),
          mod(mulmod(x.a, y.b, l_) + mulmod(x.b, y.a, l_) + mulmod(bd, c1_, l_), l_)};
}

Elt FieldFl2::pow(Elt x, std::uint64_t e) const {
  Elt r = from_int(1);
  while (e > 0) {
    if (e & 1U) r = mul(r, x);
    x = mul(x, x);
    e >>= 1U;
  }
  return r;
}

Elt FieldFl2::frob(const Elt& x) const { return add(from_int(x.a), mul(from_int(x.b), frob_t_)); }

Elt FieldFl2::inv(const Elt& x) const {
  if (x.a == 0 && x.b == 0) throw InternalError("FieldFl2: inverse of zero");
  const Elt c = frob(x);
  const Elt n = mul(x, c);
  if (n.b != 0) throw InternalError("FieldFl2: norm outside the prime field");
  return mul(c, from_int(invmod(n.a, l_)));
}

std::optional<Elt> FieldFl2::sqrt(const Elt& x) const {
  if (x.a == 0 && x.b == 0) return x;
  const auto q = static_cast<std::uint64_t>(l_) * static_cast<std::uint64_t>(l_);
  if (l_ == 2) return pow(x, q / 2);
  if (pow(x, (q - 1) / 2) != from_int(1)) return std::nullopt;
  // Tonelli-Shanks in the cyclic group of order q - 1
  std::uint64_t Q = q - 1;
  int s = 0;
  while (Q % 2 == 0) {
    Q /= 2;
    ++s;
  }
  Elt z = pow(qnr_, Q);
  Elt r = pow(x, (Q + 1) / 2);
  Elt t = pow(x, Q);
  int m = s;
  const Elt one = from_int(1);
  while (t != one) {
    int i = 0;
    Elt tt = t;
    while (tt != one) {
      tt = mul(tt, tt);
      ++i;
    }
    Elt b = z;
    for (int j = 0; j < m - i - 1; ++j) b = mul(b, b);
    r = mul(r, b);
    z = mul(b, b);
    t = mul(t, z);
    m = i;
  }
  return r;
}

ReducedCurve::ReducedCurve(const EllipticCurveQ& e, std::uint64_t ell) : f_(ell) {
  if (!e.is_good(ell)) throw ValidationError("ReducedCurve: bad reduction at " + std::to_string(ell));
  const auto l = static_cast<long>(ell);
  auto red = [&](const BigInt& v) {
    BigInt r = v % l;
    return f_.from_int(r.get_si());
  };
  const Coefficients& a = e.coefficients();
  a1_ = red(a.a1);
  a2_ = red(a.a2);
  a3_ = red(a.a3);
  a4_ = red(a.a4);
  a6_ = red(a.a6);
}

bool ReducedCurve::contains(const FinitePoint& pt) const {
  if (pt.infinity) return true;
  const auto& f = f_;
  const Elt lhs = f.add(f.mul(pt.y, f.add(pt.y, f.add(f.mul(a1_, pt.x), a3_))), f.from_int(0));
  const Elt x2 = f.mul(pt.x, pt.x);
  const Elt rhs = f.add(f.add(f.mul(x2, f.add(pt.x, a2_)), f.mul(a4_, pt.x)), a6_);
  return lhs == rhs;
}

FinitePoint ReducedCurve::neg(const FinitePoint& pt) const {
  if (pt.infinity) return pt;
  return {false, pt.x, f_.sub(f_.neg(pt.y), f_.add(f_.mul(a1_, pt.x), a3_))};
}

FinitePoint ReducedCurve::add(const FinitePoint& p, const FinitePoint& q) const {
  if (p.infinity) return q;
  if (q.infinity) return p;
  const auto& f = f_;
  Elt lambda, nu;
  if (p.x == q.x) {
    const Elt s = f.add(f.add(p.y, q.y), f.add(f.mul(a1_, q.x), a3_));
    if (s == f.from_int(0)) return {};
    const Elt den = f.add(f.add(f.mul(f.from_int(2), p.y), f.mul(a1_, p.x)), a3_);
    const Elt dinv = f.inv(den);
    const Elt x2 = f.mul(p.x, p.x);
    const Elt num_l = f.sub(f.add(f.add(f.mul(f.from_int(3), x2), f.mul(f.mul(f.from_int(2), a2_), p.x)), a4_),
                            f.mul(a1_, p.y));
    const Elt num_n = f.sub(f.add(f.add(f.neg(f.mul(x2, p.x)), f.mul(a4_, p.x)), f.mul(f.from_int(2), a6_)),
                            f.mul(a3_, p.y));
    lambda = f.mul(num_l, dinv);
    nu = f.mul(num_n, dinv);
  } else {
    const Elt dinv = f.inv(f.sub(q.x, p.x));
    lambda = f.mul(f.sub(q.y, p.y), dinv);
    nu = f.mul(f.sub(f.mul(p.y, q.x), f.mul(q.y, p.x)), dinv);
  }
  const Elt x3 = f.sub(f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(a1_, lambda)), a2_), p.x), q.x);
  const Elt y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, a1_), x3)), nu), a3_);
  return {false, x3, y3};
}

FinitePoint ReducedCurve::mul(const FinitePoint& pt, const BigInt& k) const {
  if (k < 0) return mul(neg(pt), BigInt(-k));
  FinitePoint acc;
  const long bits = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2));
  for (long i = bits - 1; i >= 0; --i) {
    acc = add(acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i)) != 0) acc = add(acc, pt);
  }
  return acc;
}

FinitePoint ReducedCurve::frob(const FinitePoint& pt) const {
  if (pt.infinity) return pt;
  return {false, f_.frob(pt.x), f_.frob(pt.y)};
}

std::vector<FinitePoint> ReducedCurve::points_over(const Elt& x) const {
  const auto& f = f_;
  const Elt A = f.add(f.mul(a1_, x), a3_);
  const Elt B = f.add(f.add(f.mul(f.mul(x, x), f.add(x, a2_)), f.mul(a4_, x)), a6_);
  std::vector<FinitePoint> out;
  if (f.characteristic() == 2) {
    for (std::int64_t a = 0; a < 2; ++a)
      for (std::int64_t b = 0; b < 2; ++b) {
        const Elt y{a, b};
        if (f.add(f.mul(y, y), f.mul(A, y)) == B) out.push_back({false, x, y});
      }
    return out;
  }
  const Elt disc = f.add(f.mul(A, A), f.mul(f.from_int(4), B));
  const auto s = f.sqrt(disc);
  if (!s) return out;
  const Elt half = f.from_int(static_cast<std::int64_t>((f.characteristic() + 1) / 2));
  out.push_back({false, x, f.mul(f.sub(*s, A), half)});
  if (!(*s == f.from_int(0))) out.push_back({false, x, f.mul(f.sub(f.neg(*s), A), half)});
  return out;
}

std::vector<FinitePoint> ReducedCurve::enumerate() const {
  std::vector<FinitePoint> out{FinitePoint{}};
  const auto l = static_cast<std::int64_t>(f_.characteristic());
  for (std::int64_t a = 0; a < l; ++a)
    for (std::int64_t b = 0; b < l; ++b)
      for (auto& pt : points_over({a, b})) out.push_back(pt);
  std::sort(out.begin(), out.end());
  return out;
}

FinitePoint ReducedCurve::random_point(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::int64_t> dist(0, static_cast<std::int64_t>(f_.characteristic()) - 1);
  for (;;) {
    const Elt x{dist(rng), dist(rng)};
    auto pts = points_over(x);
    if (pts.empty()) continue;
    return pts[static_cast<std::size_t>(rng() % pts.size())];
  }
}

BigInt ReducedCurve::order(const FinitePoint& pt, const BigInt& n) const {
  if (!mul(pt, n).infinity) throw InternalError("ReducedCurve::order: n is not a multiple of the order");
  BigInt ord = n;
  if (ord == 1) return ord;
  for (const auto& pp : factor(n)) {
    for (int i = 0; i < pp.exponent; ++i) {
      const BigInt cand = ord / pp.prime;
      if (!mul(pt, cand).infinity) break;
      ord = cand;
    }
  }
  return ord;
}

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt pow_ui(std::uint64_t p, int e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
  return r;
}

BigInt group_order_fl2(std::uint64_t ell, std::int64_t a) {
  const BigInt l1 = BigInt(static_cast<unsigned long>(ell)) + 1;
  return (l1 - a) * (l1 + a);
}

int ord_or_zero(const BigInt& v, std::uint64_t p) { return v == 0 ? 0 : ord(v, p); }

}  // namespace

FiniteCurveGroup reduced_group(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t seed) {
  FiniteCurveGroup g;
  g.ell = ell;
  g.a_ell = trace_of_frobenius(e, ell);
  g.order = group_order_fl2(ell, g.a_ell);
  const ReducedCurve c(e, ell);
  BigInt exponent = 1;
  if (ell <= kExhaustiveEllBound) {
    const auto pts = c.enumerate();
    if (BigInt(static_cast<unsigned long>(pts.size())) != g.order)
      throw InternalError("reduced_group: enumeration count disagrees with (l+1)^2 - a_l^2");
    for (const auto& pt : pts) {
      exponent = lcm_big(exponent, c.order(pt, g.order));
      if (exponent == g.order) break;
    }
    g.enumerated = true;
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 40; ++i) exponent = lcm_big(exponent, c.order(c.random_point(rng), g.order));
  }
  g.n2 = exponent;
  g.n1 = g.order / exponent;
  if (g.n1 * g.n2 != g.order || g.n2 % g.n1 != 0)
    throw InternalError("reduced_group: inconsistent group structure");
  return g;
}

int kolyvagin_exponent(std::int64_t a_ell, std::uint64_t ell, std::uint64_t p) {
  const BigInt a(static_cast<long>(a_ell)), l1 = BigInt(static_cast<unsigned long>(ell)) + 1;
  const BigInt P(static_cast<unsigned long>(p));
  if (a % P != 0 || l1 % P != 0)
    throw ValidationError("l = " + std::to_string(ell) + " is not a Kolyvagin prime for p = " + std::to_string(p));
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), l1.get_mpz_t());
  return ord(g, p);
}

EigenspaceSplit frobenius_split(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t p, std::uint64_t seed) {
  const ChiEll chi(e, ell, p);
  const ReducedCurve& c = chi.curve();
  const BigInt& n = chi.group_order();
  const int k = ord(n, p);
  const BigInt pk = pow_ui(p, k);
  const BigInt half = (pk + 1) / 2;
  const BigInt l1 = BigInt(static_cast<unsigned long>(ell)) + 1;
  EigenspaceSplit s;
  s.p = p;
  s.expected_plus = pow_ui(p, ord_or_zero(l1 - chi.a_ell(), p));
  s.expected_minus = pow_ui(p, ord_or_zero(l1 + chi.a_ell(), p));

  if (ell <= kExhaustiveEllBound) {
    std::set<FinitePoint> gp;
    for (const auto& pt : c.enumerate()) gp.insert(chi.project(pt));
    std::vector<FinitePoint> plus, minus;
    for (const auto& q : gp) {
      const FinitePoint fq = c.frob(q);
      if (fq == q) plus.push_back(q);
      if (fq == c.neg(q)) minus.push_back(q);
    }
    s.plus_order = static_cast<unsigned long>(plus.size());
    s.minus_order = static_cast<unsigned long>(minus.size());
    auto cyclic = [&](const std::vector<FinitePoint>& sub, const BigInt& size) {
      return std::any_of(sub.begin(), sub.end(), [&](const FinitePoint& q) { return c.order(q, pk) == size; });
    };
    s.plus_cyclic = cyclic(plus, s.plus_order);
    s.minus_cyclic = cyclic(minus, s.minus_order);
    std::size_t common = 0;
    for (const auto& q : plus) common += std::binary_search(minus.begin(), minus.end(), q) ? 1 : 0;
    s.trivial_intersection = common == 1;
    s.generate_p_part = s.trivial_intersection && s.plus_order * s.minus_order == static_cast<unsigned long>(gp.size()) &&
                        BigInt(static_cast<unsigned long>(gp.size())) == pk;
    s.enumerated = true;
    return s;
  }
  std::mt19937_64 rng(seed);
  BigInt plus_max = 1, minus_max = 1;
  bool eigen_ok = true;
  for (int i = 0; i < 60; ++i) {
    const FinitePoint q = chi.project(c.random_point(rng));
    const FinitePoint fq = c.frob(q);
    const FinitePoint qp = c.mul(c.add(q, fq), half), qm = c.mul(c.add(q, c.neg(fq)), half);
    eigen_ok = eigen_ok && c.frob(qp) == qp && c.frob(qm) == c.neg(qm) && c.add(qp, qm) == q;
    plus_max = std::max(plus_max, c.order(qp, pk));
    minus_max = std::max(minus_max, c.order(qm, pk));
  }
  s.plus_order = plus_max;
  s.minus_order = minus_max;
  s.plus_cyclic = eigen_ok;
  s.minus_cyclic = eigen_ok;
  s.trivial_intersection = eigen_ok;
  s.generate_p_part = eigen_ok && plus_max * minus_max == pk;
  return s;
}

ChiEll::ChiEll(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t p)
    : curve_(e, ell), ell_(ell), p_(p), a_(trace_of_frobenius(e, ell)), M_(kolyvagin_exponent(a_, ell, p)) {
  if (p % 2 == 0 || !is_prime(p)) throw ValidationError("ChiEll: p must be an odd prime");
  if (ell == p) throw ValidationError("ChiEll: l must differ from p");
  n_ = group_order_fl2(ell, a_);
  const int k = ord(n_, p);
  pk_ = pow_ui(p, k);
  const BigInt m = n_ / pk_;
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), m.get_mpz_t(), pk_.get_mpz_t());
  proj_ = (m * inv) % n_;
  const BigInt pm = pow_ui(p, M_);
  a_div_ = BigInt(static_cast<long>(a_)) / pm;
  l1_div_ = (BigInt(static_cast<unsigned long>(ell)) + 1) / pm;
}

FinitePoint ChiEll::project(const FinitePoint& pt) const { return curve_.mul(pt, proj_); }

FinitePoint ChiEll::apply(const FinitePoint& pt) const {
  const FinitePoint q = project(pt);
  const FinitePoint fq = curve_.frob(q);
  const FinitePoint r = curve_.add(curve_.mul(q, a_div_), curve_.neg(curve_.mul(fq, l1_div_)));
  const FinitePoint undivided = curve_.add(curve_.mul(q, BigInt(static_cast<long>(a_))),
                                           curve_.neg(curve_.mul(fq, BigInt(static_cast<unsigned long>(ell_)) + 1)));
  if (!(curve_.mul(r, pow_ui(p_, M_)) == undivided)) throw InternalError("chi_l: division by p^M inconsistent");
  return r;
}

bool ChiVerification::passed() const {
  return split.plus_order == split.expected_plus && split.minus_order == split.expected_minus && split.plus_cyclic &&
         split.minus_cyclic && split.trivial_intersection && split.generate_p_part && kernel_matches &&
         image_is_full_torsion && homomorphism && commutes_with_frobenius;
}

ChiVerification verify_chi_ell(const EllipticCurveQ& e, std::uint64_t ell, std::uint64_t p, std::uint64_t seed,
                               std::size_t samples) {
  const ChiEll chi(e, ell, p);
  const ReducedCurve& c = chi.curve();
  ChiVerification v;
  v.ell = ell;
  v.p = p;
  v.a_ell = chi.a_ell();
  v.M = chi.M();
  v.split = frobenius_split(e, ell, p, seed);
  const BigInt pm = pow_ui(p, chi.M());
  std::mt19937_64 rng(seed);

  std::vector<FinitePoint> pts;
  if (ell <= kExhaustiveEllBound) {
    pts = c.enumerate();
    v.exhaustive = true;
  } else {
    for (std::size_t i = 0; i < samples; ++i) pts.push_back(c.random_point(rng));
  }
  v.points_checked = pts.size();

  std::set<FinitePoint> kernel, multiples, image, torsion;
  bool commutes = true;
  for (const auto& pt : pts) {
    const FinitePoint x = chi.apply(pt);
    if (x.infinity) kernel.insert(pt);
    image.insert(x);
    multiples.insert(c.mul(pt, pm));
    if (c.mul(pt, pm).infinity) torsion.insert(pt);
    if (v.exhaustive || commutes) commutes = commutes && chi.apply(c.frob(pt)) == c.frob(x);
  }
  v.commutes_with_frobenius = commutes;

  if (v.exhaustive) {
    v.kernel_matches = kernel == multiples;
    v.image_is_full_torsion = image == torsion && BigInt(static_cast<unsigned long>(torsion.size())) == pm * pm;
  } else {
    // p^M E lies in the kernel, and a full-rank image forces equality of sizes
    bool inside = true;
    for (const auto& m : multiples) inside = inside && chi.apply(m).infinity;
    bool full = false;
    const BigInt pm1 = pm / p;
    std::vector<FinitePoint> imgs(image.begin(), image.end());
    for (std::size_t i = 0; i < imgs.size() && !full; ++i) {
      const FinitePoint r1 = c.mul(imgs[i], pm1);
      if (r1.infinity) continue;
      std::set<FinitePoint> line;
      for (std::uint64_t j = 0; j < p; ++j) line.insert(c.mul(r1, BigInt(static_cast<unsigned long>(j))));
      for (std::size_t k = i + 1; k < imgs.size() && !full; ++k) {
        const FinitePoint r2 = c.mul(imgs[k], pm1);
        full = !r2.infinity && line.count(r2) == 0;
      }
    }
    v.kernel_matches = inside && full;
    v.image_is_full_torsion = full;
  }

  bool hom = true;
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (std::size_t i = 0; i < std::min<std::size_t>(samples, pts.size()); ++i) {
    const FinitePoint& a = pts[pick(rng)];
    const FinitePoint& b = pts[pick(rng)];
    hom = hom && chi.apply(c.add(a, b)) == c.add(chi.apply(a), chi.apply(b));
  }
  v.homomorphism = hom;
  return v;
}

}  // namespace hb
