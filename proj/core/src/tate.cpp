#include "hb/tate.hpp"

#include <algorithm>

#include "hb/errors.hpp"

namespace hb {

namespace {

using Poly = std::vector<std::int64_t>;  // constant term first, coefficients in [0, p)

constexpr std::uint64_t kBruteForceBound = 2000;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly reduce(const std::vector<BigInt>& poly, std::int64_t p) {
  Poly f;
  for (const auto& c : poly) {
    BigInt r = c % p;
    if (r < 0) r += p;
    f.push_back(r.get_si());
  }
  trim(f);
  return f;
}

std::int64_t eval(const Poly& f, std::int64_t x, std::int64_t p) {
  std::int64_t acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = mod(mulmod(acc, x, p) + *it, p);
  return acc;
}

Poly poly_mod(Poly a, const Poly& b, std::int64_t p) {
  const std::int64_t inv = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::int64_t factor = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = mod(a[shift + i] - mulmod(factor, b[i], p), p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = mod(c[i + j] + mulmod(a[i], b[j], p), p);
  trim(c);
  return poly_mod(c, m, p);
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::int64_t inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

Poly derivative(const Poly& f, std::int64_t p) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(mulmod(f[i], static_cast<std::int64_t>(i), p));
  trim(d);
  return d;
}

/// A root of multiplicity >= 2; the caller guarantees it exists and is unique.
std::int64_t repeated_root(const std::vector<BigInt>& poly, std::uint64_t p64) {
  const auto p = static_cast<std::int64_t>(p64);
  const Poly f = reduce(poly, p);
  const Poly df = derivative(f, p);
  if (p64 < kBruteForceBound) {
    for (std::int64_t x = 0; x < p; ++x)
      if (eval(f, x, p) == 0 && eval(df, x, p) == 0) return x;
  } else {
    const Poly g = poly_gcd(f, df, p);
    if (g.size() == 2) return mod(-g[0], p);
    if (g.size() == 3) return mulmod(mod(-g[1], p), invmod(2, p), p);
  }
  throw InternalError("tate: expected a repeated root mod " + std::to_string(p64));
}

struct Model {
  BigInt a1, a2, a3, a4, a6;

  [[nodiscard]] Coefficients coeffs() const { return {a1, a2, a3, a4, a6}; }

  void shift(const BigInt& r, const BigInt& s, const BigInt& t) {
    const BigInt n1 = a1 + 2 * s;
    const BigInt n2 = a2 - s * a1 + 3 * r - s * s;
    const BigInt n3 = a3 + r * a1 + 2 * t;
    const BigInt n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    const BigInt n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    a1 = n1;
    a2 = n2;
    a3 = n3;
    a4 = n4;
    a6 = n6;
  }
};

int val(const BigInt& x, std::uint64_t p) { return x == 0 ? 1 << 20 : ord(x, p); }

bool divides(const BigInt& pk, const BigInt& x) { return mpz_divisible_p(x.get_mpz_t(), pk.get_mpz_t()) != 0; }

/// Translation (r, t) moving the singular point of the reduction to (0, 0).
std::pair<BigInt, BigInt> singular_point(const Model& m, const Invariants& inv, std::uint64_t p) {
  if (p < kBruteForceBound) {
    const auto pp = static_cast<long>(p);
    for (long x = 0; x < pp; ++x) {
      for (long y = 0; y < pp; ++y) {
        const BigInt bx(x), by(y);
        const BigInt f = by * by + m.a1 * bx * by + m.a3 * by - bx * bx * bx - m.a2 * bx * bx - m.a4 * bx - m.a6;
        const BigInt fx = m.a1 * by - 3 * bx * bx - 2 * m.a2 * bx - m.a4;
        const BigInt fy = 2 * by + m.a1 * bx + m.a3;
        if (divides(BigInt(pp), f) && divides(BigInt(pp), fx) && divides(BigInt(pp), fy)) return {bx, by};
      }
    }
    throw InternalError("tate: no singular point mod " + std::to_string(p));
  }
  const auto pi = static_cast<std::int64_t>(p);
  auto red = [&](const BigInt& v) {
    BigInt r = v % pi;
    if (r < 0) r += pi;
    return r.get_si();
  };
  std::int64_t r = 0;
  if (red(inv.c4) == 0) {
    r = mulmod(mod(-red(inv.b2), pi), invmod(12, pi), pi);
  } else {
    const std::int64_t num = red(inv.c6 + inv.b2 * inv.c4);
    r = mulmod(mod(-num, pi), invmod(mulmod(12, red(inv.c4), pi), pi), pi);
  }
  const std::int64_t t = mulmod(mod(-(mulmod(red(m.a1), r, pi) + red(m.a3)), pi), invmod(2, pi), pi);
  return {BigInt(static_cast<long>(r)), BigInt(static_cast<long>(t))};
}

}  // namespace

int count_roots_mod(const std::vector<BigInt>& poly, std::uint64_t p64) {
  const auto p = static_cast<std::int64_t>(p64);
  const Poly f = reduce(poly, p);
  if (f.empty()) throw InternalError("count_roots_mod: zero polynomial");
  if (f.size() == 1) return 0;
  if (p64 < kBruteForceBound) {
    int n = 0;
    for (std::int64_t x = 0; x < p; ++x) n += eval(f, x, p) == 0 ? 1 : 0;
    return n;
  }
  // deg gcd(f, x^p - x)
  Poly monic = f;
  const std::int64_t inv = invmod(monic.back(), p);
  for (auto& c : monic) c = mulmod(c, inv, p);
  Poly result{1};
  Poly base = poly_mod(Poly{0, 1}, monic, p);
  for (std::uint64_t e = p64; e > 0; e >>= 1U) {
    if (e & 1U) result = poly_mulmod(result, base, monic, p);
    base = poly_mulmod(base, base, monic, p);
  }
  if (result.size() < 2) result.resize(2, 0);
  result[1] = mod(result[1] - 1, p);
  trim(result);
  const Poly g = poly_gcd(monic, result, p);
  return g.empty() ? static_cast<int>(monic.size() - 1) : static_cast<int>(g.size() - 1);
}

TateResult tate_algorithm(const Coefficients& a, std::uint64_t p) {
  if (!is_prime(p)) throw ValidationError("tate_algorithm: " + std::to_string(p) + " is not prime");
  Model m{a.a1, a.a2, a.a3, a.a4, a.a6};
  TateResult result;
  result.data.q = p;
  Transform total;

  auto record_shift = [&](const BigInt& r, const BigInt& s, const BigInt& t) {
    m.shift(r, s, t);
    total = total.then(Transform{1, r, s, t});
  };

  const BigInt P(static_cast<unsigned long>(p));
  for (;;) {
    const Invariants inv = compute_invariants(m.coeffs());
    const int n = val(inv.disc, p);
    auto finish = [&](Kodaira k, int c, Reduction red) {
      result.data.kodaira = k;
      result.data.tamagawa = c;
      result.data.reduction = red;
      result.data.disc_valuation = n;
      result.data.conductor_exponent = red == Reduction::good ? 0 : n + 1 - k.components();
      result.to_minimal = total;
      return result;
    };
    using K = Kodaira::Kind;

    if (n == 0) return finish({K::I, 0}, 1, Reduction::good);

    auto [r0, t0] = singular_point(m, inv, p);
    record_shift(r0, 0, t0);
    if (!divides(P, m.a3) || !divides(P, m.a4) || !divides(P, m.a6))
      throw InternalError("tate: singular point not moved to origin");

    const Invariants inv1 = compute_invariants(m.coeffs());
    if (!divides(P, inv1.b2)) {
      const bool split = count_roots_mod({-m.a2, m.a1, 1}, p) > 0;
      const int c = split ? n : (n % 2 == 0 ? 2 : 1);
      return finish({K::I, n}, c, split ? Reduction::split_multiplicative : Reduction::nonsplit_multiplicative);
    }
    const BigInt P2 = P * P, P3 = P2 * P;
    if (!divides(P2, m.a6)) return finish({K::II, 0}, 1, Reduction::additive);
    if (!divides(P3, inv1.b8)) return finish({K::III, 0}, 2, Reduction::additive);
    if (!divides(P3, inv1.b6)) {
      const int c = count_roots_mod({-(m.a6 / P2), m.a3 / P, 1}, p) > 0 ? 3 : 1;
      return finish({K::IV, 0}, c, Reduction::additive);
    }

    // make p | a1, a2; p^2 | a3, a4; p^3 | a6
    if (p == 2) {
      bool done = false;
      for (int s = 0; s < 2 && !done; ++s) {
        for (int t = 0; t < 4 && !done; ++t) {
          Model trial = m;
          trial.shift(0, s, t);
          if (divides(P, trial.a1) && divides(P, trial.a2) && divides(P2, trial.a3) && divides(P2, trial.a4) &&
              divides(P3, trial.a6)) {
            record_shift(0, s, t);
            done = true;
          }
        }
      }
      if (!done) throw InternalError("tate: no (s, t) normalisation at 2");
    } else {
      const auto pi = static_cast<std::int64_t>(p);
      const auto p2i = pi * pi;
      const std::int64_t half1 = invmod(2, pi);
      const BigInt s = mulmod(mod(-BigInt(m.a1 % pi).get_si(), pi), half1, pi);
      BigInt a3r = m.a3 % p2i;
      const std::int64_t t = p2i > 0 ? mulmod(mod(-a3r.get_si(), p2i), invmod(2, p2i), p2i) : 0;
      record_shift(0, s, BigInt(static_cast<long>(t)));
    }
    if (!divides(P, m.a1) || !divides(P, m.a2) || !divides(P2, m.a3) || !divides(P2, m.a4) || !divides(P3, m.a6))
      throw InternalError("tate: (s, t) normalisation failed");

    // P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3
    const BigInt b = m.a2 / P, cc = m.a4 / P2, d = m.a6 / P3;
    const BigInt w = 27 * d * d - b * b * cc * cc + 4 * b * b * b * d - 18 * b * cc * d + 4 * cc * cc * cc;
    const BigInt x = 3 * cc - b * b;
    if (!divides(P, w)) {
      const int c = 1 + count_roots_mod({d, cc, b, 1}, p);
      return finish({K::I_star, 0}, c, Reduction::additive);
    }
    if (!divides(P, x)) {
      // double root: move it to T = 0 and run the I_n* subprocedure
      const BigInt root(static_cast<long>(repeated_root({d, cc, b, 1}, p)));
      record_shift(root * P, 0, 0);
      int k = 1;
      BigInt mx = P2, my = P2;
      int c = 0;
      for (;;) {
        const BigInt xa3 = m.a3 / my, xa6 = m.a6 / (mx * my);
        if (!divides(P, xa3 * xa3 + 4 * xa6)) {
          c = count_roots_mod({-xa6, xa3, 1}, p) > 0 ? 4 : 2;
          break;
        }
        const BigInt ty(static_cast<long>(repeated_root({-xa6, xa3, 1}, p)));
        record_shift(0, 0, my * ty);
        my *= P;
        ++k;
        const BigInt ya2 = m.a2 / P, ya4 = m.a4 / (P * mx), ya6 = m.a6 / (mx * my);
        if (!divides(P, ya4 * ya4 - 4 * ya2 * ya6)) {
          c = count_roots_mod({ya6, ya4, ya2}, p) > 0 ? 4 : 2;
          break;
        }
        const BigInt rx(static_cast<long>(repeated_root({ya6, ya4, ya2}, p)));
        record_shift(mx * rx, 0, 0);
        mx *= P;
        ++k;
      }
      return finish({K::I_star, k}, c, Reduction::additive);
    }
    // triple root: move it to T = 0
    const BigInt root(static_cast<long>(repeated_root({d, cc, b, 1}, p)));
    record_shift(root * P, 0, 0);
    const BigInt P4 = P3 * P, P5 = P4 * P, P6 = P5 * P;
    const BigInt ya3 = m.a3 / P2, ya6 = m.a6 / P4;
    if (!divides(P, ya3 * ya3 + 4 * ya6)) {
      const int c = count_roots_mod({-ya6, ya3, 1}, p) > 0 ? 3 : 1;
      return finish({K::IV_star, 0}, c, Reduction::additive);
    }
    const BigInt ty(static_cast<long>(repeated_root({-ya6, ya3, 1}, p)));
    record_shift(0, 0, P2 * ty);
    if (!divides(P4, m.a4)) return finish({K::III_star, 0}, 2, Reduction::additive);
    if (!divides(P6, m.a6)) return finish({K::II_star, 0}, 1, Reduction::additive);

    // not minimal at p: scale by u = p and restart
    if (!divides(P, m.a1) || !divides(P2, m.a2) || !divides(P3, m.a3) || !divides(P4, m.a4) || !divides(P6, m.a6))
      throw InternalError("tate: non-minimal model fails divisibility");
    m = Model{m.a1 / P, m.a2 / P2, m.a3 / P3, m.a4 / P4, m.a6 / P6};
    total = total.then(Transform{BigRational(P), 0, 0, 0});
    result.input_minimal = false;
  }
}

}  // namespace hb
