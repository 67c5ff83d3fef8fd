#include "hb/forms.hpp"

#include <algorithm>
#include <numeric>

#include "hb/errors.hpp"

namespace hb {

bool QuadForm::is_primitive() const {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g == 1;
}

bool QuadForm::is_reduced() const {
  if (abs(b) > a || a > c) return false;
  if ((abs(b) == a || a == c) && b < 0) return false;
  return true;
}

std::string QuadForm::to_string() const { return "[" + a.get_str() + "," + b.get_str() + "," + c.get_str() + "]"; }

QuadForm act(const QuadForm& f, const BigInt& p, const BigInt& q, const BigInt& r, const BigInt& s) {
  if (p * s - q * r != 1) throw InternalError("act: matrix not in SL2(Z)");
  return {f.evaluate(p, r), 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s, f.evaluate(q, s)};
}

QuadForm reduce(const QuadForm& f0) {
  if (f0.discriminant() >= 0 || f0.a <= 0) throw ValidationError("reduce: form is not positive definite");
  QuadForm f = f0;
  for (;;) {
    // normalise b into (-a, a]
    const BigInt two_a = 2 * f.a;
    BigInt k;
    mpz_fdiv_q(k.get_mpz_t(), BigInt(f.a - f.b).get_mpz_t(), two_a.get_mpz_t());
    if (k != 0) f = act(f, 1, k, 0, 1);
    if (f.a > f.c) {
      f = act(f, 0, -1, 1, 0);
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 0 || d == 1) return false;
  const std::int64_t r = mod(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  const std::int64_t m = d / 4;
  const std::int64_t rm = mod(m, 4);
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

std::vector<QuadForm> reduced_forms(std::int64_t disc) {
  if (disc >= 0 || (mod(disc, 4) != 0 && mod(disc, 4) != 1))
    throw ValidationError("reduced_forms: invalid discriminant " + std::to_string(disc));
  std::vector<QuadForm> out;
  for (std::int64_t a = 1; 3 * a * a <= -disc; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      const std::int64_t num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t class_number(std::int64_t disc) { return reduced_forms(disc).size(); }

std::vector<std::int64_t> heegner_discriminants(std::uint64_t N, std::int64_t bound) {
  if (N == 0) throw ValidationError("heegner_discriminants: N must be positive");
  const std::vector<std::uint64_t> primes = N == 1 ? std::vector<std::uint64_t>{} : prime_divisors(static_cast<std::int64_t>(N));
  std::vector<std::int64_t> out;
  for (std::int64_t D = 1; D <= bound; ++D) {
    if (!is_fundamental_discriminant(-D)) continue;
    const bool split = std::all_of(primes.begin(), primes.end(), [D](std::uint64_t q) {
      return kronecker_symbol(-D, static_cast<std::int64_t>(q)) == 1;
    });
    if (split) out.push_back(D);
  }
  return out;
}

}  // namespace hb
