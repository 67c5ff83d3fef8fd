#include "hb/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "hb/errors.hpp"

namespace hb {

int Valuation::value() const {
  if (!value_) throw std::logic_error("valuation is infinite");
  return *value_;
}

std::string Valuation::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("inf");
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t m) {
  std::int64_t result = 1 % m;
  std::int64_t base = mod(a, m);
  while (e > 0) {
    if (e & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1U;
  }
  return result;
}

std::int64_t invmod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1 != 0) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw InternalError("invmod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return mod(x, m);
}

int kronecker_symbol(std::int64_t a, std::int64_t n) {
  if (n == 0) throw ValidationError("kronecker_symbol: n must be nonzero");
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // strip factors of two using (a|2)
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    const std::int64_t r8 = mod(a, 8);
    if (r8 == 3 || r8 == 5) result = -result;
  }
  // Jacobi symbol for odd n
  std::int64_t aa = mod(a, n);
  while (aa != 0) {
    while (aa % 2 == 0) {
      aa /= 2;
      const std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(aa, n);
    if (aa % 4 == 3 && n % 4 == 3) result = -result;
    aa %= n;
  }
  return n == 1 ? result : 0;
}

int kronecker_symbol(const BigInt& a, const BigInt& n) {
  if (n == 0) throw ValidationError("kronecker_symbol: n must be nonzero");
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m, base = a % m;
  for (; e > 0; e >>= 1U) {
    if (e & 1U) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
  }
  return result;
}

}  // namespace

// Miller-Rabin with the first twelve prime bases, deterministic below 3.3e24.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

int ord(const BigInt& n, std::uint64_t p) {
  if (n == 0) throw InternalError("ord of zero");
  BigInt bp(static_cast<unsigned long>(p));
  return static_cast<int>(mpz_remove(BigInt().get_mpz_t(), n.get_mpz_t(), bp.get_mpz_t()));
}

int ord(std::int64_t n, std::uint64_t p) {
  if (n == 0) throw InternalError("ord of zero");
  int e = 0;
  const auto pp = static_cast<std::int64_t>(p);
  while (n % pp == 0) {
    n /= pp;
    ++e;
  }
  return e;
}

Valuation p_valuation(const BigInt& n, std::uint64_t p) {
  if (!is_prime(p)) throw ValidationError("p_valuation: " + std::to_string(p) + " is not prime");
  if (n == 0) return Valuation::infinite();
  return Valuation(ord(n, p));
}

Valuation p_valuation(std::int64_t n, std::uint64_t p) {
  return p_valuation(BigInt(static_cast<long>(n)), p);
}

namespace {

BigInt pollard_rho(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    BigInt x = 2, y = 2, d = 1;
    auto f = [&](const BigInt& v) {
      BigInt r = v * v + c;
      mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
      return r;
    };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      BigInt diff = x - y;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

void factor_into(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_rho(n);
  factor_into(d, out);
  factor_into(BigInt(n / d), out);
}

}  // namespace

std::vector<PrimePower> factor(const BigInt& n) {
  if (n == 0) throw ValidationError("factor: zero has no factorization");
  BigInt m = abs(n);
  std::vector<BigInt> primes;
  for (unsigned long p = 2; p < 100000 && m > 1; p += (p == 2 ? 1 : 2)) {
    if (static_cast<unsigned long>(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      primes.emplace_back(p);
      m /= p;
    }
  }
  factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> result;
  for (const auto& q : primes) {
    if (!result.empty() && result.back().prime == q) {
      ++result.back().exponent;
    } else {
      result.push_back({q, 1});
    }
  }
  return result;
}

std::vector<std::uint64_t> prime_divisors(std::int64_t n) {
  std::vector<std::uint64_t> out;
  for (const auto& pp : factor(BigInt(static_cast<long>(n)))) out.push_back(pp.prime.get_ui());
  return out;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t bound) {
  std::vector<std::uint32_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

bool is_squarefree(std::int64_t d) {
  if (d == 0) return false;
  for (const auto& pp : factor(BigInt(static_cast<long>(d)))) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

std::optional<BigInt> exact_sqrt(const BigInt& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<BigRational> exact_sqrt(const BigRational& q) {
  auto num = exact_sqrt(BigInt(q.get_num()));
  auto den = exact_sqrt(BigInt(q.get_den()));
  if (!num || !den) return std::nullopt;
  return make_rational(*num, *den);
}

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const BigInt& n) { return n.get_str(); }

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigRational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return BigRational(BigInt(s));
    return make_rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ValidationError("not a rational number: '" + s + "'");
  }
}

}  // namespace hb
