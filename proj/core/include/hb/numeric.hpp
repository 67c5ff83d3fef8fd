#pragma once

// Exact integer arithmetic helpers: Kronecker symbols, valuations, primality
// and factorization. BigInt/BigRational are GMP's C++ classes; mpq_class keeps
// values canonical (lowest terms, positive denominator) after canonicalize().

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hb {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// p-adic valuation of an integer; infinite exactly for 0.
class Valuation {
 public:
  constexpr explicit Valuation(int v) : value_(v) {}
  static constexpr Valuation infinite() { return Valuation(); }

  [[nodiscard]] constexpr bool is_infinite() const { return !value_.has_value(); }
  /// Throws std::logic_error when infinite.
  [[nodiscard]] int value() const;

  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
  /// Finite values order as integers; infinity is larger than all of them.
  friend constexpr bool operator<(const Valuation& a, const Valuation& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return *a.value_ < *b.value_;
  }

  [[nodiscard]] std::string to_string() const;

 private:
  constexpr Valuation() = default;
  std::optional<int> value_;
};

/// Kronecker symbol (a|n), extended to n < 0 and even n. Throws
/// ValidationError for n = 0.
int kronecker_symbol(std::int64_t a, std::int64_t n);
int kronecker_symbol(const BigInt& a, const BigInt& n);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);
bool is_prime(const BigInt& n);

/// ord_p(n). Throws ValidationError if p is not prime.
Valuation p_valuation(const BigInt& n, std::uint64_t p);
Valuation p_valuation(std::int64_t n, std::uint64_t p);

/// Finite valuation of a nonzero integer, no primality check (internal hot path).
int ord(const BigInt& n, std::uint64_t p);
int ord(std::int64_t n, std::uint64_t p);

struct PrimePower {
  BigInt prime;
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Factorization of |n| (n != 0) into ascending prime powers, by trial division
/// followed by Pollard rho on the cofactor.
std::vector<PrimePower> factor(const BigInt& n);
std::vector<std::uint64_t> prime_divisors(std::int64_t n);

/// Primes in [2, bound], ascending.
std::vector<std::uint32_t> primes_up_to(std::uint32_t bound);

std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t m);
/// Inverse of a mod m; throws InternalError when not invertible.
std::int64_t invmod(std::int64_t a, std::int64_t m);

/// True iff d is squarefree and nonzero.
bool is_squarefree(std::int64_t d);

/// Integer square root test: returns r >= 0 with r^2 = n, or nullopt.
std::optional<BigInt> exact_sqrt(const BigInt& n);
std::optional<BigRational> exact_sqrt(const BigRational& q);

BigRational make_rational(const BigInt& num, const BigInt& den);
std::string to_string(const BigRational& q);
std::string to_string(const BigInt& n);
/// Parses "n" or "n/d".
BigRational parse_rational(const std::string& s);

}  // namespace hb
