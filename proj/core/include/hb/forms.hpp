#pragma once

// Positive definite binary quadratic forms [a, b, c] = a x^2 + b xy + c y^2.

#include <cstdint>
#include <string>
#include <vector>

#include "hb/numeric.hpp"

namespace hb {

struct QuadForm {
  BigInt a, b, c;

  [[nodiscard]] BigInt discriminant() const { return b * b - 4 * a * c; }
  [[nodiscard]] bool is_primitive() const;
  [[nodiscard]] bool is_reduced() const;
  [[nodiscard]] BigInt evaluate(const BigInt& x, const BigInt& y) const { return a * x * x + b * x * y + c * y * y; }
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const QuadForm&, const QuadForm&) = default;
  friend auto operator<=>(const QuadForm& l, const QuadForm& r) {
    if (auto c = cmp(l.a, r.a); c != 0) return c <=> 0;
    if (auto c = cmp(l.b, r.b); c != 0) return c <=> 0;
    return cmp(l.c, r.c) <=> 0;
  }
};

/// Unique reduced form equivalent to a positive definite form.
QuadForm reduce(const QuadForm& f);

/// Image of f under (x, y) -> (p x + q y, r x + s y), ps - qr = 1.
QuadForm act(const QuadForm& f, const BigInt& p, const BigInt& q, const BigInt& r, const BigInt& s);

bool is_fundamental_discriminant(std::int64_t disc);

/// Reduced primitive forms of a negative discriminant, sorted; rejects
/// discriminants that are nonnegative or not 0, 1 mod 4.
std::vector<QuadForm> reduced_forms(std::int64_t disc);
std::size_t class_number(std::int64_t disc);

/// Fundamental -D, 0 < D <= bound, with every prime of N split; ascending D.
std::vector<std::int64_t> heegner_discriminants(std::uint64_t N, std::int64_t bound);

}  // namespace hb
