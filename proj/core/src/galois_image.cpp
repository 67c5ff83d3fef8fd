#include "hb/galois_image.hpp"

#include "hb/errors.hpp"
#include "hb/tate.hpp"

namespace hb {

namespace {
constexpr const char* kBorel = "borel_split_cartan";
constexpr const char* kNonsplit = "nonsplit_cartan_normalizer";
constexpr const char* kExceptional = "exceptional";

bool is_square_mod(std::int64_t v, std::int64_t p) { return kronecker_symbol(v, p) == 1; }
}  // namespace

std::string to_string(ImageStatus s) { return s == ImageStatus::surjective ? "surjective" : "inconclusive"; }

std::vector<std::string> required_slots(std::uint64_t p) {
  // PGL_2(F_3) is itself S_4, so the exceptional class is no obstruction at p = 3
  if (p == 3) return {kBorel, kNonsplit};
  return {kBorel, kNonsplit, kExceptional};
}

ImageVerdict mod_p_image_surjective(const EllipticCurveQ& e, std::uint64_t p, std::uint64_t sample_bound) {
  if (p % 2 == 0 || !is_prime(p)) throw ValidationError("mod_p_image_surjective: p must be an odd prime");
  if (mpz_divisible_ui_p(e.conductor().get_mpz_t(), p) != 0)
    throw ValidationError("mod_p_image_surjective: p = " + std::to_string(p) + " divides the conductor");
  const auto pi = static_cast<std::int64_t>(p);
  ImageVerdict v;
  v.p = p;
  v.sample_bound = sample_bound;
  const std::vector<std::string> slots = required_slots(p);
  const bool need_exceptional = slots.size() == 3;

  // excluded values of a^2/l: {0,1,2,4} and the roots of z^2 - 3z + 1
  std::vector<bool> excluded(p, false);
  for (std::int64_t z : {0, 1, 2, 4}) excluded[static_cast<std::size_t>(mod(z, pi))] = true;
  for (std::int64_t z = 0; z < pi; ++z)
    if (mod(z * z - 3 * z + 1, pi) == 0) excluded[static_cast<std::size_t>(z)] = true;

  const Invariants& inv = e.invariants();
  const std::vector<BigInt> psi3{inv.b8, 3 * inv.b6, 3 * inv.b4, inv.b2, 3};

  for (std::uint64_t ell = 2; ell <= sample_bound && v.witnesses.size() < slots.size(); ++ell) {
    if (ell == p || !is_prime(ell) || !e.is_good(ell)) continue;
    const std::int64_t a = mod(trace_of_frobenius(e, ell), pi);
    const std::int64_t l = mod(static_cast<std::int64_t>(ell), pi);
    const std::int64_t u = mod(a * a - 4 * l, pi);
    // trace-zero elements with nonsquare u exist in the split Cartan normalizer
    if (u != 0 && !is_square_mod(u, pi) && a != 0) v.witnesses.emplace(kBorel, ell);
    if (p == 3) {
      // Frobenius permutes the four roots of psi_3 through PGL_2(F_3) = S_4;
      // exactly one root means a 3-cycle, which no 2-group image contains
      if (count_roots_mod(psi3, ell) == 1) v.witnesses.emplace(kNonsplit, ell);
    } else if (u != 0 && is_square_mod(u, pi) && a != 0) {
      v.witnesses.emplace(kNonsplit, ell);
    }
    if (need_exceptional) {
      const std::int64_t ratio = mulmod(mulmod(a, a, pi), invmod(l, pi), pi);
      if (!excluded[static_cast<std::size_t>(ratio)]) v.witnesses.emplace(kExceptional, ell);
    }
  }
  for (const auto& s : slots)
    if (v.witnesses.count(s) == 0) v.missing.push_back(s);
  v.status = v.missing.empty() ? ImageStatus::surjective : ImageStatus::inconclusive;
  return v;
}

}  // namespace hb
