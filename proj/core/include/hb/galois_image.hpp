#pragma once

// One-sided surjectivity test for the mod-p Galois representation from
// Frobenius traces.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hb/curve.hpp"

namespace hb {

enum class ImageStatus { surjective, inconclusive };
std::string to_string(ImageStatus s);

struct ImageVerdict {
  ImageStatus status = ImageStatus::inconclusive;
  std::uint64_t p = 0;
  std::uint64_t sample_bound = 0;
  /// Witness prime per obstruction slot that has been ruled out.
  std::map<std::string, std::uint64_t> witnesses;
  /// Slots still open.
  std::vector<std::string> missing;
};

/// Obstruction slots required for p: "borel_split_cartan",
/// "nonsplit_cartan_normalizer" and, for p >= 5, "exceptional".
std::vector<std::string> required_slots(std::uint64_t p);

/// Scans good primes l <= sample_bound, l != p. Rejects even p and p | N.
/// For p >= 5 every slot is decided from (a_l mod p, l mod p). At p = 3 the
/// nonsplit-Cartan slot instead needs a prime where the 3-division
/// polynomial has exactly one root mod l.
ImageVerdict mod_p_image_surjective(const EllipticCurveQ& e, std::uint64_t p, std::uint64_t sample_bound);

}  // namespace hb
