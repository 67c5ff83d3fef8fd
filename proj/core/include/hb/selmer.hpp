#pragma once

// Selmer structures on synthetic duality models. Each place carries, per
// eigenspace, a plane R e + R f over R = Z/p^m with <e, f> = 1; the global
// image is a Lagrangian L of the orthogonal sum. Local conditions are the
// coordinate submodules p^i R e + p^j R f, so Selmer modules are
// {x in L : x_v in F_v for all v}.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hb/zmod_module.hpp"

namespace hb {

enum class LocalLabel { kummer, transverse, full, zero, stringent, relaxed };
std::string to_string(LocalLabel l);

/// stringent(t) = p^t R e; relaxed(t) = R e + p^{m-t} R f is its dual.
struct LocalCondition {
  LocalLabel label = LocalLabel::kummer;
  int t = 0;

  static LocalCondition kummer() { return {LocalLabel::kummer, 0}; }
  static LocalCondition transverse() { return {LocalLabel::transverse, 0}; }
  static LocalCondition full() { return {LocalLabel::full, 0}; }
  static LocalCondition zero() { return {LocalLabel::zero, 0}; }
  static LocalCondition stringent(int t) { return {LocalLabel::stringent, t}; }
  static LocalCondition relaxed(int t) { return {LocalLabel::relaxed, t}; }

  /// (i, j) with condition p^i R e + p^j R f.
  [[nodiscard]] std::pair<int, int> exponents(int m) const;
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const LocalCondition&, const LocalCondition&) = default;
};

/// Structurally equal conditions may carry different labels (stringent(0) is
/// kummer); compare with same_condition.
bool same_condition(const LocalCondition& a, const LocalCondition& b, int m);
/// a contained in b.
bool condition_contained(const LocalCondition& a, const LocalCondition& b, int m);
LocalCondition dual_condition(const LocalCondition& c, int m);

struct SelmerStructureSpec {
  std::vector<LocalCondition> places;
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const SelmerStructureSpec&, const SelmerStructureSpec&) = default;
};

enum Eigen { kPlus = 0, kMinus = 1 };

struct SyntheticDualityModel {
  ZmodRing ring{3, 1};
  int places = 0;
  /// Generators of L^+ and L^-; coordinates (e_1, f_1, e_2, f_2, ...).
  std::array<ZMat, 2> L;

  [[nodiscard]] std::size_t dim() const { return 2 * static_cast<std::size_t>(places); }
};

/// Throws ValidationError unless each L^s is isotropic of length m * places.
void validate_model(const SyntheticDualityModel& model);

/// Sum over places of e_v-coefficient of x times f_v-coefficient of y minus
/// the reverse.
std::int64_t pairing(const ZmodRing& R, const ZVec& x, const ZVec& y);

/// Random Lagrangian: a random symplectic map applied to the sum of
/// p^{a_i} R e_i + p^{m - a_i} R f_i with random a_i.
ZMat random_lagrangian(const ZmodRing& R, int places, std::mt19937_64& rng);
/// Every Lagrangian of (Z/p)^{2 places}, in canonical form; m must be 1.
std::vector<ZMat> all_lagrangians(const ZmodRing& R, int places);

SyntheticDualityModel random_model(std::uint64_t p, int m, int places, std::mt19937_64& rng);

/// L^s contains a free line inside the Kummer part and meets it in nothing
/// more; L^{-s} meets the Kummer part trivially.
SyntheticDualityModel core_vertex_model(std::uint64_t p, int m, int places, Eigen s, std::mt19937_64& rng);

SelmerStructureSpec uniform_structure(int places, LocalCondition c);
SelmerStructureSpec dual_structure(const SyntheticDualityModel& model, const SelmerStructureSpec& F);
/// Transverse at c, full at a, zero at b, F elsewhere; rejects overlaps.
SelmerStructureSpec modify_structure(const SelmerStructureSpec& F, const std::vector<int>& a,
                                     const std::vector<int>& b, const std::vector<int>& c);
bool is_nested(const SelmerStructureSpec& F, const SelmerStructureSpec& G, int m);

struct SelmerModule {
  std::array<ZMat, 2> generators;
  std::array<InvariantSeq, 2> invariants;
  [[nodiscard]] int length(Eigen s) const;
};

SelmerModule selmer_module(const SyntheticDualityModel& model, const SelmerStructureSpec& F);

struct DualityRecord {
  /// log_p sizes of H_G / H_F, of H_{F*} / H_{G*} and of the local quotient
  /// sum G_v / F_v.
  std::array<int, 2> image_g{}, image_f_dual{}, local_quotient{};
  std::array<bool, 2> pass{};
  [[nodiscard]] bool passed() const { return pass[0] && pass[1]; }
};

/// Checks that the images of H_G in sum G_v/F_v and of H_{F*} in
/// sum F*_v/G*_v are exact orthogonal complements. Requires F below G.
DualityRecord check_global_duality(const SyntheticDualityModel& model, const SelmerStructureSpec& F,
                                   const SelmerStructureSpec& G);

struct LozengeLengths {
  int a = 0, b = 0, c = 0, d = 0;
};

struct LozengeReport {
  /// Starred lengths are cokernels of the dual inclusions:
  /// a*: F^l(c)* in F(c)*, b*: F^l(c)* in F(cl)*, c*: F(c)* in F_l(c)*,
  /// d*: F(cl)* in F_l(c)*.
  std::array<LozengeLengths, 2> lengths, dual_lengths;
  std::array<bool, 2> bounds{}, sums{}, complementary{}, inequalities{}, intersections{};
  [[nodiscard]] bool passed() const;
};

/// Builds the lozenge at place l (where F must be kummer) for the set c of
/// places. Throws ComputationError on a non-cyclic cokernel.
LozengeReport lozenge(const SyntheticDualityModel& model, const SelmerStructureSpec& F, const std::vector<int>& c,
                      int ell);

struct StringentReplay {
  Eigen eps = kPlus;
  int m = 0, m_prime = 0, t = 0;
  InvariantSeq expected_eps, expected_other;
  InvariantSeq observed_eps, observed_other;
  [[nodiscard]] bool matches() const { return expected_eps == observed_eps && expected_other == observed_other; }
};

/// With F kummer everywhere and Inv H_F^eps = (m), Inv H_F^{-eps} = (), puts
/// stringent(t) at place v to get F0, reads m' from Inv H_{F0}^eps = (m') and
/// compares Inv H_{F0*} with (m, t + m' - m) and (t).
StringentReplay replay_stringent_duality(const SyntheticDualityModel& model, Eigen eps, int v, int t);

struct SelmerLabResult {
  std::uint64_t p = 0;
  int m = 0, places = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
  long models = 0;
  long duality_checks = 0, duality_failures = 0;
  long lozenge_checks = 0, lozenge_failures = 0;
  long replay_checks = 0, replay_failures = 0;
  std::vector<std::string> failures;  // first few, for diagnostics
  [[nodiscard]] bool passed() const { return duality_failures + lozenge_failures + replay_failures == 0; }
};

/// p^m = pm with p odd. Two places at pm = p enumerate every Lagrangian pair
/// and every labelling by kummer, transverse, full, zero; otherwise `trials`
/// seeded random models with random nested structures and lozenges. Both
/// modes also replay `trials` random core-vertex models.
SelmerLabResult run_selmer_lab(std::uint64_t pm, int places, long trials, std::uint64_t seed);

}  // namespace hb
