#include <gtest/gtest.h>

#include <random>

#include "brute_span.hpp"
#include "hb/errors.hpp"
#include "hb/selmer.hpp"

using namespace hb;
using hb::testing::enumerate_span;
using hb::testing::invariants_by_counting;

namespace {

const std::vector<LocalCondition> kAllConditions{LocalCondition::kummer(),       LocalCondition::transverse(),
                                                 LocalCondition::full(),         LocalCondition::zero(),
                                                 LocalCondition::stringent(1),   LocalCondition::relaxed(1)};

bool satisfies(const ZmodRing& R, const ZVec& x, const SelmerStructureSpec& F) {
  for (std::size_t v = 0; v < F.places.size(); ++v) {
    const auto [i, j] = F.places[v].exponents(R.m);
    if (R.valuation(x[2 * v]) < i || R.valuation(x[2 * v + 1]) < j) return false;
  }
  return true;
}

// {x in L : x_v in F_v} by enumerating L.
hb::testing::Span brute_selmer(const SyntheticDualityModel& model, const SelmerStructureSpec& F, Eigen s) {
  hb::testing::Span out;
  for (const ZVec& x : enumerate_span(model.ring, model.L[s], model.dim()))
    if (satisfies(model.ring, x, F)) out.insert(x);
  return out;
}

}  // namespace

TEST(LocalConditions, DualIsOrthogonalComplement) {
  for (int m = 1; m <= 3; ++m) {
    const ZmodRing R(3, m);
    // p^k R is generated by p^k; for k = m it is zero.
    auto step = [&](int k) { return k >= m ? R.q : R.power_of_p(k); };
    for (const auto& c : kAllConditions) {
      if (c.t > m) continue;
      const LocalCondition d = dual_condition(c, m);
      const auto [i, j] = c.exponents(m);
      const auto [di, dj] = d.exponents(m);
      // Complement of p^i R e + p^j R f under <e, f> = 1, by enumeration.
      for (std::int64_t a = 0; a < R.q; ++a)
        for (std::int64_t b = 0; b < R.q; ++b) {
          bool orthogonal = true;
          for (std::int64_t x = 0; x < R.q && orthogonal; x += step(i))
            for (std::int64_t y = 0; y < R.q && orthogonal; y += step(j))
              orthogonal = R.sub(R.mul(a, y), R.mul(b, x)) == 0;
          const bool in_dual = R.valuation(a) >= di && R.valuation(b) >= dj;
          ASSERT_EQ(orthogonal, in_dual) << c.to_string() << " m=" << m << " (" << a << "," << b << ")";
        }
      EXPECT_TRUE(same_condition(dual_condition(d, m), c, m));
    }
  }
  EXPECT_TRUE(same_condition(LocalCondition::stringent(0), LocalCondition::kummer(), 2));
  EXPECT_TRUE(condition_contained(LocalCondition::zero(), LocalCondition::kummer(), 2));
  EXPECT_FALSE(condition_contained(LocalCondition::full(), LocalCondition::kummer(), 2));
}

TEST(Models, RandomModelsAreLagrangian) {
  std::mt19937_64 rng(3);
  for (auto [p, m] : {std::pair{3ULL, 1}, std::pair{3ULL, 2}, std::pair{5ULL, 1}}) {
    const auto model = random_model(p, m, 2, rng);
    EXPECT_NO_THROW(validate_model(model));
    for (int s = 0; s < 2; ++s) {
      const auto span = enumerate_span(model.ring, model.L[s], model.dim());
      EXPECT_EQ(hb::testing::log_size(model.ring, span.size()), m * 2);
      for (const auto& x : model.L[s])
        for (const auto& y : model.L[s]) EXPECT_EQ(pairing(model.ring, x, y), 0);
    }
  }
  SyntheticDualityModel bad = random_model(3, 1, 2, rng);
  bad.L[kPlus] = ZMat{{1, 0, 0, 0}, {0, 1, 0, 0}};
  EXPECT_THROW(validate_model(bad), ValidationError);
}

TEST(Lagrangians, CountAtPrimeLevel) {
  // Lagrangians of F_p^4: (p + 1)(p^2 + 1).
  EXPECT_EQ(all_lagrangians(ZmodRing(3, 1), 2).size(), 40U);
  EXPECT_EQ(all_lagrangians(ZmodRing(5, 1), 2).size(), 156U);
  EXPECT_EQ(all_lagrangians(ZmodRing(3, 1), 1).size(), 4U);
}

TEST(SelmerModule, MatchesEnumeration) {
  std::mt19937_64 rng(17);
  for (auto [p, m] : {std::pair{3ULL, 1}, std::pair{3ULL, 2}, std::pair{3ULL, 3}}) {
    const ZmodRing R(p, m);
    for (int trial = 0; trial < 20; ++trial) {
      const auto model = random_model(p, m, 2, rng);
      SelmerStructureSpec F;
      for (int v = 0; v < 2; ++v) F.places.push_back(kAllConditions[rng() % kAllConditions.size()]);
      for (auto& c : F.places)
        if (c.t > m) c.t = m;
      const SelmerModule H = selmer_module(model, F);
      for (Eigen s : {kPlus, kMinus}) {
        const auto brute = brute_selmer(model, F, s);
        EXPECT_EQ(H.invariants[s], invariants_by_counting(R, brute)) << F.to_string();
        EXPECT_EQ(enumerate_span(R, H.generators[s], model.dim()), brute);
        EXPECT_EQ(H.length(s), hb::testing::log_size(R, brute.size()));
      }
    }
  }
}

TEST(Structures, ModifyAndNest) {
  const auto F = uniform_structure(4, LocalCondition::kummer());
  const auto G = modify_structure(F, {0}, {1}, {2});
  EXPECT_EQ(G.places[0], LocalCondition::full());
  EXPECT_EQ(G.places[1], LocalCondition::zero());
  EXPECT_EQ(G.places[2], LocalCondition::transverse());
  EXPECT_EQ(G.places[3], LocalCondition::kummer());
  EXPECT_TRUE(is_nested(modify_structure(F, {}, {1}, {}), F, 1));
  EXPECT_THROW(static_cast<void>(modify_structure(F, {0}, {0}, {})), ValidationError);
}

TEST(GlobalDuality, RandomNestedPairs) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto model = random_model(3, 1 + trial % 3, 3, rng);
    const auto F = uniform_structure(3, LocalCondition::kummer());
    const auto lower = modify_structure(F, {}, {(trial + 1) % 3}, {});
    const auto upper = modify_structure(F, {trial % 3}, {}, {});
    EXPECT_TRUE(check_global_duality(model, lower, upper).passed()) << trial;
  }
}

TEST(SelmerLab, ExhaustiveAtThree) {
  const auto r = run_selmer_lab(3, 2, 30, 1);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_GT(r.models, 0);
  EXPECT_TRUE(r.passed()) << (r.failures.empty() ? "" : r.failures.front());
}

TEST(SelmerLab, RandomAtNineAndTwentySeven) {
  for (std::uint64_t pm : {9ULL, 27ULL}) {
    const auto r = run_selmer_lab(pm, 3, 40, 5);
    EXPECT_FALSE(r.exhaustive);
    EXPECT_EQ(r.models, 40);
    EXPECT_GT(r.replay_checks, 0);
    EXPECT_TRUE(r.passed()) << (r.failures.empty() ? "" : r.failures.front());
  }
  EXPECT_THROW(static_cast<void>(run_selmer_lab(8, 2, 1, 1)), ValidationError);
  EXPECT_THROW(static_cast<void>(run_selmer_lab(15, 2, 1, 1)), ValidationError);
}

TEST(SelmerLab, SeedDeterminism) {
  const auto a = run_selmer_lab(9, 2, 20, 42), b = run_selmer_lab(9, 2, 20, 42);
  EXPECT_EQ(a.duality_checks, b.duality_checks);
  EXPECT_EQ(a.lozenge_checks, b.lozenge_checks);
  EXPECT_EQ(a.replay_checks, b.replay_checks);
}
