#include <gtest/gtest.h>

#include "genus/rank1.hpp"
#include "genus/sample.hpp"
#include "oracles.hpp"

using namespace genus;
using namespace genus::rank1;

namespace {

PartitionFamily integers() { return PartitionFamily::singletons(PrimeSet::all(), PrimeSet::none()); }

AutFamily1 tail_power(int k) { return AutFamily1(integers(), {}, TailIndexPrimePower{k}); }

bool all_pass_named(const std::vector<PropertyResult>& rs) { return all_pass(rs) && rs.size() >= 3; }

}  // namespace

TEST(Rank1Bounded, Examples) {
  auto id = AutFamily1(integers());
  auto b = is_bounded(id);
  EXPECT_TRUE(b.holds);
  EXPECT_EQ(b.s, Integer(1));

  EXPECT_FALSE(is_bounded(tail_power(1)).holds);
  EXPECT_FALSE(is_bounded(tail_power(1)).witness.empty());

  AutFamily1 two_five(integers(), {{2, Rational(3, 2)}, {5, Rational(5)}}, TailIdentity{});
  auto d = is_bounded(two_five);
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.s, Integer(10));
}

TEST(Rank1BoundedAbove, Examples) {
  auto d = is_bounded_above(tail_power(-1));
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.s, Integer(1));
  EXPECT_FALSE(is_bounded(tail_power(-1)).holds);
  EXPECT_FALSE(is_bounded_above(tail_power(1)).holds);
  EXPECT_TRUE(is_bounded_above(AutFamily1(integers())).holds);
}

TEST(Rank1Bounded, MinimalSOverValuationScan) {
  // Two-sided: s = prod p^|v_p(alpha_p)| over residual primes; one-sided: only positive valuations.
  AutFamily1 a(integers(), {{2, Rational(1, 4)}, {3, Rational(9, 5)}, {7, Rational(2, 7)}}, TailIdentity{});
  EXPECT_EQ(is_bounded(a).s, Integer(4 * 9 * 7));
  EXPECT_EQ(is_bounded_above(a).s, Integer(9));
}

TEST(Rank1Pullback, Examples) {
  EXPECT_TRUE(pullback_rank1(tail_power(1)).trivial());

  AutFamily1 two_five(integers(), {{2, Rational(3, 2)}, {5, Rational(5)}}, TailIdentity{});
  auto h = pullback_rank1(two_five);
  EXPECT_FALSE(h.trivial());
  EXPECT_FALSE(h.tail_infinite());
  EXPECT_TRUE(is_finitely_generated(h).finitely_generated);

  auto h2 = pullback_rank1(AutFamily1(integers(), {{2, Rational(3, 2)}}, TailIdentity{}));
  EXPECT_EQ(h2.requirement(2), -1);
  EXPECT_EQ(h2.exceptions(), (std::map<Prime, int>{{2, -1}}));
  for (Prime p : {3, 5, 7, 11}) EXPECT_EQ(h2.requirement(p), 0);
}

TEST(Rank1Pullback, BruteForceMembership) {
  std::vector<AutFamily1> cases{
      AutFamily1(integers(), {{2, Rational(3, 2)}}, TailIdentity{}),
      AutFamily1(integers(), {{3, Rational(1, 9)}, {5, Rational(25, 7)}}, TailIdentity{}),
      tail_power(-1),
  };
  for (const auto& a : cases) {
    auto h = pullback_rank1(a);
    auto alpha_at = [&](std::uint64_t p) { return a.alpha(p); };
    for (int num = -64; num <= 64; ++num)
      for (int den = 1; den <= 64; ++den) {
        Rational x(num, den);
        bool expect = oracle::pullback_contains(
            x, alpha_at, [](std::uint64_t) { return false; }, [](std::uint64_t) { return true; }, 70);
        ASSERT_EQ(h.contains(x), expect) << a.str() << " at " << to_string(x);
      }
  }
}

TEST(Rank1Pullback, IdentityIsZeroSequence) {
  for (const auto& f : {integers(), PartitionFamily::singletons(PrimeSet::finite({2, 3, 5}), PrimeSet::finite({3}))})
    EXPECT_EQ(pullback_rank1(AutFamily1(f)), HeightSequence::zero(f.t(), f.s()));
}

TEST(Rank1Iso, Examples) {
  auto z = HeightSequence::zero(PrimeSet::all(), PrimeSet::none());
  auto same = rank1_iso(z, z);
  EXPECT_TRUE(same.iso);
  EXPECT_EQ(same.lambda, Rational(1));

  HeightSequence half(PrimeSet::all(), PrimeSet::none(), {{2, -1}});
  auto d = rank1_iso(half, z);
  EXPECT_TRUE(d.iso);
  EXPECT_EQ(d.lambda, Rational(1, 2));
  // lambda * Z = (1/2)Z: multiplication check
  for (int n = -20; n <= 20; ++n) {
    EXPECT_TRUE(half.contains(*d.lambda * n));
    EXPECT_EQ(z.contains(Rational(n, 2)), half.contains(*d.lambda * Rational(n, 2)));
  }

  EXPECT_FALSE(rank1_iso(HeightSequence::trivial_group(PrimeSet::all(), PrimeSet::none()), z).iso);
}

TEST(Rank1FiniteGeneration, Examples) {
  EXPECT_TRUE(is_finitely_generated(HeightSequence::zero(PrimeSet::all(), PrimeSet::none())).finitely_generated);
  EXPECT_FALSE(is_finitely_generated(pullback_rank1(tail_power(-1))).finitely_generated);
  AutFamily1 b(integers(), {{7, Rational(7, 3)}}, TailIdentity{});
  EXPECT_TRUE(is_finitely_generated(pullback_rank1(b)).finitely_generated);
  EXPECT_THROW(is_finitely_generated(pullback_rank1(tail_power(1))), Error);
}

TEST(Rank1Classes, Examples) {
  AutFamily1 b(integers(), {{2, Rational(3, 2)}, {5, Rational(5)}}, TailIdentity{});
  EXPECT_TRUE(genus_class(b).is_zero());
  EXPECT_TRUE(genus_class(AutFamily1(integers())).is_zero());

  EXPECT_FALSE(double_coset_class(tail_power(-1)) == double_coset_class(AutFamily1(integers())));
  EXPECT_FALSE(rank1_iso(pullback_rank1(tail_power(-1)), pullback_rank1(AutFamily1(integers()))).iso);

  AutFamily1 changed(integers(), {{2, Rational(3, 2)}, {5, Rational(1, 25)}}, TailIdentity{});
  EXPECT_EQ(double_coset_class(b), double_coset_class(changed));
  auto lambda = left_action_witness(b, changed);
  ASSERT_TRUE(lambda);
  // lambda * alpha_i and beta_i agree in valuation at every residual prime
  for (Prime p : {2, 3, 5, 7, 11})
    EXPECT_EQ(valuation(*lambda * b.alpha(p), p), valuation(changed.alpha(p), p));

  EXPECT_THROW(genus_class(tail_power(-1)), Error);
  EXPECT_THROW(double_coset_class(tail_power(1)), Error);
  try {
    genus_class(tail_power(-1));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
}

TEST(Rank1Localization, Examples) {
  for (Prime p : {2, 3, 7}) {
    EXPECT_TRUE(all_pass_named(verify_localization_properties(tail_power(-1), p)));
    EXPECT_TRUE(all_pass_named(verify_localization_properties(AutFamily1(integers()), p)));
    auto bad = verify_localization_properties(tail_power(1), p);
    EXPECT_FALSE(all_pass(bad));
  }
}

TEST(Rank1Text, CanonicalForms) {
  AutFamily1 b(integers(), {{5, Rational(5)}, {2, Rational(3, 2)}}, TailIdentity{});
  EXPECT_EQ(b.str(), "aut(singletons(all,{}); tail=id; 2 -> 3/2, 5 -> 5)");
  EXPECT_EQ(tail_power(-1).str(), "aut(singletons(all,{}); tail=p^-1)");
  EXPECT_EQ(ExtGenusClass(pullback_rank1(tail_power(-2))).str(), "[tail -2]");
}

TEST(Rank1Validation, SUnits) {
  auto f = PartitionFamily::singletons(PrimeSet::all(), PrimeSet::finite({2}));
  EXPECT_THROW(AutFamily1(f, {{3, Rational(2)}}, TailIdentity{}), Error);
  EXPECT_THROW(AutFamily1(f, {}, TailConstant{Rational(1, 2)}), Error);
  EXPECT_NO_THROW(AutFamily1(f, {{3, Rational(3, 5)}}, TailIdentity{}));
}

// --- properties ---------------------------------------------------------------------

TEST(Rank1Property, BoundedImpliesBoundedAboveBothWays) {
  sample::Rng rng(21);
  for (const auto& f : {integers(), PartitionFamily::singletons(PrimeSet::all(), PrimeSet::finite({3}))})
    for (int k = 0; k < 200; ++k) {
      auto a = sample::random_bounded_above(rng, f);
      if (!is_bounded(a).holds) continue;
      EXPECT_TRUE(is_bounded_above(a).holds) << a.str();
      EXPECT_TRUE(is_bounded_above(a.inverse()).holds) << a.str();
    }
}

TEST(Rank1Property, ConstantFamiliesBounded) {
  sample::Rng rng(22);
  for (const auto& f : {integers(), PartitionFamily::singletons(PrimeSet::all(), PrimeSet::finite({2, 3}))})
    for (int k = 0; k < 200; ++k) {
      auto beta = sample::random_rational(rng, sample::unit_pool(f, 40));
      AutFamily1 a(f, {}, TailConstant{beta});
      Integer expect = 1;
      for (auto [p, e] : oracle::trial_factor(static_cast<std::uint64_t>(abs(numerator(beta) * denominator(beta)))))
        if (!f.s().contains(p)) expect *= ipow(Integer(p), static_cast<unsigned>(std::abs(oracle::valuation(beta, p))));
      auto d = is_bounded(a);
      ASSERT_TRUE(d.holds) << a.str();
      EXPECT_EQ(*d.s, expect) << a.str();
    }
}

TEST(Rank1Property, GenusTriviality) {
  sample::Rng rng(23);
  auto f = integers();
  for (int k = 0; k < 200; ++k) {
    auto a = sample::random_bounded(rng, f);
    EXPECT_TRUE(rank1_iso(pullback_rank1(a), HeightSequence::zero(f.t(), f.s())).iso) << a.str();
  }
}

TEST(Rank1Property, DoubleCosetSoundness) {
  sample::Rng rng(24);
  auto f = integers();
  for (int k = 0; k < 300; ++k) {
    auto a = sample::random_bounded_above(rng, f), b = sample::random_bounded_above(rng, f);
    bool same = double_coset_class(a) == double_coset_class(b);
    EXPECT_EQ(same, rank1_iso(pullback_rank1(a), pullback_rank1(b)).iso) << a.str() << " vs " << b.str();
  }
}

TEST(Rank1Property, MonoidRelationIsEquivalence) {
  // Relation a ~ b iff some lambda moves a onto b up to local automorphisms.
  sample::Rng rng(25);
  auto f = integers();
  std::vector<AutFamily1> xs;
  for (int k = 0; k < 30; ++k) xs.push_back(sample::random_bounded_above(rng, f));
  auto rel = [](const AutFamily1& a, const AutFamily1& b) { return left_action_witness(a, b).has_value(); };
  for (const auto& a : xs) {
    EXPECT_TRUE(rel(a, a));
    for (const auto& b : xs) {
      EXPECT_EQ(rel(a, b), rel(b, a));
      for (const auto& c : xs)
        if (rel(a, b) && rel(b, c)) EXPECT_TRUE(rel(a, c));
    }
  }
}
