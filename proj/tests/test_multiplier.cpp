#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"

using namespace nilmult;

namespace {

FgAbelianGroup z(long long n) { return FgAbelianGroup::cyclic(n); }

/// Sum over pairs i < j of Z_gcd(r_i, r_j): the fold with trivial M and M^(2) on every
/// cyclic factor only ever adds Tor terms.
FgAbelianGroup pairwise_tor_sum(const std::vector<long long>& r) {
  std::vector<Integer> gcds;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) gcds.push_back(std::gcd(r[i], r[j]));
  return FgAbelianGroup::from_cyclic_orders(gcds);
}

}  // namespace

TEST(CyclicFactors, Validation) {
  EXPECT_TRUE(CyclicFactors({2, 3, 5}).pairwise_coprime());
  EXPECT_FALSE(CyclicFactors({2, 4}).pairwise_coprime());
  EXPECT_TRUE(CyclicFactors({1, 1}).pairwise_coprime());
  EXPECT_THROW(CyclicFactors(std::vector<Integer>{}), precondition_error);
  EXPECT_THROW(CyclicFactors({2, -1}), precondition_error);
  EXPECT_THROW(CyclicFactors({0, 2}).require_finite(), precondition_error);
}

TEST(Abelianization, Examples) {
  EXPECT_EQ(abelianization({2, 3}), z(6));
  EXPECT_EQ(abelianization({2, 2}), FgAbelianGroup(0, {2, 2}));
  EXPECT_EQ(abelianization({1, 5}), z(5));
}

TEST(RhoLadder, Examples) {
  const auto l23 = rho_ladder({2, 3}, 3);
  EXPECT_EQ(l23.lattice(1), IntMatrix(2, {{2, 0}, {0, 3}}));
  EXPECT_EQ(l23.lattice(2), IntMatrix(1, {{1}}));
  EXPECT_EQ(rho_ladder({2, 2}, 2).lattice(2), IntMatrix(1, {{2}}));
  const auto l7 = rho_ladder({7}, 5);
  EXPECT_EQ(l7.lattice(1), IntMatrix(1, {{7}}));
  for (int n = 2; n <= 5; ++n) EXPECT_EQ(l7.lattice(n).rows(), 0u);
  EXPECT_THROW(rho_ladder({2, 3}, 1), precondition_error);
  EXPECT_THROW(l23.lattice(4), precondition_error);
  EXPECT_THROW(rho_ladder({0, 3}, 3), precondition_error);
}

TEST(RhoLadder, LiftInvariants) {
  for (auto f : std::vector<CyclicFactors>{{2, 3}, {2, 2}, {4, 6}, {2, 3, 5}}) {
    const int k = f.size() == 3 ? 4 : 5;
    const auto ladder = rho_ladder(f, k);
    const auto& ctx = ladder.context();
    for (int n = 1; n <= k; ++n) {
      const auto& layer = ladder.layer(n);
      ASSERT_EQ(layer.lifts.size(), layer.lattice.rows());
      ASSERT_EQ(hnf(layer.lattice), layer.lattice);
      for (std::size_t r = 0; r < layer.lifts.size(); ++r) {
        const auto& lift = layer.lifts[r];
        ASSERT_TRUE(lift.is_group_like());
        ASSERT_GE(min_positive_degree(lift).value_or(k + 1), n);
        ASSERT_EQ(ctx.block_coordinates(lift, n), layer.lattice.row(r));
      }
    }
  }
}

TEST(RhoSubgroup, AgreesWithLadderUpToWeightFive) {
  for (auto f : std::vector<CyclicFactors>{{2, 3}, {2, 2}, {3, 4}, {4, 6}, {3, 5}}) {
    const NilContext ctx(2, 5);
    const auto ladder = rho_ladder(f, ctx);
    for (int n = 1; n <= 5; ++n)
      ASSERT_EQ(layer_lattice(rho_subgroup(f, n, ctx), n), ladder.lattice(n)) << render_orders(f) << " n=" << n;
  }
  const NilContext ctx3(3, 4);
  for (auto f : std::vector<CyclicFactors>{{2, 3, 5}, {2, 2, 2}}) {
    const auto ladder = rho_ladder(f, ctx3);
    for (int n = 1; n <= 4; ++n)
      ASSERT_EQ(layer_lattice(rho_subgroup(f, n, ctx3), n), ladder.lattice(n)) << render_orders(f) << " n=" << n;
  }
}

TEST(RhoSubgroup, Examples) {
  const NilContext ctx(2, 4);
  const CyclicFactors f{2, 3};
  EXPECT_EQ(rho_subgroup(f, 1, ctx), normal_closure(relators(f, ctx), ctx));
  EXPECT_EQ(layer_lattice(rho_subgroup(f, 2, ctx), 2), rho_ladder(f, ctx).lattice(2));
  const NilContext ctx4(2, 4);
  EXPECT_EQ(layer_lattice(rho_subgroup({2, 2}, 3, ctx4), 3), rho_ladder({2, 2}, ctx4).lattice(3));
  EXPECT_THROW(rho_subgroup(f, 0, ctx), precondition_error);
}

TEST(TruncatedMultiplier, Examples) {
  EXPECT_TRUE(truncated_multiplier({2, 3}, 1, 3).quotient.is_trivial());
  EXPECT_TRUE(truncated_multiplier({2, 3}, 2, 4).quotient.is_trivial());
  const auto d = truncated_multiplier({2, 2}, 2, 4);
  EXPECT_EQ(d.quotient, z(2));
  EXPECT_TRUE(oracle::is_quotient_of(d.quotient, m2_free_product_cyclics({2, 2})));
  EXPECT_EQ(d.c, 2);
  EXPECT_EQ(d.k, 4);
  EXPECT_NE(d.truncation_note.find("gamma_5"), std::string::npos);
  EXPECT_EQ(d.ladder.size(), 4u);
}

TEST(TruncatedMultiplier, Preconditions) {
  EXPECT_THROW(truncated_multiplier({2, 2}, 2, 2), precondition_error);
  EXPECT_THROW(truncated_multiplier({2, 2}, 0, 3), precondition_error);
  EXPECT_THROW(truncated_multiplier({0, 2}, 1, 2), precondition_error);
  EXPECT_THROW(truncated_multiplier({2, 2, 2}, 1, 20), precondition_error);
}

TEST(TruncatedMultiplier, DenominatorInsideNumerator) {
  for (auto f : std::vector<CyclicFactors>{{2, 2}, {2, 4}, {2, 3}, {4, 6}, {3, 3}, {2, 2, 2}, {2, 3, 5}})
    for (int c = 1; c <= 3; ++c) {
      const int k = c + 1;
      if (f.size() == 3 && k > 4) continue;
      const auto r = truncated_multiplier(f, c, k);
      for (std::size_t i = 0; i < r.denominator.rows(); ++i)
        ASSERT_TRUE(express_in_hnf(r.numerator, r.denominator.row(i)).has_value()) << render_orders(f);
    }
}

TEST(TruncatedMultiplier, DepthMonotone) {
  for (auto f : std::vector<CyclicFactors>{{2, 2}, {2, 4}, {3, 3}})
    for (int c = 1; c <= 2; ++c) {
      FgAbelianGroup previous;
      for (int k = c + 1; k <= 5; ++k) {
        const auto q = truncated_multiplier(f, c, k).quotient;
        ASSERT_TRUE(oracle::is_quotient_of(previous, q)) << render_orders(f) << " c=" << c << " k=" << k;
        previous = q;
      }
    }
}

TEST(TruncatedMultiplier, SchurMultiplierAlwaysTrivial) {
  for (long long r = 2; r <= 6; ++r)
    for (long long s = 2; s <= 6; ++s) EXPECT_TRUE(truncated_multiplier({r, s}, 1, 3).quotient.is_trivial());
  EXPECT_TRUE(truncated_multiplier({2, 2, 2}, 1, 3).quotient.is_trivial());
}

TEST(TruncatedMultiplier, PermutationInvariance) {
  for (auto orders : std::vector<std::vector<long long>>{{2, 4}, {2, 2, 3}, {2, 3, 5}, {4, 2, 6}}) {
    const int k = 3;
    const CyclicFactors base(std::vector<Integer>(orders.begin(), orders.end()));
    const auto expected = truncated_multiplier(base, 2, k).quotient;
    auto perm = orders;
    std::sort(perm.begin(), perm.end());
    do {
      const CyclicFactors f(std::vector<Integer>(perm.begin(), perm.end()));
      ASSERT_EQ(truncated_multiplier(f, 2, k).quotient, expected) << render_orders(f);
      ASSERT_EQ(m2_free_product_cyclics(f), m2_free_product_cyclics(base)) << render_orders(f);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(TruncatedMultiplier, CoprimeLayersAgreeAtEveryWeight) {
  for (auto [f, k] : std::vector<std::pair<CyclicFactors, int>>{{{2, 3}, 6}, {{3, 4}, 5}, {{2, 3, 5}, 4}}) {
    const NilContext ctx(f.size(), k);
    for (const auto& cmp : layer_comparisons(f, ctx)) EXPECT_TRUE(cmp.equal()) << render_orders(f) << " n=" << cmp.weight;
  }
}

TEST(FormulaPath, SchurFreeProduct) {
  EXPECT_TRUE(schur_free_product({FgAbelianGroup(), FgAbelianGroup()}).is_trivial());
  EXPECT_EQ(schur_free_product({z(2), z(3)}), z(6));
  EXPECT_EQ(schur_free_product({FgAbelianGroup(1, {4})}), FgAbelianGroup(1, {4}));
}

TEST(FormulaPath, BurnsEllis) {
  const auto z2 = GroupData::cyclic(2), z3 = GroupData::cyclic(3);
  EXPECT_EQ(burns_ellis_m2(z2, z2), z(2));
  EXPECT_TRUE(direct_sum(z2.m2, z2.m2).is_trivial());
  EXPECT_TRUE(burns_ellis_m2(z2, z3).is_trivial());
  const GroupData g{FgAbelianGroup(0, {2, 4}), z(2), z(6)};
  EXPECT_EQ(burns_ellis_m2(g, GroupData::trivial()), g.m2);
  const auto parts = burns_ellis_summands(g, z2);
  EXPECT_EQ(parts.m1_g_tensor_h_ab, z(2));
  EXPECT_TRUE(parts.m1_h_tensor_g_ab.is_trivial());
  EXPECT_EQ(parts.tor_ab, FgAbelianGroup(0, {2, 2}));
  EXPECT_EQ(parts.total(), FgAbelianGroup(0, {2, 2, 2, 6}));
}

TEST(FormulaPath, FoldOverCyclicFactors) {
  EXPECT_TRUE(m2_free_product_cyclics({2, 3, 5}).is_trivial());
  EXPECT_EQ(m2_free_product_cyclics({2, 2}), z(2));
  EXPECT_EQ(m2_free_product_cyclics({2, 2, 2}), FgAbelianGroup(0, {2, 2, 2}));
  EXPECT_TRUE(m2_free_product_cyclics({7}).is_trivial());
  EXPECT_TRUE(m2_free_product_cyclics({0, 0}).is_trivial());
  EXPECT_TRUE(m2_free_product_cyclics({0, 6}).is_trivial());
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<long long> r(static_cast<std::size_t>(oracle::uniform(1, 4)));
    for (auto& v : r) v = oracle::uniform(1, 25);
    ASSERT_EQ(m2_free_product_cyclics(CyclicFactors(std::vector<Integer>(r.begin(), r.end()))), pairwise_tor_sum(r));
  }
}

TEST(Verifiers, IntersectionLayers) {
  const auto r = verify_intersection_layers({2, 3}, 4);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.checks.size(), 2u);
  EXPECT_TRUE(verify_intersection_layers({2, 2}, 3).checks.size() == 2);
  EXPECT_THROW(verify_intersection_layers({2, 3}, 2), precondition_error);
}

TEST(Verifiers, RhoIntersection) {
  EXPECT_TRUE(verify_rho_intersection({2, 3}, 3, 5).passed());
  EXPECT_TRUE(verify_rho_intersection({2, 3}, 1, 2).passed());
  EXPECT_THROW(verify_rho_intersection({2, 3}, 3, 3), precondition_error);
  EXPECT_THROW(verify_rho_intersection({2, 3}, 0, 3), precondition_error);
}

TEST(Verifiers, CoprimeTriviality) {
  const auto r = verify_coprime_triviality({2, 9}, 2, 4);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.checks.size(), 1u + 2 + 2);
  try {
    verify_coprime_triviality({2, 2}, 2, 4);
    FAIL() << "expected rejection";
  } catch (const precondition_error& e) {
    EXPECT_STREQ(e.what(), "orders not mutually coprime");
  }
  EXPECT_THROW(verify_coprime_triviality({2, 3}, 3, 3), precondition_error);
}
