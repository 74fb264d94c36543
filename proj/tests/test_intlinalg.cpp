#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace nilmult;

namespace {

bool is_hermite(const IntMatrix& h) {
  const auto pivots = hnf_pivots(h);
  if (pivots.size() != h.rows()) return false;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (i && pivots[i] <= pivots[i - 1]) return false;
    if (h(i, pivots[i]) <= 0) return false;
    for (std::size_t j = 0; j < pivots[i]; ++j)
      if (h(i, j) != 0) return false;
    for (std::size_t r = 0; r < i; ++r)
      if (h(r, pivots[i]) < 0 || h(r, pivots[i]) >= h(i, pivots[i])) return false;
  }
  return true;
}

}  // namespace

TEST(Hermite, FormTransformAndLattice) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = static_cast<std::size_t>(oracle::uniform(0, 5));
    const auto cols = static_cast<std::size_t>(oracle::uniform(1, 5));
    const auto m = oracle::random_matrix(rows, cols, 9);
    const auto d = hermite_decomposition(m);
    ASSERT_TRUE(is_hermite(d.form));
    if (rows) {
      ASSERT_EQ(d.transform * m, d.form);
    }
    for (std::size_t i = 0; i < rows; ++i) ASSERT_TRUE(express_in_hnf(d.form, m.row(i)).has_value());
    ASSERT_EQ(hnf(d.form), d.form);
    // Canonical: any unimodular recombination of the rows has the same form.
    if (rows) {
      ASSERT_EQ(hnf(oracle::random_unimodular(rows) * m), d.form);
    }
  }
}

TEST(Hermite, ExpressRejectsNonLatticeVectors) {
  const IntMatrix h(2, {{2, 1}, {0, 3}});
  EXPECT_EQ(express_in_hnf(h, {4, 5}), (std::vector<Integer>{2, 1}));
  EXPECT_FALSE(express_in_hnf(h, {1, 0}).has_value());
  EXPECT_FALSE(express_in_hnf(h, {2, 2}).has_value());
  EXPECT_EQ(rank(IntMatrix(2, {{1, 2}, {2, 4}})), 1u);
}

TEST(Smith, MatchesDeterminantalDivisors) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_matrix(static_cast<std::size_t>(oracle::uniform(1, 4)),
                                         static_cast<std::size_t>(oracle::uniform(1, 4)), 12);
    ASSERT_EQ(snf(m), oracle::determinantal_invariants(m));
  }
}

TEST(Smith, UnimodularInvariance) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = static_cast<std::size_t>(oracle::uniform(1, 5));
    const auto cols = static_cast<std::size_t>(oracle::uniform(1, 5));
    const auto m = oracle::random_matrix(rows, cols, 10);
    const auto u = oracle::random_unimodular(rows);
    // Column operations as the transpose of row operations.
    const auto v0 = oracle::random_unimodular(cols);
    IntMatrix v(cols, cols);
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) v(i, j) = v0(j, i);
    ASSERT_EQ(snf(u * m * v), snf(m));
  }
}

TEST(Smith, DivisibilityChainAndExamples) {
  EXPECT_EQ(snf(IntMatrix::diagonal({2, 3})), (std::vector<Integer>{1, 6}));
  EXPECT_EQ(snf(IntMatrix::diagonal({4, 6})), (std::vector<Integer>{2, 12}));
  EXPECT_EQ(snf(IntMatrix(2, {{0, 0}, {0, 0}})), std::vector<Integer>{});
}

TEST(FgAbelianGroup, CanonicalForms) {
  EXPECT_EQ(FgAbelianGroup::from_cyclic_orders({2, 3}), FgAbelianGroup(0, {6}));
  EXPECT_EQ(FgAbelianGroup::from_cyclic_orders({2, 2}), FgAbelianGroup(0, {2, 2}));
  EXPECT_EQ(FgAbelianGroup::from_cyclic_orders({1, 5}), FgAbelianGroup::cyclic(5));
  EXPECT_EQ(FgAbelianGroup::from_cyclic_orders({0, 4, 1}), FgAbelianGroup(1, {4}));
  EXPECT_TRUE(FgAbelianGroup::cyclic(1).is_trivial());
  EXPECT_THROW(FgAbelianGroup(0, {6, 2}), precondition_error);
  EXPECT_THROW(FgAbelianGroup(0, {1}), precondition_error);
  EXPECT_THROW(FgAbelianGroup(0, {2, 3}), precondition_error);
  EXPECT_EQ(render(FgAbelianGroup()), "1");
  EXPECT_EQ(render(FgAbelianGroup(2, {2, 6})), "Z^2 + Z_2 + Z_6");
  EXPECT_EQ(render(FgAbelianGroup(1, {})), "Z");
  EXPECT_EQ(FgAbelianGroup(0, {2, 6}).torsion_order(), 12);
}

TEST(FgAbelianGroup, LatticeQuotient) {
  const IntMatrix a(2, {{1, 0}, {0, 1}});
  const IntMatrix b(2, {{2, 0}, {0, 2}});
  EXPECT_EQ(lattice_quotient(a, b), FgAbelianGroup(0, {2, 2}));
  EXPECT_EQ(lattice_quotient(a, IntMatrix(2, {{2, 0}})), FgAbelianGroup(1, {2}));
  EXPECT_TRUE(lattice_quotient(b, b).is_trivial());
  EXPECT_THROW(lattice_quotient(b, a), consistency_error);
}

TEST(FgAbelianGroup, DirectSumTensorTorExamples) {
  const auto z2 = FgAbelianGroup::cyclic(2), z3 = FgAbelianGroup::cyclic(3), z = FgAbelianGroup::cyclic(0);
  EXPECT_EQ(direct_sum(z2, z3), FgAbelianGroup::cyclic(6));
  EXPECT_EQ(tensor(z2, z2), z2);
  EXPECT_TRUE(tensor(z2, z3).is_trivial());
  EXPECT_EQ(tensor(z, FgAbelianGroup(0, {4})), FgAbelianGroup(0, {4}));
  EXPECT_EQ(tensor(z, z), z);
  EXPECT_EQ(tor(z2, z2), z2);
  EXPECT_TRUE(tor(z, FgAbelianGroup(0, {4})).is_trivial());
  EXPECT_EQ(tor(FgAbelianGroup(0, {2, 2}), z2), FgAbelianGroup(0, {2, 2}));
  EXPECT_EQ(tor(FgAbelianGroup::cyclic(4), FgAbelianGroup::cyclic(6)), z2);
}

TEST(FgAbelianGroup, TensorAndTorAgainstBruteForce) {
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_finite_abelian(36);
    const auto b = oracle::random_finite_abelian(36);
    std::vector<Integer> ao(a.orders.begin(), a.orders.end()), bo(b.orders.begin(), b.orders.end());
    const auto ga = FgAbelianGroup::from_cyclic_orders(ao);
    const auto gb = FgAbelianGroup::from_cyclic_orders(bo);
    ASSERT_EQ(ga.invariant_factors(), oracle::canonical_factors(a));
    ASSERT_EQ(tensor(ga, gb).invariant_factors(), oracle::presentation_tensor(a, b));
    ASSERT_EQ(tor(ga, gb).invariant_factors(), oracle::brute_force_tor(a, b));
    ASSERT_EQ(tor(ga, gb), tor(gb, ga));
  }
}
