#include <gtest/gtest.h>

#include "gqw/factors.hpp"
#include "oracles.hpp"

using namespace gqw;

namespace {

const Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
const Graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});

oracle::Edges edges_of(const Graph& g) {
  oracle::Edges e;
  for (const auto& x : g.edges()) e.emplace_back(x.u, x.v);
  return e;
}

}  // namespace

TEST(Factors, WorkedValues) {
  EXPECT_EQ(spanning_tree_count(c4), 4);
  EXPECT_EQ(two_forest_count(c4, 1, 4), 3);
  EXPECT_EQ(spanning_tree_count(k4), 16);
  const auto [i1, i2] = odd_unicyclic_sums(k4, 1);
  EXPECT_EQ(i1, 48);
  EXPECT_EQ(i2, 20);
  EXPECT_EQ(two_forest_count(Graph(2, {{1, 2}}), 1, 2), 1);
  EXPECT_EQ(two_forest_count(Graph(4, {{1, 2}, {2, 3}, {3, 4}}), 1, 4), 3);
}

TEST(Factors, K4Histogram) {
  const auto f = factor_counts(k4, 1, 4);
  // twelve connected odd-unicyclic factors; sixteen trees plus one triangle
  EXPECT_EQ(f.omega_histogram.odd_unicyclic, (std::map<int, Integer>{{1, 12}}));
  EXPECT_EQ(f.omega_histogram.tree_odd_unicyclic, (std::map<int, Integer>{{1, 16}, {2, 1}}));
}

TEST(Factors, DeletionContractionOracle) {
  for (int n = 2; n <= 5; ++n)
    for (const auto& g : enumerate_connected(n)) {
      const auto e = edges_of(g);
      EXPECT_EQ(enumerate_spanning_trees(g), oracle::spanning_trees_dc(n, e));
      for (Vertex v = 2; v <= n; ++v) EXPECT_EQ(enumerate_two_forests(g, 1, v), oracle::two_forests_dc(n, e, 1, v));
    }
}

TEST(Factors, LeibnizOracleForSignless) {
  for (int n = 2; n <= 5; ++n)
    for (const auto& g : enumerate_connected(n)) {
      const auto q = oracle::degree_plus(n, edges_of(g), +1);
      const auto sums = enumerate_odd_unicyclic(g, 1);
      EXPECT_EQ(Rational(sums.iota1), oracle::leibniz_det(q));
      EXPECT_EQ(Rational(sums.iota2), oracle::leibniz_det(oracle::drop(q, {0})));
      EXPECT_EQ(sums.iota1 == 0, bipartition(g).bipartite());
    }
}

TEST(Factors, MutationIsDetected) {
  FactorOptions opts;
  opts.mutate_signless = true;
  EXPECT_THROW(factor_counts(k4, 1, 2, opts), OracleMismatch);
  opts.mode = FactorMode::determinant;
  EXPECT_NO_THROW(factor_counts(k4, 1, 2, opts));
}

TEST(Factors, CycleIncidenceDeterminants) {
  for (int len = 3; len <= 9; ++len) {
    const Rational d = cycle_incidence_check(len);
    if (len % 2)
      EXPECT_EQ(abs(d), 2) << len;
    else
      EXPECT_EQ(d, 0) << len;
  }
}

TEST(ClosedForm, KnownValues) {
  EXPECT_EQ(closed_form_comfort(k4, 1, 4, Phase::minus_one), make_rational(5, 12));
  EXPECT_EQ(closed_form_comfort(k4, 1, 4, Phase::plus_one), make_rational(13, 8));
  EXPECT_EQ(closed_form_comfort(c4, 1, 4, Phase::minus_one), make_rational(19, 16));
  const Graph star(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  EXPECT_EQ(closed_form_comfort(star, 2, 3, Phase::minus_one), make_rational(2 + 4, 4));
}
