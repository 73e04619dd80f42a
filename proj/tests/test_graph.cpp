#include <set>

#include <gtest/gtest.h>

#include "gqw/graph.hpp"
#include "oracles.hpp"

using namespace gqw;

TEST(Graph, ArcsSortedAndReversible) {
  const Graph g(3, {{2, 3}, {1, 2}});
  const auto& arcs = g.arcs();
  ASSERT_EQ(arcs.size(), 4u);
  EXPECT_TRUE(std::is_sorted(arcs.begin(), arcs.end()));
  for (std::size_t a = 0; a < arcs.size(); ++a) EXPECT_EQ(arcs[g.reverse_arc(a)], arcs[a].reversed());
  EXPECT_EQ(g.degree(2), 2);
}

TEST(Graph, RejectsInvalid) {
  EXPECT_THROW(Graph(3, {{1, 2}}), InputError);            // disconnected
  EXPECT_THROW(Graph(2, {{1, 1}}), InputError);            // loop
  EXPECT_THROW(Graph(2, {{1, 2}, {2, 1}}), InputError);    // duplicate
  EXPECT_THROW(Graph(2, {{1, 3}}), InputError);            // range
}

TEST(Instance, ParsesFormat) {
  const auto inst = parse_instance("# tri\nn 3\ne 1 2\ne 2 3\ne 1 3\ntail 3 1/2\ntail 1 -1\nz +1\n");
  EXPECT_EQ(inst.graph().size(), 3u);
  EXPECT_EQ(inst.boundary(), (std::vector<Vertex>{3, 1}));
  EXPECT_EQ(inst.inflow()[0], make_rational(1, 2));
  EXPECT_EQ(inst.phase(), Phase::plus_one);
  EXPECT_EQ(inst.tilde_degree(3), 3);
  EXPECT_EQ(inst.tilde_degree(2), 2);
  EXPECT_EQ(parse_instance(format_instance(inst)).inflow(), inst.inflow());
}

TEST(Instance, ParseErrorsCarryLine) {
  try {
    parse_instance("n 3\ne 1 2\ne 2 x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_instance("n 2\ne 1 2\n"), InputError);          // no tail
  EXPECT_THROW(parse_instance("n 2\ne 1 2\ntail 1 1\ntail 1 0\n"), InputError);
  EXPECT_THROW(parse_instance("n 2\ne 1 2\ntail 1 1\nz 2\n"), InputError);
}

TEST(Bipartition, WitnessCycleIsOddAndClosed) {
  const Graph k3(3, {{1, 2}, {1, 3}, {2, 3}});
  const auto c = bipartition(k3);
  ASSERT_FALSE(c.bipartite());
  EXPECT_EQ(c.odd_cycle, (std::vector<Vertex>{1, 2, 3}));
  for (const auto& g : enumerate_connected(5)) {
    const auto check = bipartition(g);
    oracle::Edges e;
    for (const auto& x : g.edges()) e.emplace_back(x.u, x.v);
    EXPECT_EQ(check.bipartite(), !oracle::has_odd_cycle(5, e));
    if (check.bipartite()) {
      for (const auto& x : g.edges()) EXPECT_NE(check.partition->side[x.u], check.partition->side[x.v]);
    } else {
      const auto& cyc = check.odd_cycle;
      EXPECT_EQ(cyc.size() % 2, 1u);
      for (std::size_t i = 0; i < cyc.size(); ++i) EXPECT_TRUE(g.adjacent(cyc[i], cyc[(i + 1) % cyc.size()]));
    }
  }
}

TEST(Catalog, ConnectedCountsMatchBruteForce) {
  for (int n = 2; n <= 5; ++n) {
    // brute force: every edge subset, connectivity by BFS
    const int m = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> pairs;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);
    std::size_t connected = 0;
    for (int mask = 0; mask < (1 << m); ++mask) {
      oracle::Edges e;
      for (int k = 0; k < m; ++k)
        if (mask >> k & 1) e.push_back(pairs[k]);
      bool ok = true;
      for (int v = 2; v <= n; ++v) ok = ok && oracle::bfs_distance(n, e, 1, v) >= 0;
      connected += ok;
    }
    EXPECT_EQ(enumerate_connected(n).size(), connected) << n;
  }
}

TEST(Catalog, IsomorphismClassCounts) {
  const std::map<int, std::size_t> classes{{2, 1}, {3, 2}, {4, 6}, {5, 21}};
  for (auto [n, want] : classes) {
    std::set<std::uint64_t> seen;
    for (const auto& g : enumerate_connected(n)) seen.insert(canonical_form(g));
    EXPECT_EQ(seen.size(), want) << n;
  }
  const std::vector<std::size_t> trees{1, 1, 2, 3, 6, 11, 23};
  for (int n = 2; n <= 8; ++n) EXPECT_EQ(nonisomorphic_trees(n).size(), trees[n - 2]) << n;
}

TEST(Catalog, PairFormRespectsAutomorphisms) {
  const Graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  EXPECT_EQ(canonical_pair_form(c4, 1, 2), canonical_pair_form(c4, 3, 4));
  EXPECT_EQ(canonical_pair_form(c4, 1, 3), canonical_pair_form(c4, 2, 4));
  EXPECT_NE(canonical_pair_form(c4, 1, 2), canonical_pair_form(c4, 1, 3));
}
