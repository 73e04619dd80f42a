#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gqw/errors.hpp"
#include "gqw/graph.hpp"
#include "gqw/matrix.hpp"
#include "gqw/potential.hpp"
#include "gqw/rational.hpp"

namespace gqw {

/// Component-count tallies: omega -> number of factors with that many
/// components, per family.
struct OmegaHistogram {
  std::map<int, Integer> odd_unicyclic;       ///< C_o
  std::map<int, Integer> tree_odd_unicyclic;  ///< TC_o

  friend bool operator==(const OmegaHistogram&, const OmegaHistogram&) = default;
};

struct FactorCounts {
  Integer chi1;   ///< spanning trees
  Integer chi2;   ///< two-tree spanning forests separating u1 and un
  Integer iota1;  ///< sum of 4^omega over odd-unicyclic factors
  Integer iota2;  ///< sum of 4^(omega - 1) over tree-plus-odd-unicyclic factors
  std::size_t edge_count = 0;
  OmegaHistogram omega_histogram;  ///< filled only by enumeration
};

enum class FactorMode {
  determinant,    ///< matrix minors only
  cross_checked,  ///< minors and subset enumeration, compared exactly
};

struct FactorOptions {
  FactorMode mode = FactorMode::cross_checked;
  bool mutate_signless = false;  ///< test hook: use D - M where Q = D + M belongs
};

namespace detail {

inline Integer to_integer(const Rational& x, const char* what) {
  if (x.get_den() != 1) throw OracleMismatch(std::string(what) + " determinant is not an integer");
  return x.get_num();
}

inline std::size_t index_of(Vertex v) { return static_cast<std::size_t>(v - 1); }

/// Next subset with the same popcount (Gosper).
inline std::uint64_t next_combination(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

/// Calls f(mask) for every k-subset of m elements.
template <class F>
void for_each_subset(std::size_t m, std::size_t k, F&& f) {
  if (m > 62) throw PreconditionError("subset enumeration limited to 62 edges");
  if (k > m) return;
  if (k == 0) {
    f(std::uint64_t{0});
    return;
  }
  const std::uint64_t end = std::uint64_t{1} << m;
  for (std::uint64_t x = (std::uint64_t{1} << k) - 1; x < end; x = next_combination(x)) f(x);
}

/// Components of the spanning subgraph given by an edge mask.
struct SubgraphShape {
  std::vector<int> component;        ///< per vertex (0-indexed), component id
  std::vector<int> vertex_count;     ///< per component
  std::vector<int> edge_count;       ///< per component
  std::vector<int> core_count;       ///< per component, vertices left after leaf stripping

  int components() const { return static_cast<int>(vertex_count.size()); }
  bool tree(int c) const { return edge_count[c] == vertex_count[c] - 1; }
  bool odd_unicyclic(int c) const { return edge_count[c] == vertex_count[c] && core_count[c] % 2 == 1; }
};

inline SubgraphShape shape_of(const Graph& g, std::uint64_t mask) {
  const int n = g.order();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> deg(n, 0);
  std::vector<std::vector<int>> adj(n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(mask >> k & 1)) continue;
    const int u = g.edges()[k].u - 1, v = g.edges()[k].v - 1;
    parent[find(u)] = find(v);
    ++deg[u];
    ++deg[v];
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  SubgraphShape s;
  s.component.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (id_of_root[r] < 0) {
      id_of_root[r] = s.components();
      s.vertex_count.push_back(0);
      s.edge_count.push_back(0);
      s.core_count.push_back(0);
    }
    s.component[v] = id_of_root[r];
    ++s.vertex_count[s.component[v]];
  }
  for (std::size_t k = 0; k < g.size(); ++k)
    if (mask >> k & 1) ++s.edge_count[s.component[g.edges()[k].u - 1]];

  // strip degree <= 1 vertices until only cycles remain
  std::vector<bool> removed(n, false);
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (deg[v] <= 1) stack.push_back(v);
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (removed[v]) continue;
    removed[v] = true;
    for (int w : adj[v])
      if (!removed[w] && --deg[w] <= 1) stack.push_back(w);
  }
  for (int v = 0; v < n; ++v)
    if (!removed[v]) ++s.core_count[s.component[v]];
  return s;
}

inline Integer power_of_four(int e) {
  Integer p = 1;
  for (int i = 0; i < e; ++i) p *= 4;
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Enumeration routes

inline Integer enumerate_spanning_trees(const Graph& g) {
  Integer count = 0;
  detail::for_each_subset(g.size(), static_cast<std::size_t>(g.order() - 1), [&](std::uint64_t mask) {
    if (detail::shape_of(g, mask).components() == 1) ++count;
  });
  return count;
}

inline Integer enumerate_two_forests(const Graph& g, Vertex u1, Vertex un) {
  Integer count = 0;
  detail::for_each_subset(g.size(), static_cast<std::size_t>(g.order() - 2), [&](std::uint64_t mask) {
    const auto s = detail::shape_of(g, mask);
    if (s.components() == 2 && s.component[u1 - 1] != s.component[un - 1]) ++count;
  });
  return count;
}

struct OddUnicyclicSums {
  Integer iota1;
  Integer iota2;
  OmegaHistogram histogram;
};

inline OddUnicyclicSums enumerate_odd_unicyclic(const Graph& g, Vertex u1) {
  OddUnicyclicSums out;
  const auto n = static_cast<std::size_t>(g.order());
  detail::for_each_subset(g.size(), n, [&](std::uint64_t mask) {
    const auto s = detail::shape_of(g, mask);
    for (int c = 0; c < s.components(); ++c)
      if (!s.odd_unicyclic(c)) return;
    out.iota1 += detail::power_of_four(s.components());
    ++out.histogram.odd_unicyclic[s.components()];
  });
  detail::for_each_subset(g.size(), n - 1, [&](std::uint64_t mask) {
    const auto s = detail::shape_of(g, mask);
    const int root = s.component[u1 - 1];
    if (!s.tree(root)) return;
    for (int c = 0; c < s.components(); ++c)
      if (c != root && !s.odd_unicyclic(c)) return;
    out.iota2 += detail::power_of_four(s.components() - 1);
    ++out.histogram.tree_odd_unicyclic[s.components()];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Determinant routes

inline Integer determinant_spanning_trees(const Graph& g) {
  const std::size_t last = detail::index_of(g.order());
  return detail::to_integer(det(laplacian(g).without({last}, {last})), "spanning tree");
}

inline Integer determinant_two_forests(const Graph& g, Vertex u1, Vertex un) {
  const std::vector<std::size_t> drop{detail::index_of(u1), detail::index_of(un)};
  return detail::to_integer(det(laplacian(g).without(drop, drop)), "two-forest");
}

inline RatMatrix signless_or_mutant(const Graph& g, bool mutate) { return mutate ? laplacian(g) : signless_laplacian(g); }

inline Integer determinant_iota1(const Graph& g, bool mutate = false) {
  return detail::to_integer(det(signless_or_mutant(g, mutate)), "signless");
}

inline Integer determinant_iota2(const Graph& g, Vertex u1, bool mutate = false) {
  const std::size_t i = detail::index_of(u1);
  return detail::to_integer(det(signless_or_mutant(g, mutate).without({i}, {i})), "signless minor");
}

// ---------------------------------------------------------------------------
// Cross-checked counts

inline Integer spanning_tree_count(const Graph& g) {
  const Integer d = determinant_spanning_trees(g);
  if (enumerate_spanning_trees(g) != d) throw OracleMismatch("chi1: enumeration != det(L minor)");
  return d;
}

inline Integer two_forest_count(const Graph& g, Vertex u1, Vertex un) {
  if (u1 == un) throw PreconditionError("two_forest_count: u1 == un");
  const Integer d = determinant_two_forests(g, u1, un);
  if (enumerate_two_forests(g, u1, un) != d) throw OracleMismatch("chi2: enumeration != det(L double minor)");
  return d;
}

inline std::pair<Integer, Integer> odd_unicyclic_sums(const Graph& g, Vertex u1) {
  const auto e = enumerate_odd_unicyclic(g, u1);
  if (e.iota1 != determinant_iota1(g)) throw OracleMismatch("iota1: enumeration != det(Q)");
  if (e.iota2 != determinant_iota2(g, u1)) throw OracleMismatch("iota2: enumeration != det(Q minor)");
  return {e.iota1, e.iota2};
}

/// All four factors for the boundary pair (u1, un).
inline FactorCounts factor_counts(const Graph& g, Vertex u1, Vertex un, const FactorOptions& opts = {}) {
  if (u1 == un) throw PreconditionError("factor_counts: u1 == un");
  FactorCounts f;
  f.edge_count = g.size();
  f.chi1 = determinant_spanning_trees(g);
  f.chi2 = determinant_two_forests(g, u1, un);
  f.iota1 = determinant_iota1(g, opts.mutate_signless);
  f.iota2 = determinant_iota2(g, u1, opts.mutate_signless);
  if (opts.mode == FactorMode::determinant) return f;

  if (enumerate_spanning_trees(g) != f.chi1) throw OracleMismatch("chi1: enumeration != det(L minor)");
  if (enumerate_two_forests(g, u1, un) != f.chi2) throw OracleMismatch("chi2: enumeration != det(L double minor)");
  auto e = enumerate_odd_unicyclic(g, u1);
  if (e.iota1 != f.iota1) throw OracleMismatch("iota1: enumeration != det(Q)");
  if (e.iota2 != f.iota2) throw OracleMismatch("iota2: enumeration != det(Q minor)");
  f.omega_histogram = std::move(e.histogram);
  return f;
}

/// Comfortability from the factors. z = -1: (chi2/chi1 + |E|)/4 on bipartite
/// graphs, iota2/iota1 otherwise. z = +1: (chi2/chi1 + |E|)/4 always.
inline Rational closed_form_comfort(const FactorCounts& f, bool bipartite, Phase z) {
  if (z == Phase::minus_one && !bipartite) {
    if (f.iota1 == 0) throw OracleMismatch("iota1 vanishes on a non-bipartite graph");
    Rational r(f.iota2, f.iota1);
    r.canonicalize();
    return r;
  }
  Rational r(f.chi2, f.chi1);
  r.canonicalize();
  return (r + static_cast<long>(f.edge_count)) / 4;
}

inline Rational closed_form_comfort(const Graph& g, Vertex u1, Vertex un, Phase z) {
  FactorOptions opts;
  opts.mode = FactorMode::determinant;
  return closed_form_comfort(factor_counts(g, u1, un, opts), bipartition(g).bipartite(), z);
}

/// Determinant of the non-oriented incidence matrix of the cycle of the given
/// length (vertex i on edges {i, i+1} and {i-1, i}).
inline Rational cycle_incidence_check(int length) {
  if (length < 3) throw PreconditionError("cycle length must be at least 3");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int i = 1; i <= length; ++i) edges.emplace_back(i, i % length + 1);
  const Graph c(length, edges);
  return det(incidence_nonoriented(c));
}

}  // namespace gqw
