#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <deque>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "gqw/errors.hpp"
#include "gqw/rational.hpp"

namespace gqw {

/// Vertices are labeled 1..n in every public interface.
using Vertex = int;

struct Arc {
  Vertex origin{};
  Vertex terminus{};

  constexpr Arc reversed() const noexcept { return {terminus, origin}; }
  friend constexpr auto operator<=>(const Arc&, const Arc&) = default;
};

/// Undirected edge, stored with u < v. Orientation u -> v is used wherever an
/// oriented incidence is needed.
struct Edge {
  Vertex u{};
  Vertex v{};
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bit position of edge {u, v} in an edge bitmask over n vertices; pairs are
/// numbered lexicographically (1,2), (1,3), ..., (n-1,n).
constexpr int edge_bit(int n, Vertex u, Vertex v) noexcept {
  if (u > v) std::swap(u, v);
  return (u - 1) * n - (u - 1) * u / 2 + (v - u - 1);
}

constexpr int pair_count(int n) noexcept { return n * (n - 1) / 2; }

/// Finite simple connected undirected graph.
class Graph {
 public:
  Graph(int order, std::vector<std::pair<Vertex, Vertex>> edge_list) : n_(order) {
    if (n_ < 2) throw InputError("graph needs at least 2 vertices, got " + std::to_string(n_));
    std::set<Edge> seen;
    for (auto [a, b] : edge_list) {
      if (a < 1 || a > n_ || b < 1 || b > n_)
        throw InputError("edge {" + std::to_string(a) + "," + std::to_string(b) + "} out of range 1.." +
                         std::to_string(n_));
      if (a == b) throw InputError("self-loop at vertex " + std::to_string(a));
      Edge e{std::min(a, b), std::max(a, b)};
      if (!seen.insert(e).second)
        throw InputError("duplicate edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}");
    }
    edges_.assign(seen.begin(), seen.end());
    build();
    if (!connected()) throw InputError("graph is disconnected");
  }

  /// Graph from an edge bitmask (see edge_bit). Throws when disconnected.
  static Graph from_edge_mask(int order, std::uint64_t mask) {
    std::vector<std::pair<Vertex, Vertex>> list;
    for (Vertex u = 1; u <= order; ++u)
      for (Vertex v = u + 1; v <= order; ++v)
        if (mask >> edge_bit(order, u, v) & 1U) list.emplace_back(u, v);
    return Graph(order, std::move(list));
  }

  int order() const noexcept { return n_; }
  std::size_t size() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// All 2|E| symmetric arcs, sorted lexicographically by (origin, terminus).
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  std::size_t arc_index(Arc a) const {
    check_vertex(a.origin);
    check_vertex(a.terminus);
    const int id = arc_id_[index(a.origin, a.terminus)];
    if (id < 0)
      throw std::out_of_range("no arc (" + std::to_string(a.origin) + "," + std::to_string(a.terminus) + ")");
    return static_cast<std::size_t>(id);
  }

  std::size_t reverse_arc(std::size_t i) const { return reverse_[i]; }

  /// Arc indices with terminus v, resp. origin v.
  const std::vector<std::size_t>& arcs_into(Vertex v) const { return in_arcs_[v - 1]; }
  const std::vector<std::size_t>& arcs_out_of(Vertex v) const { return out_arcs_[v - 1]; }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v - 1]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v - 1].size()); }
  bool adjacent(Vertex u, Vertex v) const { return arc_id_[index(u, v)] >= 0; }

  std::uint64_t edge_mask() const {
    if (pair_count(n_) > 64) throw std::out_of_range("edge mask needs n <= 11");
    std::uint64_t mask = 0;
    for (const auto& e : edges_) mask |= std::uint64_t{1} << edge_bit(n_, e.u, e.v);
    return mask;
  }

  /// Breadth-first distances from v (index 0 unused).
  std::vector<int> distances_from(Vertex v) const {
    std::vector<int> dist(n_ + 1, -1);
    std::deque<Vertex> queue{v};
    dist[v] = 0;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : neighbors(u))
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
    }
    return dist;
  }

  int distance(Vertex u, Vertex v) const { return distances_from(u)[v]; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v - 1);
  }

  void check_vertex(Vertex v) const {
    if (v < 1 || v > n_) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  }

  void build() {
    adjacency_.assign(n_, {});
    for (const auto& e : edges_) {
      adjacency_[e.u - 1].push_back(e.v);
      adjacency_[e.v - 1].push_back(e.u);
      arcs_.push_back({e.u, e.v});
      arcs_.push_back({e.v, e.u});
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    std::sort(arcs_.begin(), arcs_.end());
    arc_id_.assign(static_cast<std::size_t>(n_) * n_, -1);
    in_arcs_.assign(n_, {});
    out_arcs_.assign(n_, {});
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      arc_id_[index(arcs_[i].origin, arcs_[i].terminus)] = static_cast<int>(i);
      out_arcs_[arcs_[i].origin - 1].push_back(i);
      in_arcs_[arcs_[i].terminus - 1].push_back(i);
    }
    reverse_.resize(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i)
      reverse_[i] = static_cast<std::size_t>(arc_id_[index(arcs_[i].terminus, arcs_[i].origin)]);
  }

  bool connected() const {
    const auto d = distances_from(1);
    return std::all_of(d.begin() + 1, d.end(), [](int x) { return x >= 0; });
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<int> arc_id_;
  std::vector<std::size_t> reverse_;
  std::vector<std::vector<std::size_t>> in_arcs_;
  std::vector<std::vector<std::size_t>> out_arcs_;
};

// ---------------------------------------------------------------------------
// Tailed walk instance

enum class Phase { plus_one, minus_one };

constexpr int sign(Phase z) noexcept { return z == Phase::plus_one ? 1 : -1; }

inline std::string to_string(Phase z) { return z == Phase::plus_one ? "+1" : "-1"; }

/// Internal graph G0 with one semi-infinite tail at each boundary vertex, the
/// inflow alpha carried in along each tail, and the phase z.
class WalkInstance {
 public:
  WalkInstance(Graph graph, std::vector<Vertex> boundary, std::vector<Rational> inflow, Phase phase = Phase::minus_one)
      : graph_(std::move(graph)), boundary_(std::move(boundary)), inflow_(std::move(inflow)), phase_(phase) {
    if (boundary_.empty()) throw InputError("at least one tail is required");
    if (boundary_.size() != inflow_.size())
      throw InputError("inflow has " + std::to_string(inflow_.size()) + " entries for " +
                       std::to_string(boundary_.size()) + " tails");
    slot_.assign(graph_.order() + 1, -1);
    for (std::size_t j = 0; j < boundary_.size(); ++j) {
      const Vertex v = boundary_[j];
      if (v < 1 || v > graph_.order())
        throw InputError("boundary vertex " + std::to_string(v) + " out of range");
      if (slot_[v] >= 0) throw InputError("vertex " + std::to_string(v) + " has more than one tail");
      slot_[v] = static_cast<int>(j);
    }
  }

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<Vertex>& boundary() const noexcept { return boundary_; }
  const std::vector<Rational>& inflow() const noexcept { return inflow_; }
  Phase phase() const noexcept { return phase_; }
  std::size_t tail_count() const noexcept { return boundary_.size(); }

  /// Tail index at v, if v is a boundary vertex.
  std::optional<std::size_t> boundary_slot(Vertex v) const {
    return slot_[v] < 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(slot_[v]));
  }

  /// Degree in the tailed graph: internal degree plus one at boundary vertices.
  int tilde_degree(Vertex v) const { return graph_.degree(v) + (slot_[v] >= 0 ? 1 : 0); }

  /// Inflow at v (zero off the boundary).
  Rational inflow_at(Vertex v) const { return slot_[v] < 0 ? Rational(0) : inflow_[slot_[v]]; }

  WalkInstance with_inflow(std::vector<Rational> inflow) const {
    return WalkInstance(graph_, boundary_, std::move(inflow), phase_);
  }

  WalkInstance with_phase(Phase z) const { return WalkInstance(graph_, boundary_, inflow_, z); }

  /// Two tails at (u1, un) with alpha = (1, 0).
  static WalkInstance standard(Graph graph, Vertex entry, Vertex exit, Phase phase = Phase::minus_one) {
    return WalkInstance(std::move(graph), {entry, exit}, {Rational(1), Rational(0)}, phase);
  }

  bool is_standard() const {
    return boundary_.size() == 2 && inflow_[0] == 1 && inflow_[1] == 0;
  }

 private:
  Graph graph_;
  std::vector<Vertex> boundary_;
  std::vector<Rational> inflow_;
  Phase phase_;
  std::vector<int> slot_;
};

/// Parses the line-oriented instance format:
///
///     n <int>
///     e <u> <v>
///     tail <v> <rational>
///     z <+1|-1>          (optional, default -1)
///
/// '#' starts a comment. Tail lines are kept in file order.
inline WalkInstance parse_instance(std::string_view text) {
  std::optional<int> order;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::set<Edge> seen_edges;
  std::vector<Vertex> boundary;
  std::vector<Rational> inflow;
  std::optional<Phase> phase;

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto parse_int = [&](const std::string& tok) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(lineno, "expected an integer, got '" + tok + "'");
    return value;
  };
  auto vertex = [&](const std::string& tok) {
    if (!order) throw ParseError(lineno, "'n' must precede edges and tails");
    const int v = parse_int(tok);
    if (v < 1 || v > *order)
      throw ParseError(lineno, "vertex " + tok + " out of range 1.." + std::to_string(*order));
    return v;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    auto arity = [&](std::size_t k) {
      if (tok.size() != k + 1)
        throw ParseError(lineno, "'" + key + "' takes " + std::to_string(k) + " argument(s)");
    };
    if (key == "n") {
      arity(1);
      if (order) throw ParseError(lineno, "vertex count given twice");
      order = parse_int(tok[1]);
      if (*order < 2) throw ParseError(lineno, "vertex count must be at least 2");
    } else if (key == "e") {
      arity(2);
      const Vertex u = vertex(tok[1]);
      const Vertex v = vertex(tok[2]);
      if (u == v) throw ParseError(lineno, "self-loop at vertex " + tok[1]);
      if (!seen_edges.insert({std::min(u, v), std::max(u, v)}).second)
        throw ParseError(lineno, "duplicate edge {" + tok[1] + "," + tok[2] + "}");
      edges.emplace_back(u, v);
    } else if (key == "tail") {
      arity(2);
      const Vertex v = vertex(tok[1]);
      if (std::find(boundary.begin(), boundary.end(), v) != boundary.end())
        throw ParseError(lineno, "vertex " + tok[1] + " already has a tail");
      auto a = try_parse_rational(tok[2]);
      if (!a) throw ParseError(lineno, "bad inflow '" + tok[2] + "'");
      boundary.push_back(v);
      inflow.push_back(*a);
    } else if (key == "z") {
      arity(1);
      if (phase) throw ParseError(lineno, "phase given twice");
      if (tok[1] == "+1" || tok[1] == "1")
        phase = Phase::plus_one;
      else if (tok[1] == "-1")
        phase = Phase::minus_one;
      else
        throw ParseError(lineno, "phase must be +1 or -1, got '" + tok[1] + "'");
    } else {
      throw ParseError(lineno, "unknown directive '" + key + "'");
    }
  }
  if (!order) throw ParseError(lineno, "missing vertex count 'n'");
  if (boundary.empty()) throw ParseError(lineno, "no tails declared");
  return WalkInstance(Graph(*order, std::move(edges)), std::move(boundary), std::move(inflow),
                      phase.value_or(Phase::minus_one));
}

inline WalkInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_instance(buf.str());
}

/// Inverse of parse_instance.
inline std::string format_instance(const WalkInstance& inst) {
  std::ostringstream os;
  os << "n " << inst.graph().order() << '\n';
  for (const auto& e : inst.graph().edges()) os << "e " << e.u << ' ' << e.v << '\n';
  for (std::size_t j = 0; j < inst.tail_count(); ++j)
    os << "tail " << inst.boundary()[j] << ' ' << to_string(inst.inflow()[j]) << '\n';
  os << "z " << to_string(inst.phase()) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Bipartiteness

struct Bipartition {
  std::vector<Vertex> x;
  std::vector<Vertex> y;
  std::vector<int> side;  ///< side[v] = 0 for X, 1 for Y (index 0 unused)

  bool in_x(Vertex v) const { return side[v] == 0; }
};

struct BipartiteCheck {
  std::optional<Bipartition> partition;
  /// When not bipartite: an odd cycle v1, ..., vk (vk adjacent to v1).
  std::vector<Vertex> odd_cycle;

  bool bipartite() const noexcept { return partition.has_value(); }
};

/// Breadth-first 2-coloring from vertex 1 (so 1 is always in X).
inline BipartiteCheck bipartition(const Graph& g) {
  const int n = g.order();
  std::vector<int> color(n + 1, -1), parent(n + 1, 0), depth(n + 1, 0);
  std::deque<Vertex> queue{1};
  color[1] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (color[w] < 0) {
        color[w] = 1 - color[u];
        parent[w] = u;
        depth[w] = depth[u] + 1;
        queue.push_back(w);
      } else if (color[w] == color[u]) {
        // Both tree paths to the common ancestor have equal parity.
        std::vector<Vertex> up_u{u}, up_w{w};
        Vertex a = u, b = w;
        while (a != b) {
          if (depth[a] >= depth[b]) {
            a = parent[a];
            up_u.push_back(a);
          } else {
            b = parent[b];
            up_w.push_back(b);
          }
        }
        up_w.pop_back();  // common ancestor already ends up_u
        std::vector<Vertex> cycle(up_u.rbegin(), up_u.rend());
        cycle.insert(cycle.end(), up_w.begin(), up_w.end());
        return {std::nullopt, std::move(cycle)};
      }
    }
  }
  Bipartition p;
  p.side.assign(n + 1, 0);
  for (Vertex v = 1; v <= n; ++v) {
    p.side[v] = color[v];
    (color[v] == 0 ? p.x : p.y).push_back(v);
  }
  return {std::move(p), {}};
}

// ---------------------------------------------------------------------------
// Small-graph catalogs

/// All labeled connected simple graphs on n vertices (2 <= n <= 6), ordered by
/// edge bitmask.
inline std::vector<Graph> enumerate_connected(int n) {
  if (n < 2 || n > 6) throw std::out_of_range("enumerate_connected: n must be in 2..6");
  const int m = pair_count(n);
  std::vector<Graph> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    // cheap reject: need at least n-1 edges
    if (std::popcount(mask) < n - 1) continue;
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = n;
    for (Vertex u = 1; u <= n; ++u)
      for (Vertex v = u + 1; v <= n; ++v)
        if (mask >> edge_bit(n, u, v) & 1U) {
          const int a = find(u), b = find(v);
          if (a != b) {
            parent[a] = b;
            --components;
          }
        }
    if (components == 1) out.push_back(Graph::from_edge_mask(n, mask));
  }
  return out;
}

namespace detail {

inline std::uint64_t permuted_mask(const Graph& g, const std::vector<int>& perm) {
  std::uint64_t mask = 0;
  for (const auto& e : g.edges()) mask |= std::uint64_t{1} << edge_bit(g.order(), perm[e.u], perm[e.v]);
  return mask;
}

inline void require_small(const Graph& g) {
  if (g.order() > 8) throw std::out_of_range("canonical form needs n <= 8");
}

}  // namespace detail

/// Minimum edge bitmask over all vertex relabelings; equal iff isomorphic.
inline std::uint64_t canonical_form(const Graph& g) {
  detail::require_small(g);
  std::vector<int> perm(g.order() + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    best = std::min(best, detail::permuted_mask(g, perm));
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

/// Canonical form of a graph with an ordered pair of marked vertices: the
/// lexicographic minimum of (mask, image of u, image of v). Two marked graphs
/// get the same key iff an isomorphism maps one pair onto the other.
inline std::tuple<std::uint64_t, Vertex, Vertex> canonical_pair_form(const Graph& g, Vertex u, Vertex v) {
  detail::require_small(g);
  std::vector<int> perm(g.order() + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::tuple<std::uint64_t, Vertex, Vertex> best{~std::uint64_t{0}, 0, 0};
  do {
    best = std::min(best, std::tuple{detail::permuted_mask(g, perm), perm[u], perm[v]});
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

/// One representative of every isomorphism class of trees on n vertices
/// (2 <= n <= 8), grown leaf by leaf.
inline std::vector<Graph> nonisomorphic_trees(int n) {
  if (n < 2 || n > 8) throw std::out_of_range("nonisomorphic_trees: n must be in 2..8");
  std::vector<Graph> layer{Graph(2, {{1, 2}})};
  for (int k = 3; k <= n; ++k) {
    std::vector<Graph> next;
    std::set<std::uint64_t> seen;
    for (const auto& t : layer)
      for (Vertex attach = 1; attach < k; ++attach) {
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (const auto& e : t.edges()) edges.emplace_back(e.u, e.v);
        edges.emplace_back(attach, k);
        Graph g(k, std::move(edges));
        if (seen.insert(canonical_form(g)).second) next.push_back(std::move(g));
      }
    layer = std::move(next);
  }
  return layer;
}

}  // namespace gqw
