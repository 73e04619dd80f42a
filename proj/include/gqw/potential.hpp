#pragma once

#include <deque>
#include <string>
#include <vector>

#include "gqw/graph.hpp"
#include "gqw/matrix.hpp"
#include "gqw/stationary.hpp"

namespace gqw {

/// Rational value on every vertex; value(v) is 1-indexed.
struct VertexField {
  RatVector values;  ///< values[v - 1]

  const Rational& operator()(Vertex v) const { return values[v - 1]; }
  Rational& operator()(Vertex v) { return values[v - 1]; }
  friend bool operator==(const VertexField&, const VertexField&) = default;
};

/// L = D - M (positive semidefinite), tails excluded.
inline RatMatrix laplacian(const Graph& g) {
  RatMatrix l(g.order(), g.order());
  for (Vertex v = 1; v <= g.order(); ++v) l(v - 1, v - 1) = g.degree(v);
  for (const auto& e : g.edges()) {
    l(e.u - 1, e.v - 1) = -1;
    l(e.v - 1, e.u - 1) = -1;
  }
  return l;
}

/// Q = D + M.
inline RatMatrix signless_laplacian(const Graph& g) {
  RatMatrix q(g.order(), g.order());
  for (Vertex v = 1; v <= g.order(); ++v) q(v - 1, v - 1) = g.degree(v);
  for (const auto& e : g.edges()) {
    q(e.u - 1, e.v - 1) = 1;
    q(e.v - 1, e.u - 1) = 1;
  }
  return q;
}

/// Oriented vertex-edge incidence (n x |E|): edge {u < v} is oriented u -> v,
/// -1 at the origin row, +1 at the terminus row. B B^T = L.
inline RatMatrix incidence_oriented(const Graph& g) {
  RatMatrix b(g.order(), g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    b(g.edges()[k].u - 1, k) = -1;
    b(g.edges()[k].v - 1, k) = 1;
  }
  return b;
}

/// Non-oriented vertex-edge incidence: +1 at both ends. B~ B~^T = Q.
inline RatMatrix incidence_nonoriented(const Graph& g) {
  RatMatrix b(g.order(), g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    b(g.edges()[k].u - 1, k) = 1;
    b(g.edges()[k].v - 1, k) = 1;
  }
  return b;
}

/// Vertex-arc incidence over all 2|E| arcs (+1 at terminus, -1 at origin when
/// oriented; +1 at both when not). C C^T = 2L and C~ C~^T = 2Q.
inline RatMatrix arc_incidence(const Graph& g, bool oriented) {
  RatMatrix c(g.order(), g.arcs().size());
  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    c(g.arcs()[a].terminus - 1, a) = 1;
    c(g.arcs()[a].origin - 1, a) = oriented ? -1 : 1;
  }
  return c;
}

struct CurrentDecomposition {
  Rational rho;
  ArcField current;      ///< j(a) = s(t(a)) psi(a) - rho
  VertexField potential; ///< phi with phi(ground) = 0
  Vertex ground{};
};

struct LaplacianRoute {
  CurrentDecomposition decomposition;
  VertexField q;                 ///< tail currents entering each vertex
  ArcField psi;                  ///< reconstructed stationary state
  Rational electrical_energy;    ///< (1/2) sum j^2
  Rational comfortability;       ///< electrical energy + rho^2 |E|
};

struct SignlessRoute {
  VertexField potential;
  VertexField q;
  ArcField psi;
  Rational comfortability;  ///< <Q^-1 q, q>
};

namespace detail {

inline void require_standard(const WalkInstance& inst) {
  if (!inst.is_standard()) throw PreconditionError("potential routes need two tails with inflow (1, 0)");
}

/// Side sign s(v) = +1 / -1 orienting the current. For z = -1 on a bipartite
/// graph s flips between partite sets, with s(u1) = +1; for z = +1 it is
/// identically +1.
inline std::vector<int> current_sign(const WalkInstance& inst) {
  const int n = inst.graph().order();
  std::vector<int> s(n + 1, 1);
  if (inst.phase() == Phase::plus_one) return s;
  const auto check = bipartition(inst.graph());
  if (!check.bipartite()) throw PreconditionError("current sign needs a bipartite graph when z = -1");
  const bool entry_in_x = check.partition->in_x(inst.boundary()[0]);
  for (Vertex v = 1; v <= n; ++v) s[v] = check.partition->in_x(v) == entry_in_x ? 1 : -1;
  return s;
}

}  // namespace detail

/// Laplacian (Kirchhoff) reconstruction of the standard two-tail state. Applies
/// to bipartite graphs at z = -1 and to every graph at z = +1, where the
/// unsigned walk carries the same current structure with s = +1.
///
/// Ground at the exit vertex u_n; solve L^(n) phi = -q with q(u1) = 1 - rho,
/// q(un) = -rho, rho = 1/2; currents j(a) = phi(t(a)) - phi(o(a)); then
/// psi(a) = s(t(a)) (j(a) + rho).
inline LaplacianRoute bipartite_route(const WalkInstance& inst) {
  detail::require_standard(inst);
  const Graph& g = inst.graph();
  const auto s = detail::current_sign(inst);
  const int n = g.order();
  const Vertex entry = inst.boundary()[0];
  const Vertex exit = inst.boundary()[1];

  // rho from the inflow split across the sides
  Rational rho = 0;
  for (std::size_t j = 0; j < inst.tail_count(); ++j) rho += s[inst.boundary()[j]] * inst.inflow()[j];
  rho /= static_cast<long>(inst.tail_count());

  VertexField q{RatVector(n)};
  for (std::size_t j = 0; j < inst.tail_count(); ++j) {
    const Vertex v = inst.boundary()[j];
    q(v) = s[v] * inst.inflow()[j] - rho;
  }

  const std::size_t ground_index = static_cast<std::size_t>(exit - 1);
  const RatMatrix reduced = laplacian(g).without({ground_index}, {ground_index});
  RatVector rhs;
  for (Vertex v = 1; v <= n; ++v)
    if (v != exit) rhs.push_back(-q(v));
  const RatVector phi_reduced = solve(reduced, rhs);

  LaplacianRoute out;
  out.q = q;
  auto& dec = out.decomposition;
  dec.rho = rho;
  dec.ground = exit;
  dec.potential.values.assign(n, 0);
  for (Vertex v = 1, k = 0; v <= n; ++v)
    if (v != exit) dec.potential(v) = phi_reduced[k++];

  const std::size_t m = g.arcs().size();
  dec.current.values.resize(m);
  out.psi.values.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    const Arc arc = g.arcs()[a];
    dec.current[a] = dec.potential(arc.terminus) - dec.potential(arc.origin);
    out.psi[a] = s[arc.terminus] * (dec.current[a] + rho);
  }
  out.electrical_energy = comfortability_direct(dec.current);

  RatVector q_reduced;
  for (Vertex v = 1; v <= n; ++v)
    if (v != exit) q_reduced.push_back(q(v));
  const Rational quadratic = dot(solve(reduced, q_reduced), q_reduced);
  if (quadratic != out.electrical_energy) throw OracleMismatch("electrical energy != <L^-1 q, q>");
  out.comfortability = out.electrical_energy + rho * rho * static_cast<long>(g.size());
  (void)entry;
  return out;
}

/// Signless-Laplacian reconstruction for non-bipartite graphs at z = -1:
/// Q phi = -q with q the inflow indicator, psi(a) = phi(o(a)) + phi(t(a)).
inline SignlessRoute nonbipartite_route(const WalkInstance& inst) {
  detail::require_standard(inst);
  if (inst.phase() != Phase::minus_one) throw PreconditionError("signless route is stated for z = -1");
  const Graph& g = inst.graph();
  if (bipartition(g).bipartite()) throw PreconditionError("signless route needs a non-bipartite graph");
  const int n = g.order();

  SignlessRoute out;
  out.q.values.assign(n, 0);
  for (std::size_t j = 0; j < inst.tail_count(); ++j) out.q(inst.boundary()[j]) = inst.inflow()[j];

  RatVector rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = -out.q.values[i];
  out.potential.values = solve(signless_laplacian(g), rhs);

  out.psi.values.resize(g.arcs().size());
  for (std::size_t a = 0; a < g.arcs().size(); ++a)
    out.psi[a] = out.potential(g.arcs()[a].origin) + out.potential(g.arcs()[a].terminus);
  // <Q^-1 q, q> = -<phi, q>
  out.comfortability = -dot(out.potential.values, out.q.values);
  return out;
}

// ---------------------------------------------------------------------------
// Audits

struct AuditViolation {
  std::string law;
  std::string location;
};

struct AuditReport {
  std::size_t checks = 0;
  std::vector<AuditViolation> violations;

  bool passed() const noexcept { return violations.empty(); }

  void expect(bool ok, const char* law, const std::string& where) {
    ++checks;
    if (!ok) violations.push_back({law, where});
  }
};

inline std::string describe(Arc a) {
  return "arc (" + std::to_string(a.origin) + "," + std::to_string(a.terminus) + ")";
}

/// Exact Kirchhoff-law audit of a stationary state.
///
/// Current regime (bipartite at z = -1, or any graph at z = +1): constant rho,
/// antisymmetric current, zero net current into every vertex including the
/// tail arcs, zero voltage around every fundamental cycle of a BFS tree rooted
/// at vertex 1, and tail currents q summing to zero.
///
/// Pseudo regime (non-bipartite at z = -1): symmetric amplitudes, perfect
/// reflection on the tails, zero amplitude sum into every vertex, and a
/// potential phi with psi(a) = phi(o(a)) + phi(t(a)) (the solvable form of the
/// alternating sum over even closed walks).
inline AuditReport kirchhoff_audit(const WalkInstance& inst, const ArcField& psi) {
  const Graph& g = inst.graph();
  const auto beta = outflow(inst, psi);
  AuditReport rep;
  const bool current_regime = inst.phase() == Phase::plus_one || bipartition(g).bipartite();

  if (current_regime) {
    std::vector<int> s(g.order() + 1, 1);
    if (inst.phase() == Phase::minus_one) {
      const auto parts = *bipartition(g).partition;
      for (Vertex v = 1; v <= g.order(); ++v) s[v] = parts.in_x(v) ? 1 : -1;
    }
    // Tail vertex v(1) sits on the side opposite v for z = -1.
    auto tail_sign = [&](Vertex v) { return inst.phase() == Phase::minus_one ? -s[v] : s[v]; };

    // rho as half the oriented sum over any arc pair
    const Rational rho = g.arcs().empty() ? Rational(0)
                                          : (s[g.arcs()[0].terminus] * psi[0] +
                                             s[g.arcs()[0].origin] * psi[g.reverse_arc(0)]) / 2;
    std::vector<Rational> j(psi.size());
    for (std::size_t a = 0; a < psi.size(); ++a) j[a] = s[g.arcs()[a].terminus] * psi[a] - rho;

    for (std::size_t a = 0; a < psi.size(); ++a)
      rep.expect(j[a] + j[g.reverse_arc(a)] == 0, "current antisymmetry", describe(g.arcs()[a]));

    Rational q_total = 0;
    for (Vertex u = 1; u <= g.order(); ++u) {
      Rational net = 0;
      for (std::size_t b : g.arcs_into(u)) net += j[b];
      if (auto t = inst.boundary_slot(u)) {
        const Rational j_in = s[u] * inst.inflow()[*t] - rho;
        const Rational j_out = tail_sign(u) * beta[*t] - rho;
        rep.expect(j_in + j_out == 0, "current antisymmetry", "tail at vertex " + std::to_string(u));
        net += j_in;
        q_total += j_in;
      }
      rep.expect(net == 0, "current law", "vertex " + std::to_string(u));
    }
    rep.expect(q_total == 0, "tail currents sum to zero", "boundary");

    // fundamental cycles of a BFS tree rooted at vertex 1
    std::vector<Vertex> parent(g.order() + 1, 0);
    std::vector<int> depth(g.order() + 1, -1);
    std::deque<Vertex> queue{1};
    depth[1] = 0;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(u))
        if (depth[w] < 0) {
          depth[w] = depth[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        }
    }
    for (const auto& e : g.edges()) {
      if (parent[e.v] == e.u || parent[e.u] == e.v) continue;
      // walk u -> ... -> lca -> ... -> v, then close with v -> u
      std::vector<Vertex> from_u{e.u}, from_v{e.v};
      Vertex a = e.u, b = e.v;
      while (a != b) {
        if (depth[a] >= depth[b]) from_u.push_back(a = parent[a]);
        else from_v.push_back(b = parent[b]);
      }
      std::vector<Vertex> cycle(from_u.begin(), from_u.end());
      for (auto it = from_v.rbegin() + 1; it != from_v.rend(); ++it) cycle.push_back(*it);
      Rational voltage = 0;
      for (std::size_t k = 0; k < cycle.size(); ++k)
        voltage += j[g.arc_index({cycle[k], cycle[(k + 1) % cycle.size()]})];
      rep.expect(voltage == 0, "voltage law", "cycle closed by edge {" + std::to_string(e.u) + "," +
                                                  std::to_string(e.v) + "}");
    }
  } else {
    for (std::size_t a = 0; a < psi.size(); ++a)
      rep.expect(psi[a] == psi[g.reverse_arc(a)], "pseudo-current symmetry", describe(g.arcs()[a]));
    for (std::size_t t = 0; t < inst.tail_count(); ++t)
      rep.expect(beta[t] == inst.inflow()[t], "pseudo-current symmetry",
                 "tail at vertex " + std::to_string(inst.boundary()[t]));
    for (Vertex u = 1; u <= g.order(); ++u) {
      Rational sum = inst.inflow_at(u);
      for (std::size_t b : g.arcs_into(u)) sum += psi[b];
      rep.expect(sum == 0, "pseudo-current law", "vertex " + std::to_string(u));
    }
    const RatMatrix lift = arc_incidence(g, false).transpose();
    rep.expect(solve_consistent(lift, psi.values).has_value(), "pseudo-voltage law", "potential existence");
  }
  return rep;
}

}  // namespace gqw
