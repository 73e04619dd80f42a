#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gqw/graph.hpp"
#include "gqw/matrix.hpp"
#include "gqw/rational.hpp"

namespace gqw {

/// A rational amplitude on every internal arc, indexed like Graph::arcs().
struct ArcField {
  RatVector values;

  std::size_t size() const noexcept { return values.size(); }
  const Rational& operator[](std::size_t i) const { return values[i]; }
  Rational& operator[](std::size_t i) { return values[i]; }
  friend bool operator==(const ArcField&, const ArcField&) = default;
};

/// Coin weight 2/deg~(u) - [reflection], with deg~ counting the tail.
inline Rational coin_weight(const WalkInstance& inst, Vertex u, bool reflection) {
  Rational w = make_rational(2, inst.tilde_degree(u));
  if (reflection) w -= 1;
  return w;
}

/// Internal transfer matrix with the phase folded in: entry (a, b) is
/// z * (2/deg~(o(a)) - delta(a, reverse b)) when o(a) = t(b).
inline RatMatrix internal_operator(const WalkInstance& inst) {
  const Graph& g = inst.graph();
  const std::size_t m = g.arcs().size();
  const int eps = sign(inst.phase());
  RatMatrix e(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    const Vertex u = g.arcs()[a].origin;
    for (std::size_t b : g.arcs_into(u)) e(a, b) = eps * coin_weight(inst, u, b == g.reverse_arc(a));
  }
  return e;
}

/// What the inbound tail arcs feed into the internal arcs in one step.
inline RatVector source_vector(const WalkInstance& inst) {
  const Graph& g = inst.graph();
  const int eps = sign(inst.phase());
  RatVector rho(g.arcs().size());
  for (std::size_t j = 0; j < inst.tail_count(); ++j) {
    const Vertex v = inst.boundary()[j];
    const Rational feed = eps * coin_weight(inst, v, false) * inst.inflow()[j];
    for (std::size_t a : g.arcs_out_of(v)) rho[a] = feed;
  }
  return rho;
}

/// Exact stationary states for a fixed graph, boundary and phase, for any
/// inflow vector.
///
/// The fixed point psi = E psi + rho is solved on the orthogonal complement
/// K^perp of K = ker(I - E). E is a compression of an orthogonal operator, so
/// K = ker(I - E^T) as well: rho is orthogonal to K whenever the iteration
/// converges, every iterate stays in K^perp, and the limit is the unique
/// solution there. K is nontrivial for most graphs (cycle flows for z = +1,
/// the even-closed-walk states of ker(B~) for z = -1). Internally the square
/// system (I - E + N N^T) psi = rho is solved, N a basis of K.
class StationarySolver {
 public:
  explicit StationarySolver(const WalkInstance& inst)
      : graph_(inst.graph()), boundary_(inst.boundary()), phase_(inst.phase()) {
    const std::size_t m = graph_.arcs().size();
    const std::size_t r = boundary_.size();
    const RatMatrix system = RatMatrix::identity(m) - internal_operator(inst);
    kernel_ = nullspace(system);
    RatMatrix sources(m, r);
    for (std::size_t j = 0; j < r; ++j) {
      std::vector<Rational> unit(r);
      unit[j] = 1;
      const auto rho = source_vector(inst.with_inflow(unit));
      for (std::size_t a = 0; a < m; ++a) sources(a, j) = rho[a];
    }
    RatMatrix regularized = system;
    if (kernel_.cols() > 0) regularized = regularized + kernel_ * kernel_.transpose();
    const RatMatrix x = gqw::solve(regularized, sources);
    if (system * x != sources) throw OracleMismatch("stationary source lies outside the range of I - E");
    if (kernel_.cols() > 0 && kernel_.transpose() * x != RatMatrix(kernel_.cols(), r))
      throw OracleMismatch("stationary state not orthogonal to ker(I - E)");
    responses_.reserve(r);
    for (std::size_t j = 0; j < r; ++j) responses_.push_back({x.column_vector(j)});
  }

  /// psi for the unit inflow on tail j.
  const ArcField& unit_response(std::size_t j) const { return responses_.at(j); }

  ArcField solve(const std::vector<Rational>& inflow) const {
    if (inflow.size() != responses_.size()) throw std::invalid_argument("inflow length mismatch");
    ArcField psi{RatVector(graph_.arcs().size())};
    for (std::size_t j = 0; j < inflow.size(); ++j) {
      if (inflow[j] == 0) continue;
      for (std::size_t a = 0; a < psi.size(); ++a) psi[a] += inflow[j] * responses_[j][a];
    }
    return psi;
  }

  std::size_t kernel_dimension() const noexcept { return kernel_.cols(); }
  const RatMatrix& kernel_basis() const noexcept { return kernel_; }

 private:
  Graph graph_;
  std::vector<Vertex> boundary_;
  Phase phase_;
  RatMatrix kernel_;
  std::vector<ArcField> responses_;
};

inline ArcField stationary_state(const WalkInstance& inst) { return StationarySolver(inst).solve(inst.inflow()); }

/// Outflow on each tail: one coin application at v_j including the inbound
/// tail amplitude alpha_j.
inline RatVector outflow(const WalkInstance& inst, const ArcField& psi) {
  const Graph& g = inst.graph();
  const int eps = sign(inst.phase());
  RatVector beta(inst.tail_count());
  for (std::size_t j = 0; j < inst.tail_count(); ++j) {
    const Vertex v = inst.boundary()[j];
    Rational incoming = inst.inflow()[j];
    for (std::size_t b : g.arcs_into(v)) incoming += psi[b];
    beta[j] = eps * (coin_weight(inst, v, false) * incoming - inst.inflow()[j]);
  }
  return beta;
}

/// Half the squared amplitude mass on the internal arcs.
inline Rational comfortability_direct(const ArcField& psi) {
  Rational s = 0;
  for (const auto& x : psi.values) s += x * x;
  return s / 2;
}

/// Grover matrix (2/k) J - I.
inline RatMatrix grover_matrix(std::size_t k) {
  RatMatrix gr(k, k);
  const Rational w = make_rational(2, static_cast<long>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gr(i, j) = i == j ? w - 1 : w;
  return gr;
}

/// Scattering matrix predicted for the alternating walk (z = -1): identity on
/// non-bipartite graphs, otherwise -P Gr(r) P with P = diag(I_k, -I_{r-k}) in
/// the basis that lists X-side tails first, conjugated back to the declared
/// tail order.
inline RatMatrix predicted_scattering(const WalkInstance& inst) {
  if (inst.phase() != Phase::minus_one) throw PreconditionError("predicted scattering is stated for z = -1");
  const std::size_t r = inst.tail_count();
  const auto check = bipartition(inst.graph());
  if (!check.bipartite()) return RatMatrix::identity(r);
  const auto& parts = *check.partition;

  std::vector<std::size_t> order(r);  // order[pos] = declared index
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return parts.in_x(inst.boundary()[a]) && !parts.in_x(inst.boundary()[b]);
  });
  std::size_t k = 0;
  for (Vertex v : inst.boundary()) k += parts.in_x(v) ? 1 : 0;

  RatMatrix p(r, r);
  for (std::size_t i = 0; i < r; ++i) p(i, i) = i < k ? 1 : -1;
  const RatMatrix tau_sorted = Rational(-1) * (p * grover_matrix(r) * p);

  RatMatrix tau(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) tau(order[i], order[j]) = tau_sorted(i, j);
  return tau;
}

enum class ScatteringClass {
  perfect_reflection,   ///< sigma = I on a non-bipartite graph
  bipartite_tau,        ///< sigma = tau != I on a bipartite graph
  degenerate_identity,  ///< sigma = I although the graph is bipartite
  grover,               ///< unsigned walk (z = +1)
};

inline std::string to_string(ScatteringClass c) {
  switch (c) {
    case ScatteringClass::perfect_reflection: return "perfect-reflection";
    case ScatteringClass::bipartite_tau: return "bipartite-tau";
    case ScatteringClass::degenerate_identity: return "degenerate-identity";
    case ScatteringClass::grover: return "grover";
  }
  return "?";
}

struct ScatteringReport {
  RatVector alpha;
  RatVector beta;
  RatMatrix sigma;
  ScatteringClass classification{};
  std::optional<RatMatrix> predicted;  ///< z = -1 only
  bool orthogonal = false;

  bool matches_prediction() const { return predicted && *predicted == sigma; }
  bool reflects() const { return sigma == RatMatrix::identity(sigma.rows()); }
};

inline ScatteringReport scattering(const WalkInstance& inst, const StationarySolver& solver) {
  const std::size_t r = inst.tail_count();
  ScatteringReport rep;
  rep.sigma = RatMatrix(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<Rational> unit(r);
    unit[j] = 1;
    const auto basis_inst = inst.with_inflow(unit);
    const auto beta = outflow(basis_inst, solver.unit_response(j));
    for (std::size_t i = 0; i < r; ++i) rep.sigma(i, j) = beta[i];
  }
  rep.alpha = inst.inflow();
  rep.beta = outflow(inst, solver.solve(inst.inflow()));
  if (rep.sigma * rep.alpha != rep.beta) throw OracleMismatch("beta != sigma alpha");
  rep.orthogonal = rep.sigma.transpose() * rep.sigma == RatMatrix::identity(r);

  const bool bip = bipartition(inst.graph()).bipartite();
  if (inst.phase() == Phase::plus_one) {
    rep.classification = ScatteringClass::grover;
  } else {
    rep.predicted = predicted_scattering(inst);
    if (rep.reflects())
      rep.classification = bip ? ScatteringClass::degenerate_identity : ScatteringClass::perfect_reflection;
    else
      rep.classification = ScatteringClass::bipartite_tau;
  }
  return rep;
}

inline ScatteringReport scattering(const WalkInstance& inst) { return scattering(inst, StationarySolver(inst)); }

/// Per-vertex check that psi(a) - psi(reverse a) takes one value over all arcs
/// leaving u, tail arcs included (psi(a) + psi(reverse a) for z = +1).
/// Returns the offending vertices.
inline std::vector<Vertex> constancy_violations(const WalkInstance& inst, const ArcField& psi) {
  const Graph& g = inst.graph();
  const auto beta = outflow(inst, psi);
  const int eps = sign(inst.phase());
  std::vector<Vertex> bad;
  for (Vertex u = 1; u <= g.order(); ++u) {
    std::vector<Rational> diffs;
    for (std::size_t a : g.arcs_out_of(u)) diffs.push_back(psi[a] + eps * psi[g.reverse_arc(a)]);
    if (auto j = inst.boundary_slot(u)) diffs.push_back(beta[*j] + eps * inst.inflow()[*j]);
    if (std::adjacent_find(diffs.begin(), diffs.end(), std::not_equal_to<>()) != diffs.end()) bad.push_back(u);
  }
  return bad;
}

}  // namespace gqw
