#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "gqw/graph.hpp"
#include "gqw/stationary.hpp"

namespace gqw {

/// One tail cut off after `depth` edges: inbound arcs v(k+1) -> v(k) and
/// outbound arcs v(k) -> v(k+1) for k = 0..depth-1. Both directions are ring
/// buffers, so free propagation is a rotation.
class TailWindow {
 public:
  TailWindow() = default;
  TailWindow(std::size_t depth, double inbound) : inbound_(depth, inbound), outbound_(depth, 0.0) {}

  std::size_t depth() const noexcept { return inbound_.size(); }

  double inbound(std::size_t k) const { return inbound_[(in_head_ + k) % depth()]; }
  double outbound(std::size_t k) const { return outbound_[(out_head_ + k) % depth()]; }

  /// Free propagation: every inbound amplitude moves one edge towards the
  /// internal graph, the deepest inbound arc is refilled with `inflow`, every
  /// outbound amplitude moves one edge away and `launched` enters at k = 0.
  void advance(double inflow, double launched) {
    const std::size_t d = depth();
    inbound_[in_head_] = inflow;  // slot of the consumed k = 0 becomes k = d-1
    in_head_ = (in_head_ + 1) % d;
    out_head_ = (out_head_ + d - 1) % d;
    outbound_[out_head_] = launched;
  }

 private:
  std::vector<double> inbound_;
  std::vector<double> outbound_;
  std::size_t in_head_ = 0;
  std::size_t out_head_ = 0;
};

/// Amplitudes on the internal arcs (indexed like Graph::arcs()) and on the
/// first `horizon` edges of every tail.
struct TruncatedState {
  std::vector<double> internal;
  std::vector<TailWindow> tails;
  std::size_t horizon = 0;

  /// Initial state: alpha_j on every inbound tail arc, zero elsewhere.
  static TruncatedState initial(const WalkInstance& inst, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("tail horizon must be positive");
    TruncatedState s;
    s.horizon = horizon;
    s.internal.assign(inst.graph().arcs().size(), 0.0);
    for (const auto& a : inst.inflow()) s.tails.emplace_back(horizon, to_double(a));
    return s;
  }
};

/// One application of the time evolution. Internal vertices use the Grover
/// coin with the tail-inclusive degree, multiplied by z; tail vertices are
/// free (degree 2, no sign).
inline TruncatedState step(const TruncatedState& s, const WalkInstance& inst) {
  const Graph& g = inst.graph();
  const double eps = sign(inst.phase());
  TruncatedState next = s;
  std::vector<double> launched(inst.tail_count(), 0.0);
  for (Vertex u = 1; u <= g.order(); ++u) {
    const auto slot = inst.boundary_slot(u);
    double incoming = 0.0;
    for (std::size_t b : g.arcs_into(u)) incoming += s.internal[b];
    if (slot) incoming += s.tails[*slot].inbound(0);
    const double spread = 2.0 / inst.tilde_degree(u) * incoming;
    for (std::size_t a : g.arcs_out_of(u)) next.internal[a] = eps * (spread - s.internal[g.reverse_arc(a)]);
    if (slot) launched[*slot] = eps * (spread - s.tails[*slot].inbound(0));
  }
  for (std::size_t j = 0; j < inst.tail_count(); ++j)
    next.tails[j].advance(to_double(inst.inflow()[j]), launched[j]);
  return next;
}

struct SimulationOptions {
  std::size_t steps = 2000;
  double tolerance = 1e-10;  ///< residual below which convergence is declared
  std::optional<std::size_t> horizon;  ///< default steps + 2
};

struct SimulationTrace {
  std::vector<std::vector<double>> snapshots;  ///< internal amplitudes after steps 1..T
  std::vector<double> residuals;               ///< sup |psi_n - psi_{n-1}| on A0
  TruncatedState final_state;
  std::optional<std::size_t> converged_at;     ///< first step with residual < tolerance
  std::optional<double> distance_to_exact;     ///< sup-norm against the exact state

  std::size_t steps() const noexcept { return residuals.size(); }
};

inline double sup_distance(const std::vector<double>& x, const ArcField& exact) {
  double d = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) d = std::max(d, std::abs(x[a] - to_double(exact[a])));
  return d;
}

/// Iterates from the initial state. The tail horizon defaults to steps + 2, so
/// amplitudes reflected at the cut cannot reach the internal graph in time.
inline SimulationTrace simulate(const WalkInstance& inst, const SimulationOptions& opts,
                                const std::optional<ArcField>& exact = std::nullopt) {
  if (opts.steps < 1) throw std::invalid_argument("simulate: need at least one step");
  SimulationTrace trace;
  TruncatedState state = TruncatedState::initial(inst, opts.horizon.value_or(opts.steps + 2));
  trace.snapshots.reserve(opts.steps);
  trace.residuals.reserve(opts.steps);
  for (std::size_t n = 1; n <= opts.steps; ++n) {
    TruncatedState next = step(state, inst);
    double residual = 0.0;
    for (std::size_t a = 0; a < next.internal.size(); ++a)
      residual = std::max(residual, std::abs(next.internal[a] - state.internal[a]));
    trace.residuals.push_back(residual);
    trace.snapshots.push_back(next.internal);
    if (!trace.converged_at && residual < opts.tolerance) trace.converged_at = n;
    state = std::move(next);
  }
  if (exact) trace.distance_to_exact = sup_distance(state.internal, *exact);
  trace.final_state = std::move(state);
  return trace;
}

inline SimulationTrace simulate(const WalkInstance& inst, std::size_t steps,
                                const std::optional<ArcField>& exact = std::nullopt) {
  SimulationOptions opts;
  opts.steps = steps;
  return simulate(inst, opts, exact);
}

/// Internal amplitudes after step n in the frame of the unsigned Grover walk
/// with alternating tail inflow: multiplies by z^n (a no-op for z = +1).
inline std::vector<double> unsigned_frame(std::vector<double> internal, std::size_t n, Phase z) {
  if (z == Phase::minus_one && n % 2 == 1)
    for (auto& x : internal) x = -x;
  return internal;
}

/// Half the squared mass of a floating-point internal state.
inline double comfortability(const std::vector<double>& internal) {
  double s = 0.0;
  for (double x : internal) s += x * x;
  return s / 2;
}

/// CSV trace: one row per (step, internal arc), arcs in (origin, terminus)
/// order, with that step's residual repeated on each row.
inline void write_trace_csv(std::ostream& os, const WalkInstance& inst, const SimulationTrace& trace) {
  os << "step,arc_origin,arc_terminus,amplitude,residual\n";
  os.precision(17);
  const auto& arcs = inst.graph().arcs();
  for (std::size_t n = 0; n < trace.steps(); ++n)
    for (std::size_t a = 0; a < arcs.size(); ++a)
      os << n + 1 << ',' << arcs[a].origin << ',' << arcs[a].terminus << ',' << trace.snapshots[n][a] + 0.0 << ','
         << trace.residuals[n] << '\n';
}

}  // namespace gqw
