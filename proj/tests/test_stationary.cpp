#include <random>

#include <gtest/gtest.h>

#include "gqw/stationary.hpp"
#include "oracles.hpp"

using namespace gqw;

namespace {

const Graph k3(3, {{1, 2}, {1, 3}, {2, 3}});
const Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
const Graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
const Graph p3(3, {{1, 2}, {2, 3}});

oracle::Edges edges_of(const Graph& g) {
  oracle::Edges e;
  for (const auto& x : g.edges()) e.emplace_back(x.u, x.v);
  return e;
}

/// Long run of the independent walk; returns the internal arc amplitudes in
/// Graph::arcs() order.
std::vector<double> iterate_oracle(const WalkInstance& inst, int steps) {
  const Graph& g = inst.graph();
  oracle::TailedWalk w(g.order(), edges_of(g), inst.boundary(), steps + 2, sign(inst.phase()));
  std::vector<double> x(w.arcs.size(), 0.0);
  for (std::size_t j = 0; j < inst.tail_count(); ++j) {
    // inbound arcs: further vertex -> nearer vertex along the tail
    std::vector<int> chain{inst.boundary()[j]};
    for (bool grew = true; grew;) {
      grew = false;
      for (int a : w.out[chain.back()]) {
        const int t = w.arcs[a].to;
        if (t > g.order() && (chain.size() < 2 || t != chain[chain.size() - 2])) {
          chain.push_back(t);
          grew = true;
          break;
        }
      }
    }
    for (std::size_t k = 1; k < chain.size(); ++k)
      x[w.index.at({chain[k], chain[k - 1]})] = to_double(inst.inflow()[j]);
  }
  for (int n = 0; n < steps; ++n) x = w.step(x);
  std::vector<double> internal;
  for (const auto& a : g.arcs()) internal.push_back(x[w.index.at({a.origin, a.terminus})]);
  return internal;
}

}  // namespace

TEST(Stationary, InternalOperatorIsSingularForK4) {
  const auto inst = WalkInstance::standard(k4, 1, 4);
  EXPECT_EQ(rank(RatMatrix::identity(12) - internal_operator(inst)), 10u);
  EXPECT_EQ(StationarySolver(inst).kernel_dimension(), 2u);
}

TEST(Stationary, FixedPointEquation) {
  for (const auto& g : {k3, k4, c4, p3})
    for (Phase z : {Phase::minus_one, Phase::plus_one}) {
      const auto inst = WalkInstance::standard(g, 1, g.order(), z);
      const auto psi = stationary_state(inst);
      auto next = internal_operator(inst) * psi.values;
      const auto rho = source_vector(inst);
      for (std::size_t a = 0; a < next.size(); ++a) next[a] += rho[a];
      EXPECT_EQ(next, psi.values);
    }
}

TEST(Stationary, AgreesWithIndependentIteration) {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> d(-3, 3);
  for (const auto& g : {k3, k4, c4, p3, Graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {2, 4}})})
    for (Phase z : {Phase::minus_one, Phase::plus_one}) {
      const WalkInstance inst(g, {1, 2, g.order()}, {Rational(d(rng)), Rational(d(rng)), Rational(d(rng))}, z);
      const auto psi = stationary_state(inst);
      const auto approx = iterate_oracle(inst, 2000);
      for (std::size_t a = 0; a < psi.size(); ++a) EXPECT_NEAR(approx[a], to_double(psi[a]), 1e-7);
    }
}

TEST(Stationary, TriangleIsPerfectReflector) {
  const WalkInstance inst(k3, {1, 3}, {Rational(9), Rational(9)});
  const auto rep = scattering(inst);
  EXPECT_TRUE(rep.reflects());
  EXPECT_EQ(rep.beta, inst.inflow());
  EXPECT_EQ(rep.classification, ScatteringClass::perfect_reflection);
}

TEST(Stationary, PathTransmits) {
  const auto inst = WalkInstance::standard(p3, 1, 3);
  const auto rep = scattering(inst);
  EXPECT_EQ(rep.classification, ScatteringClass::bipartite_tau);
  EXPECT_TRUE(rep.orthogonal);
  EXPECT_TRUE(rep.matches_prediction());
  // both ends on the same side: tau swaps with a sign flip
  EXPECT_EQ(rep.beta, (RatVector{0, -1}));
}

TEST(Stationary, PredictedScatteringEntrywise) {
  // tau(i, j) = -s_i s_j (2/r - delta_ij) with s = +1 on X, -1 on Y
  const Graph g(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}});
  const WalkInstance inst(g, {4, 1, 2}, {Rational(1), Rational(0), Rational(0)});
  const auto tau = predicted_scattering(inst);
  const int s[] = {-1, 1, -1};  // 4 and 2 share a side, 1 is on the other
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_EQ(tau(i, j), -s[i] * s[j] * (make_rational(2, 3) - (i == j ? 1 : 0)));
  EXPECT_EQ(scattering(inst).sigma, tau);
}

TEST(Stationary, ConstancyDetectsPerturbation) {
  const auto inst = WalkInstance::standard(c4, 1, 2);
  auto psi = stationary_state(inst);
  EXPECT_TRUE(constancy_violations(inst, psi).empty());
  psi[0] += 1;
  EXPECT_FALSE(constancy_violations(inst, psi).empty());
}

TEST(Stationary, ComfortabilityLinearInResponses) {
  const auto inst = WalkInstance(c4, {1, 3}, {Rational(2), Rational(-1)});
  const StationarySolver solver(inst);
  const auto psi = solver.solve(inst.inflow());
  for (std::size_t a = 0; a < psi.size(); ++a)
    EXPECT_EQ(psi[a], 2 * solver.unit_response(0)[a] - solver.unit_response(1)[a]);
}
