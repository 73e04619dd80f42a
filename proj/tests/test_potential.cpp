#include <gtest/gtest.h>

#include "gqw/potential.hpp"

using namespace gqw;

namespace {
const Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
const Graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
}  // namespace

TEST(Incidence, EdgeAndArcIdentities) {
  for (const auto& g : enumerate_connected(4)) {
    const auto b = incidence_oriented(g);
    const auto bt = incidence_nonoriented(g);
    EXPECT_EQ(b * b.transpose(), laplacian(g));
    EXPECT_EQ(bt * bt.transpose(), signless_laplacian(g));
    const auto c = arc_incidence(g, true);
    const auto ct = arc_incidence(g, false);
    EXPECT_EQ(c * c.transpose(), Rational(2) * laplacian(g));
    EXPECT_EQ(ct * ct.transpose(), Rational(2) * signless_laplacian(g));
  }
  EXPECT_EQ(rank(incidence_nonoriented(k4)), 4u);
  EXPECT_NE(det(signless_laplacian(k4)), 0);
  EXPECT_EQ(det(signless_laplacian(c4)), 0);
}

TEST(Routes, LaplacianRouteOnC4) {
  const auto inst = WalkInstance::standard(c4, 1, 4);
  const auto route = bipartite_route(inst);
  EXPECT_EQ(route.decomposition.rho, make_rational(1, 2));
  EXPECT_EQ(route.comfortability, make_rational(19, 16));
  EXPECT_EQ(route.psi, stationary_state(inst));
  EXPECT_EQ(route.q(1), make_rational(1, 2));
  EXPECT_EQ(route.q(4), make_rational(-1, 2));
}

TEST(Routes, SignlessRouteOnK4) {
  const auto inst = WalkInstance::standard(k4, 1, 4);
  const auto route = nonbipartite_route(inst);
  EXPECT_EQ(route.comfortability, make_rational(5, 12));
  EXPECT_EQ(route.psi, stationary_state(inst));
  EXPECT_THROW(bipartite_route(inst), PreconditionError);
  EXPECT_THROW(nonbipartite_route(WalkInstance::standard(c4, 1, 2)), PreconditionError);
}

TEST(Routes, UnsignedWalkUsesLaplacianEverywhere) {
  const auto inst = WalkInstance::standard(k4, 1, 2, Phase::plus_one);
  const auto route = bipartite_route(inst);
  EXPECT_EQ(route.comfortability, make_rational(13, 8));
  EXPECT_EQ(route.psi, stationary_state(inst));
}

TEST(Audit, PassesOnStationaryAndCatchesDamage) {
  for (const auto& g : {k4, c4})
    for (Phase z : {Phase::minus_one, Phase::plus_one}) {
      const auto inst = WalkInstance::standard(g, 1, 3, z);
      auto psi = stationary_state(inst);
      const auto ok = kirchhoff_audit(inst, psi);
      EXPECT_TRUE(ok.passed());
      EXPECT_GT(ok.checks, g.size());
      psi[1] += make_rational(1, 7);
      EXPECT_FALSE(kirchhoff_audit(inst, psi).passed());
    }
}

TEST(Audit, VoltageLawCatchesCirculation) {
  // adding a unit circulation around the 4-cycle keeps the current law but
  // breaks the voltage law
  const auto inst = WalkInstance::standard(c4, 1, 3);
  auto psi = stationary_state(inst);
  const auto& g = inst.graph();
  const auto parts = *bipartition(g).partition;
  for (auto [u, v] : {std::pair{1, 2}, {2, 3}, {3, 4}, {4, 1}}) {
    psi[g.arc_index({u, v})] += parts.in_x(v) ? 1 : -1;
    psi[g.arc_index({v, u})] -= parts.in_x(u) ? 1 : -1;
  }
  const auto rep = kirchhoff_audit(inst, psi);
  ASSERT_FALSE(rep.passed());
  for (const auto& v : rep.violations) EXPECT_EQ(v.law, "voltage law");
}
