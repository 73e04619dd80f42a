#include <random>

#include <gtest/gtest.h>

#include "gqw/matrix.hpp"
#include "gqw/rational.hpp"
#include "oracles.hpp"

using namespace gqw;

TEST(Rational, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-7/14"), make_rational(-1, 2));
  EXPECT_EQ(parse_rational("+2/4"), make_rational(1, 2));
  EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
}

TEST(Rational, RejectsMalformed) {
  for (const char* bad : {"", "1/0", "a", "1/", "/2", "1.5", "2//3", "- 1"}) {
    EXPECT_FALSE(try_parse_rational(bad).has_value()) << bad;
    EXPECT_THROW(parse_rational(bad), InputError) << bad;
  }
}

namespace {

RatMatrix random_matrix(std::mt19937& rng, std::size_t k, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  RatMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = make_rational(d(rng), 1 + (d(rng) & 1));
  return m;
}

std::vector<std::vector<oracle::Q>> rows(const RatMatrix& m) {
  std::vector<std::vector<oracle::Q>> r(m.rows(), std::vector<oracle::Q>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

}  // namespace

TEST(Matrix, DeterminantMatchesLeibniz) {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + trial % 6;
    const auto m = random_matrix(rng, k, -3, 3);
    EXPECT_EQ(det(m), oracle::leibniz_det(rows(m)));
  }
}

TEST(Matrix, EmptyDeterminantIsOne) { EXPECT_EQ(det(RatMatrix(0, 0)), Rational(1)); }

TEST(Matrix, SolveRoundTrip) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + trial % 7;
    const auto m = random_matrix(rng, k, -4, 4);
    if (det(m) == 0) continue;
    RatVector b(k);
    for (std::size_t i = 0; i < k; ++i) b[i] = static_cast<long>(i) - 2;
    EXPECT_EQ(m * solve(m, b), b);
  }
}

TEST(Matrix, SingularSolveReportsRank) {
  const RatMatrix m{{1, 2}, {2, 4}};
  try {
    solve(m, RatVector{1, 1});
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.rank(), 1u);
  }
}

TEST(Matrix, NullspaceAnnihilates) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_matrix(rng, 5, -2, 2);
    // force dependent rows
    for (std::size_t j = 0; j < 5; ++j) m(4, j) = m(0, j) + m(1, j);
    const auto n = nullspace(m);
    EXPECT_EQ(n.cols() + rank(m), 5u);
    EXPECT_EQ(m * n, RatMatrix(5, n.cols()));
  }
}

TEST(Matrix, ConsistentAndInconsistentRectangular) {
  const RatMatrix a{{1, 1}, {1, -1}, {2, 0}};
  auto x = solve_consistent(a, {3, 1, 4});
  ASSERT_TRUE(x);
  EXPECT_EQ(a * *x, (RatVector{3, 1, 4}));
  EXPECT_FALSE(solve_consistent(a, {3, 1, 5}));
}
