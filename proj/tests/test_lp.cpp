#include <gtest/gtest.h>

#include <limits>

#include "entroad/lp.hpp"
#include "entroad/random.hpp"

using namespace entroad;

namespace {

// Max of c.x over {g x <= h} by enumerating every vertex: each choice of n
// tight rows that is nonsingular and feasible. Returns -inf when none is.
double vertex_oracle(const Vector& c, const Matrix& g, const Vector& h) {
  const Eigen::Index n = g.cols(), m = g.rows();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = static_cast<int>(i);
  while (true) {
    Matrix a(n, n);
    Vector b(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      a.row(k) = g.row(pick[static_cast<std::size_t>(k)]);
      b[k] = h[pick[static_cast<std::size_t>(k)]];
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.isInvertible()) {
      const Vector x = lu.solve(b);
      if (((g * x - h).array() <= 1e-9).all()) best = std::max(best, c.dot(x));
    }
    // next n-combination of m rows
    Eigen::Index k = n - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == static_cast<int>(m - n + k)) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (Eigen::Index j = k + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

TEST(Lp, SmallKnownProgram) {
  // max x + y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0 -> (8/5, 6/5)
  Matrix g(4, 2);
  g << 1, 2, 3, 1, -1, 0, 0, -1;
  Vector h(4);
  h << 4, 6, 0, 0;
  const LpResult r = lp_maximize(Vector::Ones(2), Matrix(0, 2), Vector(0), g, h);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 2.8, 1e-12);
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
  EXPECT_NEAR(r.x[1], 1.2, 1e-12);
}

TEST(Lp, InfeasibleAndUnbounded) {
  Matrix g(2, 1);
  g << 1, -1;
  Vector h(2);
  h << 1, -2;  // x <= 1 and x >= 2
  EXPECT_EQ(lp_maximize(Vector::Ones(1), Matrix(0, 1), Vector(0), g, h).status, LpStatus::infeasible);
  Matrix g2(1, 1);
  g2 << -1;
  EXPECT_EQ(lp_maximize(Vector::Ones(1), Matrix(0, 1), Vector(0), g2, Vector::Zero(1)).status,
            LpStatus::unbounded);
}

TEST(Lp, EqualitiesAndDegeneracy) {
  // x + y + z = 1 on the simplex with a degenerate extra row x <= 1.
  Matrix aeq = Matrix::Ones(1, 3);
  Matrix g(4, 3);
  g << -1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 0, 0;
  Vector h(4);
  h << 0, 0, 0, 1;
  Vector c(3);
  c << 1, 2, 2;
  const LpResult r = lp_maximize(c, aeq, Vector::Ones(1), g, h);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
}

TEST(LpProperty, AgreesWithVertexEnumeration) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.index(2));
    const Eigen::Index cuts = 1 + static_cast<Eigen::Index>(rng.index(4));
    Matrix g(2 * n + cuts, n);
    Vector h(2 * n + cuts);
    g.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      g(2 * i, i) = 1.0;
      g(2 * i + 1, i) = -1.0;
      h[2 * i] = rng.uniform(0.5, 3.0);
      h[2 * i + 1] = rng.uniform(0.5, 3.0);
    }
    for (Eigen::Index k = 0; k < cuts; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) g(2 * n + k, i) = rng.uniform(-1.0, 1.0);
      h[2 * n + k] = rng.uniform(-0.5, 1.0);
    }
    Vector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = rng.uniform(-1.0, 1.0);

    const double oracle = vertex_oracle(c, g, h);
    const LpResult r = lp_maximize(c, Matrix(0, n), Vector(0), g, h);
    if (std::isinf(oracle)) {
      EXPECT_EQ(r.status, LpStatus::infeasible) << "trial " << trial;
    } else {
      ASSERT_EQ(r.status, LpStatus::optimal) << "trial " << trial;
      EXPECT_NEAR(r.objective, oracle, 1e-8) << "trial " << trial;
      EXPECT_TRUE(((g * r.x - h).array() <= 1e-8).all());
    }
  }
}

TEST(RelativeInterior, FindsInteriorAndImplicitEqualities) {
  // x >= 0, y >= 0, x + y <= 1, x <= 0: the set is the segment x = 0.
  LinearSystem sys;
  sys.add_vars(2);
  sys.add_row({{{0, -1.0}}, 0.0, Sense::le});
  sys.add_row({{{1, -1.0}}, 0.0, Sense::le});
  sys.add_row({{{0, 1.0}, {1, 1.0}}, 1.0, Sense::le});
  sys.add_row({{{0, 1.0}}, 0.0, Sense::le});
  const DenseConstraints dc = DenseConstraints::from(sys, 1e-9);
  const RelativeInterior ri = find_relative_interior(dc, 1e-9, 1e-9);
  ASSERT_TRUE(ri.feasible);
  EXPECT_NEAR(ri.x[0], 0.0, 1e-9);
  EXPECT_GT(ri.x[1], 1e-6);
  EXPECT_LT(ri.x[1], 1.0 - 1e-6);
  EXPECT_EQ(ri.implicit_equalities.size(), 2u);
}

TEST(RelativeInterior, StrictImplicitEqualityEmptiesTheSet) {
  LinearSystem sys;
  sys.add_vars(1);
  sys.add_row({{{0, -1.0}}, 0.0, Sense::lt});  // x > 0
  sys.add_row({{{0, 1.0}}, 0.0, Sense::le});   // x <= 0
  EXPECT_FALSE(is_feasible(sys, 1e-9));
  sys.rows[1].rhs = 1.0;
  EXPECT_TRUE(is_feasible(sys, 1e-9));
}

TEST(RelativeInterior, ZeroRowsAreCheckedAtConstruction) {
  LinearSystem sys;
  sys.add_vars(1);
  sys.add_row({{{0, 0.0}}, -1.0, Sense::le});  // 0 <= -1
  EXPECT_TRUE(DenseConstraints::from(sys, 1e-9).trivially_infeasible);
  EXPECT_FALSE(is_feasible(sys, 1e-9));
}
