#include <gtest/gtest.h>

#include "entroad/convex.hpp"
#include "entroad/errors.hpp"
#include "gen.hpp"

using namespace entroad;

namespace {

ConvexSpace triangle() {
  // x >= 0, y > 0, x + y <= 2
  return ConvexSpace::polyhedron(2, {}, {HalfSpace{{-1, 0}, 0.0}, HalfSpace{{0, -1}, 0.0, true}, HalfSpace{{1, 1}, 2.0}});
}

}  // namespace

TEST(ConvexSpace, Dimensions) {
  EXPECT_EQ(ConvexSpace::simplex(2).dim(), 3u);
  EXPECT_EQ(ConvexSpace::orthant(3).dim(), 3u);
  EXPECT_EQ(ConvexSpace::real_line(1).dim(), 1u);
  EXPECT_EQ(ConvexSpace::point().dim(), 0u);
  EXPECT_EQ(product(ConvexSpace::simplex(1), ConvexSpace::orthant(2)).dim(), 4u);
  EXPECT_EQ(product(std::vector<ConvexSpace>{}).dim(), 0u);
}

TEST(ConvexSpace, Membership) {
  const ConvexSpace s = ConvexSpace::simplex(2);
  EXPECT_TRUE(contains(s, make_state({0.2, 0.3, 0.5})));
  EXPECT_TRUE(contains(s, make_state({1, 0, 0})));
  EXPECT_FALSE(contains(s, make_state({0.5, 0.6, -0.1})));
  EXPECT_FALSE(contains(s, make_state({0.5, 0.6, 0.1})));
  EXPECT_TRUE(contains(s, make_state({0.5, 0.5 + 5e-10, -5e-10})));

  const ConvexSpace t = triangle();
  EXPECT_TRUE(contains(t, make_state({0, 1})));
  EXPECT_FALSE(contains(t, make_state({1, 0})));  // strict face
  EXPECT_FALSE(contains(t, make_state({1.5, 1})));
  EXPECT_TRUE(contains(ConvexSpace::point(), State(0)));
}

TEST(ConvexSpace, WrongDimensionIsADomainError) {
  EXPECT_THROW(contains(ConvexSpace::orthant(2), make_state({1})), DomainError);
  EXPECT_THROW(combine(ConvexSpace::orthant(1), 0.5, make_state({1}), make_state({1, 2})), DomainError);
}

TEST(ConvexSpace, CombineChecksArguments) {
  const ConvexSpace s = ConvexSpace::orthant(1);
  EXPECT_THROW(combine(s, 1.5, make_state({1}), make_state({2})), DomainError);
  EXPECT_THROW(combine(s, 0.5, make_state({-1}), make_state({2})), DomainError);
  EXPECT_EQ(combine(s, 0.25, make_state({4}), make_state({8}))[0], 7.0);
}

TEST(ConvexSpace, PolyhedronValidatesShapes) {
  EXPECT_THROW(ConvexSpace::polyhedron(2, {Hyperplane{{1}, 0.0}}, {}), DomainError);
  EXPECT_THROW(ConvexSpace::polyhedron(1, {}, {HalfSpace{{1, 1}, 0.0}}), DomainError);
}

TEST(ConvexSpace, ProductsCompareStructurally) {
  const ConvexSpace a = ConvexSpace::orthant(1), b = ConvexSpace::simplex(1);
  EXPECT_TRUE(same_space(product(product(a, b), a), product(a, product(b, a))));
  EXPECT_TRUE(same_space(ConvexSpace::orthant(2), product(a, a)));
  EXPECT_FALSE(same_space(product(a, b), product(b, a)));
  EXPECT_TRUE(same_space(product(a, ConvexSpace::point()), a));
}

TEST(ConvexSpace, Labels) {
  const ConvexSpace gas = ConvexSpace::orthant(3).with_labels({"U", "V", "N"});
  EXPECT_EQ(coordinate_labels(gas, "x"), (std::vector<std::string>{"U", "V", "N"}));
  EXPECT_EQ(coordinate_labels(product(gas, ConvexSpace::real_line(1)), "x"),
            (std::vector<std::string>{"U", "V", "N", "x3"}));
  EXPECT_THROW(ConvexSpace::orthant(2).with_labels({"a"}), DomainError);
}

TEST(ConvexSpace, SamplingStaysInsideAndIsSeeded) {
  const ConvexSpace spaces[] = {ConvexSpace::simplex(3), ConvexSpace::orthant(2), triangle(),
                                product(ConvexSpace::simplex(1), ConvexSpace::real_line(2))};
  for (const auto& s : spaces) {
    const BoundingBox box = BoundingBox::uniform(s.dim(), -3.0, 3.0);
    const auto a = sample(s, box, 99, 200);
    const auto b = sample(s, box, 99, 200);
    ASSERT_EQ(a.size(), 200u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_TRUE(contains(s, a[i])) << s.describe();
      EXPECT_EQ(a[i], b[i]);
      for (Eigen::Index k = 0; k < a[i].size(); ++k) {
        EXPECT_GE(a[i][k], -3.0 - 1e-12);
        EXPECT_LE(a[i][k], 3.0 + 1e-12);
      }
    }
  }
}

TEST(ConvexSpace, SamplingAnEmptyRegionGivesUp) {
  const ConvexSpace s = ConvexSpace::polyhedron(1, {}, {HalfSpace{{1}, -5.0}});
  EXPECT_THROW(sample(s, BoundingBox::uniform(1, 0.0, 1.0), 1, 3), SamplingError);
}

TEST(ConvexSpaceProperty, CombineAxiomsOnSampledPoints) {
  Rng rng(21);
  const ConvexSpace spaces[] = {ConvexSpace::simplex(2), ConvexSpace::orthant(3), triangle(),
                                product(ConvexSpace::simplex(1), ConvexSpace::orthant(1))};
  for (const auto& s : spaces) {
    const auto pts = sample(s, BoundingBox::uniform(s.dim(), 0.0, 3.0), 5, 300);
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
      const State &x = pts[i], &y = pts[i + 1], &z = pts[i + 2];
      const double l = entroad::testing::any_lambda(rng), m = entroad::testing::any_lambda(rng);
      EXPECT_EQ(combine(s, 1.0, x, y), x);
      EXPECT_EQ(combine(s, l, x, x), x);
      EXPECT_LE((combine(s, l, x, y) - combine(s, 1 - l, y, x)).lpNorm<Eigen::Infinity>(), 1e-12);
      EXPECT_TRUE(contains(s, combine(s, l, x, y)));
      if (l * m == 1.0) continue;
      const State lhs = combine(s, l, combine(s, m, x, y), z);
      const State rhs = combine(s, l * m, x, combine(s, l * (1 - m) / (1 - l * m), y, z));
      EXPECT_LE((lhs - rhs).lpNorm<Eigen::Infinity>(), 1e-12);
    }
  }
}
