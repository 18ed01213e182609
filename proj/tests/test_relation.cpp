#include <gtest/gtest.h>

#include "entroad/errors.hpp"
#include "entroad/lp.hpp"
#include "entroad/relation.hpp"

using namespace entroad;

namespace {

// {(x, y) : y = x1 + x2} on orthant(2) -> orthant(1)
ConvexRelation merge() {
  return ConvexRelation::affine(ConvexSpace::orthant(2), ConvexSpace::orthant(1),
                                {ConvexRelation::Row{{1, 1}, {-1}, 0.0, Sense::eq}});
}

// {(y, z) : z <= 2y} on orthant(1) -> real(1)
ConvexRelation at_most_double() {
  return ConvexRelation::affine(ConvexSpace::orthant(1), ConvexSpace::real_line(1),
                                {ConvexRelation::Row{{-2}, {1}, 0.0, Sense::le}});
}

}  // namespace

TEST(Relation, AffineMembership) {
  const ConvexRelation r = merge();
  EXPECT_TRUE(member(r, make_state({1, 2}), make_state({3})));
  EXPECT_FALSE(member(r, make_state({1, 2}), make_state({3.1})));
  EXPECT_FALSE(member(r, make_state({-1, 4}), make_state({3})));  // source space enforced
}

TEST(Relation, IdentityAndGraph) {
  const ConvexSpace s = ConvexSpace::orthant(2);
  EXPECT_TRUE(member(identity(s), make_state({1, 2}), make_state({1, 2})));
  EXPECT_FALSE(member(identity(s), make_state({1, 2}), make_state({2, 1})));

  Matrix a(1, 2);
  a << 2, -1;
  const ConvexRelation g =
      ConvexRelation::graph(s, ConvexSpace::real_line(1), AffineMap{a, Vector::Constant(1, 0.5)});
  EXPECT_TRUE(member(g, make_state({1, 1}), make_state({1.5})));
  EXPECT_FALSE(member(g, make_state({1, 1}), make_state({1.0})));
}

TEST(Relation, GraphShapeIsChecked) {
  EXPECT_THROW(ConvexRelation::graph(ConvexSpace::orthant(2), ConvexSpace::real_line(1),
                                     AffineMap{Matrix::Ones(2, 2), Vector::Zero(2)}),
               DomainError);
  EXPECT_THROW(ConvexRelation::affine(ConvexSpace::orthant(2), ConvexSpace::orthant(1),
                                      {ConvexRelation::Row{{1}, {1}, 0.0, Sense::eq}}),
               DomainError);
}

TEST(Relation, FullRelatesEverything) {
  const ConvexRelation f = ConvexRelation::full(ConvexSpace::simplex(1), ConvexSpace::point());
  EXPECT_TRUE(member(f, make_state({0.3, 0.7}), State(0)));
  EXPECT_FALSE(member(f, make_state({0.3, 0.8}), State(0)));
}

TEST(Relation, CompositionDecidesTheMiddle) {
  const ConvexRelation c = compose(merge(), at_most_double());
  // exists y = x1 + x2 with z <= 2y
  EXPECT_TRUE(member(c, make_state({1, 2}), make_state({6})));
  EXPECT_TRUE(member(c, make_state({1, 2}), make_state({-10})));
  EXPECT_FALSE(member(c, make_state({1, 2}), make_state({6.5})));
  EXPECT_THROW(compose(at_most_double(), merge()), DomainError);
}

TEST(Relation, CompositionWithIdentityIsUnchanged) {
  const ConvexRelation r = merge();
  const ConvexRelation left = compose(identity(r.source()), r);
  const ConvexRelation right = compose(r, identity(r.target()));
  for (double y : {2.0, 3.0, 4.0}) {
    const State x = make_state({1, 2}), ys = make_state({y});
    EXPECT_EQ(member(left, x, ys), member(r, x, ys));
    EXPECT_EQ(member(right, x, ys), member(r, x, ys));
  }
}

TEST(Relation, ProductSplitsCoordinates) {
  const ConvexRelation p = rel_product(merge(), identity(ConvexSpace::simplex(1)));
  EXPECT_EQ(p.source().dim(), 4u);
  EXPECT_EQ(p.target().dim(), 3u);
  EXPECT_TRUE(member(p, make_state({1, 2, 0.4, 0.6}), make_state({3, 0.4, 0.6})));
  EXPECT_FALSE(member(p, make_state({1, 2, 0.4, 0.6}), make_state({3, 0.6, 0.4})));
}

TEST(Relation, FiberIsTheConstrainedSet) {
  const ConstraintSet f = fiber(merge(), make_state({3}));
  EXPECT_EQ(f.dim, 2u);
  Vector x(static_cast<Eigen::Index>(f.system.num_vars));
  x.setZero();
  x[0] = 1.0;
  x[1] = 2.0;
  EXPECT_TRUE(f.system.satisfied_by(x, 1e-9));
  x[1] = 2.5;
  EXPECT_FALSE(f.system.satisfied_by(x, 1e-9));
  EXPECT_TRUE(is_feasible(f.system, 1e-9));
  EXPECT_THROW(fiber(merge(), make_state({-1})), DomainError);
}

TEST(Relation, SubstituteRenumbers) {
  LinearSystem sys;
  sys.add_vars(3);
  sys.add_row({{{0, 1.0}, {1, 1.0}, {2, 1.0}}, 5.0, Sense::eq});
  substitute(sys, 0, Vector::Constant(1, 2.0));
  ASSERT_EQ(sys.num_vars, 2u);
  Vector x(2);
  x << 1.0, 2.0;
  EXPECT_TRUE(sys.satisfied_by(x, 1e-12));
  x << 1.0, 1.0;
  EXPECT_FALSE(sys.satisfied_by(x, 1e-12));
}
