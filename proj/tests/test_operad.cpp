#include <gtest/gtest.h>

#include <cmath>

#include "entroad/errors.hpp"
#include "entroad/operad.hpp"

using namespace entroad;

namespace {

const ConvexSpace kLine = ConvexSpace::orthant(1);

ThermostaticSystem tank(double c) { return {kLine, EntropyFn::log_tank(c)}; }

Operation merge2() {
  return make_operation({kLine, kLine}, kLine,
                        ConvexRelation::affine(product(kLine, kLine), kLine,
                                               {ConvexRelation::Row{{1, 1}, {-1}, 0.0, Sense::eq}}));
}

double at(const ThermostaticSystem& s, double u) { return evaluate(s, make_state({u})).value(); }

}  // namespace

TEST(Operad, MakeOperationChecksSpaces) {
  const ConvexRelation r = identity(kLine);
  EXPECT_THROW(make_operation({kLine, kLine}, kLine, r), DomainError);
  EXPECT_THROW(make_operation({kLine}, ConvexSpace::simplex(1), r), DomainError);
}

TEST(Operad, ActSumsThenPushesForward) {
  const ThermostaticSystem s = act(merge2(), {tank(1.0), tank(3.0)});
  // U split 1:3
  EXPECT_NEAR(at(s, 4.0), std::log(1.0) + 3.0 * std::log(3.0), 1e-6);
  EXPECT_THROW(act(merge2(), {tank(1.0)}), DomainError);
}

TEST(Operad, EmptyActionIsZeroOnThePoint) {
  const Operation nothing = make_operation({}, ConvexSpace::point(), identity(ConvexSpace::point()));
  const ThermostaticSystem s = act(nothing, {});
  EXPECT_EQ(evaluate(s, State(0)).value(), 0.0);
}

TEST(Operad, IdentityLaws) {
  const Operation g = merge2();
  const Operation left = op_compose(identity_op(kLine), {g});
  const Operation right = op_compose(g, {identity_op(kLine), identity_op(kLine)});
  const std::vector<ThermostaticSystem> in{tank(2.0), tank(0.5)};
  for (double u : {1.0, 5.0}) {
    const double base = at(act(g, in), u);
    EXPECT_NEAR(at(act(left, in), u), base, 1e-6);
    EXPECT_NEAR(at(act(right, in), u), base, 1e-6);
  }
}

TEST(Operad, AssociativityOfSubstitution) {
  const Operation g = merge2();
  // (g o (g, id)) o (id, id, g) versus g o (g o (id, id), id o g)
  const Operation a = op_compose(op_compose(g, {g, identity_op(kLine)}),
                                 {identity_op(kLine), identity_op(kLine), g});
  const Operation b = op_compose(g, {op_compose(g, {identity_op(kLine), identity_op(kLine)}),
                                     op_compose(identity_op(kLine), {g})});
  ASSERT_EQ(a.inputs.size(), 4u);
  ASSERT_EQ(b.inputs.size(), 4u);
  const std::vector<ThermostaticSystem> in{tank(1), tank(2), tank(3), tank(4)};
  // all four tanks end up sharing U: U_i = C_i U / 10
  for (double u : {2.0, 10.0}) {
    double expected = 0;
    for (double c : {1.0, 2.0, 3.0, 4.0}) expected += c * std::log(c * u / 10.0);
    EXPECT_NEAR(at(act(a, in), u), expected, 1e-6);
    EXPECT_NEAR(at(act(b, in), u), expected, 1e-6);
  }
}

TEST(Operad, CompositionMismatchNamesTheSlot) {
  const Operation to_simplex = make_operation({kLine}, ConvexSpace::simplex(1),
                                              ConvexRelation::full(kLine, ConvexSpace::simplex(1)));
  try {
    op_compose(merge2(), {identity_op(kLine), to_simplex});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(op_compose(merge2(), {identity_op(kLine)}), DomainError);
}

TEST(Operad, PermutationValidation) {
  EXPECT_NO_THROW(Permutation({2, 0, 1}));
  EXPECT_THROW(Permutation({0, 0, 1}), DomainError);
  EXPECT_THROW(Permutation({0, 3}), DomainError);
  EXPECT_EQ(Permutation({2, 0, 1}).apply(std::vector<int>{10, 20, 30}), (std::vector<int>{30, 10, 20}));
}

TEST(Operad, Equivariance) {
  // an asymmetric relation: y = x1 + 2 x2 on a tank and a bath
  const ConvexSpace two = ConvexSpace::real_line(1);
  const Operation op = make_operation(
      {kLine, two}, kLine,
      ConvexRelation::affine(product(kLine, two), kLine, {ConvexRelation::Row{{1, 2}, {-1}, 0.0, Sense::eq}}));
  const ThermostaticSystem bath{two, EntropyFn::heat_bath(2.0)};
  const Permutation swap({1, 0});
  const Operation swapped = permute_op(op, swap);
  EXPECT_TRUE(same_space(swapped.inputs[0], two));
  const std::vector<ThermostaticSystem> in{tank(1.5), bath};
  for (double u : {0.5, 3.0})
    EXPECT_NEAR(at(act(op, in), u), at(act(swapped, swap.apply(in)), u), 1e-6);
}
