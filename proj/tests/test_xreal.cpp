#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "entroad/errors.hpp"
#include "entroad/xreal.hpp"
#include "gen.hpp"

using namespace entroad;
using entroad::testing::any_ext_real;
using entroad::testing::any_lambda;

namespace {

const ExtReal kPos = ExtReal::pos_inf();
const ExtReal kNeg = ExtReal::neg_inf();

// Reference semantics written out case by case.
ExtReal oracle_add(ExtReal a, ExtReal b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return kNeg;
  if (a.is_pos_inf() || b.is_pos_inf()) return kPos;
  return a.value() + b.value();
}

ExtReal oracle_combine(double l, ExtReal a, ExtReal b) {
  if (l == 1.0) return a;
  if (l == 0.0) return b;
  if (a.is_neg_inf() || b.is_neg_inf()) return kNeg;
  if (a.is_pos_inf() || b.is_pos_inf()) return kPos;
  return l * a.value() + (1 - l) * b.value();
}

bool close(ExtReal a, ExtReal b, double tol = 1e-9) {
  if (!a.is_finite() || !b.is_finite()) return a == b;
  return std::abs(a.value() - b.value()) <= tol * (1 + std::abs(a.value()));
}

}  // namespace

TEST(ExtReal, AdditionTable) {
  EXPECT_EQ(xr_add(kPos, kNeg), kNeg);
  EXPECT_EQ(xr_add(kNeg, kPos), kNeg);
  EXPECT_EQ(xr_add(kPos, kPos), kPos);
  EXPECT_EQ(xr_add(kNeg, kNeg), kNeg);
  EXPECT_EQ(xr_add(kPos, 3.0), kPos);
  EXPECT_EQ(xr_add(-7.0, kNeg), kNeg);
  EXPECT_EQ(xr_add(1.5, 2.25), ExtReal(3.75));
}

TEST(ExtReal, CombineTable) {
  EXPECT_EQ(xr_combine(0.5, kNeg, kPos), kNeg);
  EXPECT_EQ(xr_combine(0.5, kPos, kNeg), kNeg);
  EXPECT_EQ(xr_combine(0.3, kPos, 2.0), kPos);
  EXPECT_EQ(xr_combine(0.3, 2.0, kNeg), kNeg);
  EXPECT_EQ(xr_combine(1.0, kPos, kNeg), kPos);
  EXPECT_EQ(xr_combine(0.0, kPos, kNeg), kNeg);
  EXPECT_EQ(xr_combine(0.0, kNeg, 4.0), ExtReal(4.0));
  EXPECT_EQ(xr_combine(0.25, 4.0, 8.0), ExtReal(7.0));
}

TEST(ExtReal, CombineRejectsLambdaOutsideUnitInterval) {
  EXPECT_THROW(xr_combine(-0.1, 1.0, 2.0), DomainError);
  EXPECT_THROW(xr_combine(1.5, 1.0, 2.0), DomainError);
  EXPECT_THROW(xr_combine(std::nan(""), 1.0, 2.0), DomainError);
}

TEST(ExtReal, NanIsRejected) { EXPECT_THROW(ExtReal(std::nan("")), DomainError); }

TEST(ExtReal, OrderIsTotal) {
  EXPECT_LT(kNeg, ExtReal(-1e300));
  EXPECT_LT(ExtReal(1e300), kPos);
  EXPECT_LT(ExtReal(-1.0), ExtReal(2.0));
}

TEST(ExtReal, SupOfEmptyIsNegInf) {
  const std::vector<ExtReal> none;
  EXPECT_EQ(xr_sup(none), kNeg);
  const std::vector<ExtReal> some{1.0, kNeg, 7.5, 3.0};
  EXPECT_EQ(xr_sup(some), ExtReal(7.5));
  const std::vector<ExtReal> top{1.0, kPos};
  EXPECT_EQ(xr_sup(top), kPos);
}

TEST(ExtReal, Serialization) {
  EXPECT_EQ(to_string(kPos), "+inf");
  EXPECT_EQ(to_string(kNeg), "-inf");
  EXPECT_EQ(parse_ext_real("+inf"), kPos);
  EXPECT_EQ(parse_ext_real("-inf"), kNeg);
  EXPECT_THROW(parse_ext_real("inf"), DomainError);
  EXPECT_THROW(parse_ext_real("+INF"), DomainError);
  EXPECT_THROW(parse_ext_real("nan"), DomainError);
  EXPECT_THROW(parse_ext_real("1.5x"), DomainError);
}

TEST(ExtRealProperty, SerializationRoundTrips) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const ExtReal x = i % 3 == 0 ? any_ext_real(rng) : ExtReal(std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.index(200)) - 100));
    EXPECT_EQ(parse_ext_real(to_string(x)), x) << to_string(x);
  }
}

TEST(ExtRealProperty, MatchesCaseOracle) {
  Rng rng(7);
  for (int i = 0; i < 5000; ++i) {
    const ExtReal a = any_ext_real(rng), b = any_ext_real(rng);
    const double l = any_lambda(rng);
    EXPECT_EQ(xr_add(a, b), oracle_add(a, b));
    EXPECT_TRUE(close(xr_combine(l, a, b), oracle_combine(l, a, b)));
  }
}

TEST(ExtRealProperty, ConvexSpaceAxioms) {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const ExtReal x = any_ext_real(rng), y = any_ext_real(rng), z = any_ext_real(rng);
    const double l = any_lambda(rng), m = any_lambda(rng);
    EXPECT_EQ(xr_combine(1.0, x, y), x);
    EXPECT_EQ(xr_combine(l, x, x), x);
    EXPECT_TRUE(close(xr_combine(l, x, y), xr_combine(1 - l, y, x)));
    const double lm = l * m;
    if (lm == 1.0) continue;
    const double mp = l * (1 - m) / (1 - lm);
    EXPECT_TRUE(close(xr_combine(l, xr_combine(m, x, y), z), xr_combine(lm, x, xr_combine(mp, y, z))))
        << "seed 3 case " << i;
  }
}

TEST(ExtRealProperty, AdditionIsCommutativeAndAssociative) {
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const ExtReal a = any_ext_real(rng), b = any_ext_real(rng), c = any_ext_real(rng);
    EXPECT_EQ(xr_add(a, b), xr_add(b, a));
    EXPECT_TRUE(close(xr_add(xr_add(a, b), c), xr_add(a, xr_add(b, c))));
    EXPECT_EQ(xr_add(a, 0.0), a);
  }
}

TEST(ExtRealProperty, AdditionIsAffineForCombine) {
  // c(a + b, a' + b') >= c(a, a') + c(b, b'), with equality on finite values.
  Rng rng(9);
  for (int i = 0; i < 5000; ++i) {
    const ExtReal a = any_ext_real(rng), b = any_ext_real(rng), c = any_ext_real(rng), d = any_ext_real(rng);
    const double l = any_lambda(rng);
    const ExtReal lhs = xr_combine(l, xr_add(a, c), xr_add(b, d));
    const ExtReal rhs = xr_add(xr_combine(l, a, b), xr_combine(l, c, d));
    EXPECT_TRUE(lhs >= rhs || close(lhs, rhs));
  }
}
