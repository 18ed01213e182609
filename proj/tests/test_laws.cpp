#include <gtest/gtest.h>

#include <cmath>

#include "entroad/laws.hpp"

using namespace entroad;

namespace {

LawOptions small(std::uint64_t seed, std::size_t trials) {
  LawOptions opt;
  opt.seed = seed;
  opt.trials = trials;
  return opt;
}

}  // namespace

TEST(Laws, SuitesPassOnASmallRun) {
  for (const SuiteReport& r : run_laws(small(1, 8))) {
    EXPECT_EQ(r.failed, 0u) << r.name << " worst " << r.worst_gap;
    EXPECT_GT(r.passed, 0u) << r.name;
  }
}

TEST(Laws, TrialCountIsHonoured) {
  const SuiteReport r = laxator_suite(small(3, 1));
  EXPECT_EQ(r.passed + r.failed, 1u);
}

TEST(Laws, SameSeedSameReport) {
  const auto a = format_reports(run_laws(small(9, 4)));
  const auto b = format_reports(run_laws(small(9, 4)));
  EXPECT_EQ(a, b);
}

TEST(Laws, CorruptedAdditionBreaksTheLaxator) {
  LawOptions opt = small(5, 8);
  // +inf wins over -inf, the wrong convention
  opt.add = [](ExtReal a, ExtReal b) {
    if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
    return xr_add(a, b);
  };
  const SuiteReport r = laxator_suite(opt);
  EXPECT_GT(r.failed, 0u);
  EXPECT_TRUE(std::isinf(r.worst_gap));
}

TEST(Laws, ConcavityCheckerCatchesConvexFunctions) {
  const ThermostaticSystem tank{ConvexSpace::orthant(1), EntropyFn::log_tank(2.0)};
  const BoundingBox box = BoundingBox::uniform(1, 0.1, 10.0);
  const ConcavityReport ok = check_concavity(tank, box, 1, 200);
  EXPECT_EQ(ok.triples, 200u);
  EXPECT_EQ(ok.violations, 0u);

  const ConcavityReport bad = check_concavity(
      ConvexSpace::orthant(1), [](const State& x) { return ExtReal(x[0] * x[0]); }, box, 1, 200);
  EXPECT_GT(bad.violations, 0u);
  EXPECT_GT(bad.worst_excess, kLawTolerance);
}

TEST(Laws, ReportTableHasOneLinePerSuite) {
  const std::string table = format_reports({{"alpha", 3, 0, 0.0}, {"beta", 1, 2, INFINITY}});
  EXPECT_NE(table.find("alpha"), std::string::npos);
  EXPECT_NE(table.find("+inf"), std::string::npos);
  std::size_t lines = 0;
  for (char c : table) lines += c == '\n';
  EXPECT_GE(lines, 2u);
}
