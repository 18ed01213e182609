#pragma once

// Randomized law suites: convex-space axioms, functoriality of the
// pushforward, naturality of the laxator, equivariance of the operad action,
// and agreement between the optimizer and the grid oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "entroad/convex.hpp"
#include "entroad/solver_config.hpp"
#include "entroad/system.hpp"
#include "entroad/xreal.hpp"

namespace entroad {

struct SuiteReport {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  /// Largest discrepancy seen; +inf when an infinite value disagreed.
  double worst_gap = 0.0;
};

using AddFn = std::function<ExtReal(ExtReal, ExtReal)>;

struct LawOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  /// Addition used on the right-hand side of the laxator identity. Tests
  /// swap in a corrupted table to check that the suite notices.
  AddFn add = xr_add;
  SolverConfig cfg;
  /// Points per axis for the oracle suite.
  std::size_t oracle_resolution = 300;
};

inline constexpr double kLawTolerance = 1e-6;
inline constexpr double kAxiomTolerance = 1e-9;

SuiteReport convex_axiom_suite(const LawOptions& opt);
/// Nested pushforwards against the lifted pushforward along the composite,
/// at five sampled targets per instance.
SuiteReport functoriality_suite(const LawOptions& opt);
/// (Q x R)_*(S + T) against add(Q_*S, R_*T). Every fourth instance pairs a
/// +inf side with a -inf side.
SuiteReport laxator_suite(const LawOptions& opt);
SuiteReport equivariance_suite(const LawOptions& opt);
SuiteReport oracle_suite(const LawOptions& opt);

std::vector<SuiteReport> run_laws(const LawOptions& opt);

/// Fixed-width table, one line per suite.
std::string format_reports(const std::vector<SuiteReport>& reports);

struct ConcavityReport {
  std::size_t triples = 0;
  std::size_t violations = 0;
  /// max of c_lambda(S(x), S(y)) - S(c_lambda(x, y)) over finite triples.
  double worst_excess = 0.0;
};

/// Sampled concavity inequality S(c(x,y)) >= c(S(x), S(y)) - tol.
ConcavityReport check_concavity(const ThermostaticSystem& sys, const BoundingBox& region, std::uint64_t seed,
                                std::size_t triples, double tol = kLawTolerance);
/// The same check for an arbitrary function on `space`.
ConcavityReport check_concavity(const ConvexSpace& space, const std::function<ExtReal(const State&)>& f,
                                const BoundingBox& region, std::uint64_t seed, std::size_t triples,
                                double tol = kLawTolerance);

}  // namespace entroad
