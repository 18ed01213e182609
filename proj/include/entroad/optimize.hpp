#pragma once

// Constrained concave maximization: the computational side of the
// pushforward R_*S(y) = sup over the fiber of y.
//
// The solver lifts sums, pushforwards and chain middles into one program over
// a polyhedron, finds a relative-interior point by a phase-one LP, and runs a
// log-barrier Newton method in the null space of the equality constraints.

#include <cstddef>
#include <optional>
#include <string>

#include "entroad/convex.hpp"
#include "entroad/relation.hpp"
#include "entroad/solver_config.hpp"
#include "entroad/system.hpp"
#include "entroad/xreal.hpp"

namespace entroad {

enum class MaxStatus { attained, approached, unbounded, infeasible };

std::string to_string(MaxStatus s);

struct MaxResult {
  ExtReal value = ExtReal::neg_inf();
  /// Only when the value is finite and attained.
  std::optional<State> argmax;
  MaxStatus status = MaxStatus::infeasible;
  std::size_t iterations = 0;
  /// Unit ray along which the objective crossed the unbounded threshold.
  std::optional<Vector> certificate;
};

/// sup of f over the feasible set. f reads the first `feasible.dim`
/// variables. Throws ConvergenceError (with the best point so far) when
/// cfg.max_iters Newton steps do not reach tolerance, DomainError for von
/// Neumann objectives.
MaxResult maximize(const EntropyFn& f, const ConstraintSet& feasible, const SolverConfig& cfg = {});

struct GridSearch {
  ExtReal value = ExtReal::neg_inf();
  std::optional<State> best;
  /// Largest grid step along any reduced axis.
  double spacing = 0.0;
  /// Largest difference quotient between the best point and its neighbours.
  double lipschitz = 0.0;
  std::size_t reduced_dim = 0;
  std::size_t points = 0;
};

inline constexpr std::size_t kBruteForceMaxDim = 4;
inline constexpr std::size_t kBruteForceMaxPoints = 4'000'000;

/// Grid search over the feasible set in coordinates of its affine hull.
/// `box`, when given, bounds every program variable. Refuses (DomainError)
/// when the affine hull has more than kBruteForceMaxDim dimensions. Sets
/// without a finite bounding box are searched in growing boxes up to 1e15.
GridSearch grid_search(const EntropyFn& f, const ConstraintSet& feasible, const SolverConfig& cfg,
                       const std::optional<BoundingBox>& box = std::nullopt);

ExtReal brute_force_sup(const EntropyFn& f, const ConstraintSet& feasible, const SolverConfig& cfg,
                        const std::optional<BoundingBox>& box = std::nullopt);

/// The system on R's target with entropy y -> sup over fiber(R, y) of S.
/// Throws DomainError unless sys lives on R's source.
ThermostaticSystem pushforward(const ThermostaticSystem& sys, const ConvexRelation& r, const SolverConfig& cfg = {});

/// Full solver result at y. For a pushforward system the argmax is a state of
/// the inner system; a y outside the space gives status infeasible. Other
/// systems are evaluated directly.
MaxResult solve_at(const ThermostaticSystem& sys, const State& y, const SolverConfig& cfg);

ExtReal evaluate_pushforward(const EntropyFn::Pushforward& p, const Vector& y);

/// sup over x_0 of S(x_0, fixed) - beta * x_0, within sys's space. `fixed`
/// holds the remaining coordinates in order.
MaxResult legendre_solve(const ThermostaticSystem& sys, double beta, const State& fixed,
                         const SolverConfig& cfg = {});
ExtReal legendre_transform(const ThermostaticSystem& sys, double beta, const State& fixed,
                           const SolverConfig& cfg = {});

}  // namespace entroad
