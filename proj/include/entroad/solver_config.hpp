#pragma once

#include <cstddef>
#include <cstdint>

namespace entroad {

struct SolverConfig {
  double tol_value = 1e-8;
  double tol_membership = 1e-9;
  std::size_t max_iters = 10000;
  /// Objective values above this along a feasible ray count as +inf.
  double unbounded_threshold = 1e12;
  /// Points per axis for the brute-force oracle.
  std::size_t grid_resolution = 1000;
  std::uint64_t seed = 0;
  /// Evaluate pushforward objectives as black boxes (one inner solve per
  /// probe) instead of lifting them into a single program. Tests use this to
  /// cross-check functoriality.
  bool nested_pushforward = false;

  /// Throws DomainError unless every tolerance is positive.
  void validate() const;
};

}  // namespace entroad
