#pragma once

// Dense two-phase simplex for the small linear programs behind feasibility
// decisions, and the relative-interior search built on it.

#include <cstddef>
#include <vector>

#include "entroad/linear_system.hpp"

namespace entroad {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = 0.0;
};

/// maximize c.x  s.t.  a_eq x = b_eq,  a_le x <= b_le,  x free.
/// Bland's rule throughout, so degenerate problems cannot cycle.
LpResult lp_maximize(const Vector& c, const Matrix& a_eq, const Vector& b_eq, const Matrix& a_le,
                     const Vector& b_le);

/// A LinearSystem in dense form with every row scaled to unit norm. All-zero
/// rows are checked and dropped at construction.
struct DenseConstraints {
  std::size_t n = 0;
  Matrix a_eq;
  Vector b_eq;
  Matrix g;  // g x <= h (or < h where strict)
  Vector h;
  std::vector<bool> strict;
  bool trivially_infeasible = false;

  static DenseConstraints from(const LinearSystem& sys, double tol);
};

struct RelativeInterior {
  bool feasible = false;
  Vector x;
  /// Inequality rows (indices into DenseConstraints::g) that hold with
  /// equality on the whole set.
  std::vector<std::size_t> implicit_equalities;
};

/// Finds a point of the relative interior, or reports the set empty. A strict
/// row that is an implicit equality (max slack <= tol_strict) empties the set.
RelativeInterior find_relative_interior(const DenseConstraints& dc, double tol_membership, double tol_strict);

/// Convenience: is the system feasible, honouring strict rows?
bool is_feasible(const LinearSystem& sys, double tol_membership);

}  // namespace entroad
