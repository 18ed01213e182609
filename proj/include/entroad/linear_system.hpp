#pragma once

// Sparse linear constraint systems over a growable variable set. Spaces and
// relations lower themselves into one of these; the optimizer consumes them.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace entroad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Sense { eq, le, lt };

/// sum_k coef_k * x_{index_k}  (sense)  rhs
struct LinearRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double rhs = 0.0;
  Sense sense = Sense::eq;

  double lhs(const Vector& x) const {
    double s = 0.0;
    for (auto [i, c] : terms) s += c * x[static_cast<Eigen::Index>(i)];
    return s;
  }
};

struct LinearSystem {
  std::size_t num_vars = 0;
  std::vector<LinearRow> rows;

  /// Appends k variables, returning the index of the first.
  std::size_t add_vars(std::size_t k) {
    const std::size_t first = num_vars;
    num_vars += k;
    return first;
  }

  void add_row(LinearRow row) { rows.push_back(std::move(row)); }

  /// Every row holds within `tol`; strict rows must hold exactly.
  bool satisfied_by(const Vector& x, double tol) const {
    for (const auto& r : rows) {
      const double v = r.lhs(x);
      switch (r.sense) {
        case Sense::eq:
          if (std::abs(v - r.rhs) > tol) return false;
          break;
        case Sense::le:
          if (v > r.rhs + tol) return false;
          break;
        case Sense::lt:
          if (!(v < r.rhs)) return false;
          break;
      }
    }
    return true;
  }
};

/// Feasible set handed to the optimizer: the objective reads the first `dim`
/// variables; any further variables are lifted intermediates.
struct ConstraintSet {
  std::size_t dim = 0;
  LinearSystem system;
};

}  // namespace entroad
