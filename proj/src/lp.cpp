#include "entroad/lp.hpp"

#include <algorithm>
#include <cmath>

#include "entroad/convex.hpp"

namespace entroad {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr int kMaxPivots = 100000;

// Tableau rows are constraints; the last column is the right-hand side.
struct Tableau {
  Matrix t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows(); }
  Eigen::Index rhs_col() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }
};

enum class RunResult { optimal, unbounded };

// Primal simplex maximizing cost.x over columns with allowed[c] set.
RunResult run_simplex(Tableau& tab, const Vector& cost, const std::vector<bool>& allowed) {
  const Eigen::Index ncols = tab.rhs_col();
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < ncols && enter < 0; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      if (std::find(tab.basis.begin(), tab.basis.end(), j) != tab.basis.end()) continue;
      double reduced = cost[j];
      for (Eigen::Index i = 0; i < tab.rows(); ++i) reduced -= cost[tab.basis[static_cast<std::size_t>(i)]] * tab.t(i, j);
      if (reduced > kCostEps) enter = j;
    }
    if (enter < 0) return RunResult::optimal;

    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < tab.rows(); ++i) {
      const double a = tab.t(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = tab.t(i, tab.rhs_col()) / a;
      if (leave < 0 || ratio < best_ratio - 1e-14 ||
          (std::abs(ratio - best_ratio) <= 1e-14 &&
           tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return RunResult::unbounded;
    tab.pivot(leave, enter);
  }
  return RunResult::optimal;
}

}  // namespace

LpResult lp_maximize(const Vector& c, const Matrix& a_eq, const Vector& b_eq, const Matrix& a_le,
                     const Vector& b_le) {
  const Eigen::Index n = c.size();
  const Eigen::Index me = a_eq.rows();
  const Eigen::Index ml = a_le.rows();
  const Eigen::Index m = me + ml;
  // Columns: u (n), v (n), slack (ml), artificial (m), rhs.
  const Eigen::Index col_slack = 2 * n;
  const Eigen::Index col_art = col_slack + ml;
  const Eigen::Index ncols = col_art + m;

  Tableau tab;
  tab.t = Matrix::Zero(m, ncols + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool is_eq = i < me;
    Eigen::RowVectorXd a = is_eq ? Eigen::RowVectorXd(a_eq.row(i)) : Eigen::RowVectorXd(a_le.row(i - me));
    double b = is_eq ? b_eq[i] : b_le[i - me];
    double slack = is_eq ? 0.0 : 1.0;
    const double sign = b < 0.0 ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n) = sign * a;
    tab.t.block(i, n, 1, n) = -sign * a;
    if (!is_eq) tab.t(i, col_slack + (i - me)) = sign * slack;
    tab.t(i, col_art + i) = 1.0;
    tab.t(i, ncols) = sign * b;
    tab.basis[static_cast<std::size_t>(i)] = col_art + i;
  }

  // Phase one: drive the artificials to zero.
  Vector cost1 = Vector::Zero(ncols);
  cost1.segment(col_art, m).setConstant(-1.0);
  std::vector<bool> all(static_cast<std::size_t>(ncols), true);
  run_simplex(tab, cost1, all);
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] >= col_art) infeas += tab.t(i, ncols);
  }
  LpResult out;
  if (infeas > 1e-9) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // Pivot remaining zero-level artificials out; rows with no candidate are redundant.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < col_art) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < col_art && col < 0; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-9 &&
          std::find(tab.basis.begin(), tab.basis.end(), j) == tab.basis.end())
        col = j;
    }
    if (col >= 0) {
      tab.pivot(i, col);
      keep.push_back(i);
    }
  }
  if (static_cast<Eigen::Index>(keep.size()) != m) {
    Tableau reduced;
    reduced.t.resize(static_cast<Eigen::Index>(keep.size()), ncols + 1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      reduced.t.row(static_cast<Eigen::Index>(k)) = tab.t.row(keep[k]);
      reduced.basis.push_back(tab.basis[static_cast<std::size_t>(keep[k])]);
    }
    tab = std::move(reduced);
  }

  Vector cost2 = Vector::Zero(ncols);
  cost2.head(n) = c;
  cost2.segment(n, n) = -c;
  std::vector<bool> allowed(static_cast<std::size_t>(ncols), true);
  for (Eigen::Index j = col_art; j < ncols; ++j) allowed[static_cast<std::size_t>(j)] = false;
  if (run_simplex(tab, cost2, allowed) == RunResult::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  Vector z = Vector::Zero(ncols);
  for (Eigen::Index i = 0; i < tab.rows(); ++i) z[tab.basis[static_cast<std::size_t>(i)]] = tab.t(i, ncols);
  out.status = LpStatus::optimal;
  out.x = z.head(n) - z.segment(n, n);
  out.objective = c.dot(out.x);
  return out;
}

DenseConstraints DenseConstraints::from(const LinearSystem& sys, double tol) {
  DenseConstraints dc;
  dc.n = sys.num_vars;
  const auto n = static_cast<Eigen::Index>(sys.num_vars);
  std::vector<Eigen::RowVectorXd> eq_rows, le_rows;
  std::vector<double> eq_rhs, le_rhs;
  for (const auto& row : sys.rows) {
    Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(n);
    for (auto [i, c] : row.terms) a[static_cast<Eigen::Index>(i)] += c;
    const double norm = a.norm();
    if (norm == 0.0) {
      const bool ok = (row.sense == Sense::eq && std::abs(row.rhs) <= tol) ||
                      (row.sense == Sense::le && row.rhs >= -tol) || (row.sense == Sense::lt && row.rhs > 0.0);
      if (!ok) dc.trivially_infeasible = true;
      continue;
    }
    if (row.sense == Sense::eq) {
      eq_rows.push_back(a / norm);
      eq_rhs.push_back(row.rhs / norm);
    } else {
      le_rows.push_back(a / norm);
      le_rhs.push_back(row.rhs / norm);
      dc.strict.push_back(row.sense == Sense::lt);
    }
  }
  dc.a_eq.resize(static_cast<Eigen::Index>(eq_rows.size()), n);
  dc.b_eq.resize(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t i = 0; i < eq_rows.size(); ++i) {
    dc.a_eq.row(static_cast<Eigen::Index>(i)) = eq_rows[i];
    dc.b_eq[static_cast<Eigen::Index>(i)] = eq_rhs[i];
  }
  dc.g.resize(static_cast<Eigen::Index>(le_rows.size()), n);
  dc.h.resize(static_cast<Eigen::Index>(le_rows.size()));
  for (std::size_t i = 0; i < le_rows.size(); ++i) {
    dc.g.row(static_cast<Eigen::Index>(i)) = le_rows[i];
    dc.h[static_cast<Eigen::Index>(i)] = le_rhs[i];
  }
  return dc;
}

RelativeInterior find_relative_interior(const DenseConstraints& dc, double tol_membership, double tol_strict) {
  RelativeInterior out;
  if (dc.trivially_infeasible) return out;
  const auto n = static_cast<Eigen::Index>(dc.n);
  const Eigen::Index mi = dc.g.rows();

  // max t  s.t.  A x = b,  G x + t <= h,  t <= 1.
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  Matrix a_eq = Matrix::Zero(dc.a_eq.rows(), n + 1);
  a_eq.leftCols(n) = dc.a_eq;
  Matrix a_le = Matrix::Zero(mi + 1, n + 1);
  Vector b_le(mi + 1);
  a_le.topLeftCorner(mi, n) = dc.g;
  a_le.block(0, n, mi, 1).setOnes();
  b_le.head(mi) = dc.h;
  a_le(mi, n) = 1.0;
  b_le[mi] = 1.0;
  const LpResult lp = lp_maximize(c, a_eq, dc.b_eq, a_le, b_le);
  if (lp.status != LpStatus::optimal) return out;
  const double t = lp.x[n];
  if (t < -tol_membership) return out;
  if (t > tol_strict) {
    out.feasible = true;
    out.x = lp.x.head(n);
    return out;
  }

  // Degenerate: classify each inequality by its largest attainable slack.
  const double shift = std::max(0.0, -t);
  Vector h_relaxed = dc.h.array() + shift;
  Vector sum = Vector::Zero(n);
  int contributors = 0;
  for (Eigen::Index i = 0; i < mi; ++i) {
    Matrix le(mi + 1, n);
    Vector rhs(mi + 1);
    le.topRows(mi) = dc.g;
    rhs.head(mi) = h_relaxed;
    le.row(mi) = -dc.g.row(i);  // slack_i <= 1
    rhs[mi] = 1.0 - dc.h[i];
    LpResult r = lp_maximize(-dc.g.row(i).transpose(), dc.a_eq, dc.b_eq, le, rhs);
    if (r.status == LpStatus::infeasible) {
      // the set forces slack_i above the cap; any member will do
      r = lp_maximize(Vector::Zero(n), dc.a_eq, dc.b_eq, dc.g, h_relaxed);
    }
    if (r.status != LpStatus::optimal) return out;
    const double slack = dc.h[i] - dc.g.row(i).dot(r.x);
    const bool strict = dc.strict[static_cast<std::size_t>(i)];
    if (slack <= (strict ? tol_strict : tol_membership)) {
      if (strict) return out;
      out.implicit_equalities.push_back(static_cast<std::size_t>(i));
    } else {
      sum += r.x;
      ++contributors;
    }
  }
  out.feasible = true;
  out.x = contributors > 0 ? Vector(sum / contributors) : Vector(lp.x.head(n));
  return out;
}

bool is_feasible(const LinearSystem& sys, double tol_membership) {
  const DenseConstraints dc = DenseConstraints::from(sys, tol_membership);
  return find_relative_interior(dc, tol_membership, kTolStrict).feasible;
}

}  // namespace entroad
