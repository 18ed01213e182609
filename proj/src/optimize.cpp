#include "entroad/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entroad/errors.hpp"
#include "entroad/lp.hpp"

namespace entroad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barrier schedule.
constexpr double kMuStart = 1.0;
constexpr double kMuFactor = 0.1;
constexpr int kMaxCenteringSteps = 200;
constexpr double kArmijo = 1e-4;
constexpr double kBoundaryFraction = 0.99;
// Iterates this far out (relative to the start) trigger the ray probe.
constexpr double kRunaway = 1e9;
constexpr double kRayLimit = 1e250;
// A strict row whose slack ends below this and is still shrinking marks a
// supremum approached on an open boundary.
constexpr double kOpenSlack = 1e-6;
constexpr double kFdStep = 1e-3;

// ---------------------------------------------------------------- programs

struct Term {
  enum class Kind { smooth, black_box, measurement };
  Kind kind = Kind::smooth;
  const EntropyFn* fn = nullptr;
  std::size_t offset = 0;
  std::size_t t_index = 0;  // epigraph variable of a measurement term
};

struct Program {
  LinearSystem sys;
  std::vector<Term> terms;
  ExtReal constant = 0.0;
};

void require_nonnegative(LinearSystem& sys, std::size_t first, std::size_t k, bool strict) {
  for (std::size_t i = 0; i < k; ++i) sys.add_row(LinearRow{{{first + i, -1.0}}, 0.0, strict ? Sense::lt : Sense::le});
}

// Flattens f into terms over blocks of program variables. Each term's natural
// domain is added as linear rows so that phase one starts inside it.
void lift(Program& p, const EntropyFn& f, std::size_t offset, bool nested) {
  std::visit(overloaded{
                 [&](const EntropyFn::LogTank&) {
                   require_nonnegative(p.sys, offset, 1, true);
                   p.terms.push_back({Term::Kind::smooth, &f, offset});
                 },
                 [&](const EntropyFn::SackurTetrode&) {
                   require_nonnegative(p.sys, offset, 3, true);
                   p.terms.push_back({Term::Kind::smooth, &f, offset});
                 },
                 [&](const EntropyFn::HeatBath&) { p.terms.push_back({Term::Kind::smooth, &f, offset}); },
                 [&](const EntropyFn::Shannon& s) {
                   require_nonnegative(p.sys, offset, s.n + 1, false);
                   p.terms.push_back({Term::Kind::smooth, &f, offset});
                 },
                 [&](const EntropyFn::VonNeumann&) {
                   throw DomainError("maximize: von Neumann entropy is supported for evaluation only");
                 },
                 [&](const EntropyFn::Affine& a) {
                   if (std::all_of(a.a.begin(), a.a.end(), [](double c) { return c == 0.0; })) {
                     p.constant = xr_add(p.constant, a.b);
                   } else {
                     p.terms.push_back({Term::Kind::smooth, &f, offset});
                   }
                 },
                 [&](const EntropyFn::Measurement&) {
                   require_nonnegative(p.sys, offset, f.dim(), false);
                   const std::size_t t = p.sys.add_vars(1);
                   p.terms.push_back({Term::Kind::measurement, &f, offset, t});
                 },
                 [&](const EntropyFn::Sum& s) {
                   lift(p, *s.left, offset, nested);
                   lift(p, *s.right, offset + s.left->dim(), nested);
                 },
                 [&](const EntropyFn::Pushforward& pf) {
                   // A nested term still gets witness variables so that its
                   // domain, the image of the inner domain, is polyhedral here.
                   const std::size_t xo = p.sys.add_vars(pf.inner->space().dim());
                   pf.inner->space().lower(p.sys, xo);
                   pf.relation->lower(p.sys, xo, offset);
                   if (!nested) {
                     lift(p, pf.inner->entropy(), xo, nested);
                     return;
                   }
                   Program witness;
                   witness.sys = std::move(p.sys);
                   lift(witness, pf.inner->entropy(), xo, nested);
                   p.sys = std::move(witness.sys);
                   p.terms.push_back({Term::Kind::black_box, &f, offset});
                 },
                 [&](const EntropyFn::Constant& c) { p.constant = xr_add(p.constant, c.value); },
             },
             f.variant());
}

Program build_program(const EntropyFn& f, const ConstraintSet& cs, bool nested) {
  if (f.dim() != cs.dim) {
    throw DomainError("maximize: objective reads " + std::to_string(f.dim()) + " coordinates but the feasible set has " +
                      std::to_string(cs.dim));
  }
  Program p;
  p.sys = cs.system;
  lift(p, f, 0, nested);
  return p;
}

// ---------------------------------------------------------------- presolve

// A free variable that no objective term reads and that appears in a single
// equality row carries no information: drop both and recover it afterwards.
struct Presolved {
  Program prog;
  std::vector<std::size_t> kept;  // new index -> old index
  std::vector<std::pair<std::size_t, LinearRow>> eliminated;
  std::size_t original_vars = 0;
};

Presolved presolve(Program p) {
  Presolved out;
  out.original_vars = p.sys.num_vars;
  const std::size_t n = p.sys.num_vars;
  std::vector<bool> used(n, false), gone(n, false), dropped(p.sys.rows.size(), false);
  for (const auto& t : p.terms) {
    for (std::size_t i = 0; i < t.fn->dim(); ++i) used[t.offset + i] = true;
    if (t.kind == Term::Kind::measurement) used[t.t_index] = true;
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> count(n, 0);
    std::vector<std::size_t> where(n, 0);
    for (std::size_t r = 0; r < p.sys.rows.size(); ++r) {
      if (dropped[r]) continue;
      for (auto [i, c] : p.sys.rows[r].terms) {
        if (c == 0.0) continue;
        ++count[i];
        where[i] = r;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || gone[j] || count[j] != 1 || p.sys.rows[where[j]].sense != Sense::eq) continue;
      gone[j] = true;
      dropped[where[j]] = true;
      out.eliminated.emplace_back(j, p.sys.rows[where[j]]);
      changed = true;
      break;
    }
  }
  std::vector<std::size_t> remap(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (gone[j]) continue;
    remap[j] = out.kept.size();
    out.kept.push_back(j);
  }
  out.prog.constant = p.constant;
  out.prog.sys.num_vars = out.kept.size();
  for (std::size_t r = 0; r < p.sys.rows.size(); ++r) {
    if (dropped[r]) continue;
    LinearRow row = p.sys.rows[r];
    for (auto& term : row.terms) term.first = remap[term.first];
    out.prog.sys.add_row(std::move(row));
  }
  for (Term t : p.terms) {
    t.offset = remap[t.offset];
    if (t.kind == Term::Kind::measurement) t.t_index = remap[t.t_index];
    out.prog.terms.push_back(t);
  }
  return out;
}

Vector expand(const Presolved& ps, const Vector& x) {
  Vector full = Vector::Zero(static_cast<Eigen::Index>(ps.original_vars));
  for (std::size_t k = 0; k < ps.kept.size(); ++k)
    full[static_cast<Eigen::Index>(ps.kept[k])] = x[static_cast<Eigen::Index>(k)];
  for (auto it = ps.eliminated.rbegin(); it != ps.eliminated.rend(); ++it) {
    const auto& [j, row] = *it;
    double rest = row.rhs, coef = 0.0;
    for (auto [i, c] : row.terms) {
      if (i == j)
        coef += c;
      else
        rest -= c * full[static_cast<Eigen::Index>(i)];
    }
    full[static_cast<Eigen::Index>(j)] = rest / coef;
  }
  return full;
}

// ---------------------------------------------------------------- evaluation

Eigen::Ref<const Vector> block(const Vector& x, const Term& t) {
  return x.segment(static_cast<Eigen::Index>(t.offset), static_cast<Eigen::Index>(t.fn->dim()));
}

// The true objective.
ExtReal program_value(const Program& p, const Vector& x) {
  ExtReal total = p.constant;
  for (const auto& t : p.terms) {
    if (total.is_neg_inf()) return total;
    total = xr_add(total, evaluate_raw(*t.fn, Vector(block(x, t))));
  }
  return total;
}

double black_box_value(const Program& p, const Vector& x) {
  double total = 0.0;
  for (const auto& t : p.terms) {
    if (t.kind != Term::Kind::black_box) continue;
    const ExtReal v = evaluate_raw(*t.fn, Vector(block(x, t)));
    if (v.is_neg_inf()) return -kInf;
    total += v.value();
  }
  return total;
}

class Barrier {
 public:
  Barrier(const Program& p, const SolverConfig& cfg) : p_(&p), cfg_(&cfg) {
    for (const auto& t : p.terms) has_black_box_ = has_black_box_ || t.kind == Term::Kind::black_box;
  }

  // Returns false when phase one finds the set empty.
  bool setup(const Vector* start) {
    const DenseConstraints dc = DenseConstraints::from(p_->sys, cfg_->tol_membership);
    const auto n = static_cast<Eigen::Index>(p_->sys.num_vars);
    Vector x0;
    std::vector<bool> implicit(static_cast<std::size_t>(dc.g.rows()), false);
    if (start) {
      if (dc.trivially_infeasible) return false;
      x0 = *start;
    } else {
      const RelativeInterior ri = find_relative_interior(dc, cfg_->tol_membership, kTolStrict);
      if (!ri.feasible) return false;
      x0 = ri.x;
      for (std::size_t i : ri.implicit_equalities) implicit[i] = true;
    }
    if (x0.size() != n) x0 = Vector::Zero(n);
    // Rows tight at the start point are treated as equalities.
    for (Eigen::Index i = 0; i < dc.g.rows(); ++i) {
      if (dc.h[i] - dc.g.row(i).dot(x0) <= cfg_->tol_membership) implicit[static_cast<std::size_t>(i)] = true;
    }

    std::vector<Eigen::Index> eq_rows, bar_rows;
    for (Eigen::Index i = 0; i < dc.g.rows(); ++i)
      (implicit[static_cast<std::size_t>(i)] ? eq_rows : bar_rows).push_back(i);
    Matrix a_all(dc.a_eq.rows() + static_cast<Eigen::Index>(eq_rows.size()), n);
    Vector b_all(a_all.rows());
    a_all.topRows(dc.a_eq.rows()) = dc.a_eq;
    b_all.head(dc.a_eq.rows()) = dc.b_eq;
    for (std::size_t k = 0; k < eq_rows.size(); ++k) {
      a_all.row(dc.a_eq.rows() + static_cast<Eigen::Index>(k)) = dc.g.row(eq_rows[k]);
      b_all[dc.a_eq.rows() + static_cast<Eigen::Index>(k)] = dc.h[eq_rows[k]];
    }
    gb_.resize(static_cast<Eigen::Index>(bar_rows.size()), n);
    hb_.resize(gb_.rows());
    strict_.clear();
    for (std::size_t k = 0; k < bar_rows.size(); ++k) {
      gb_.row(static_cast<Eigen::Index>(k)) = dc.g.row(bar_rows[k]);
      hb_[static_cast<Eigen::Index>(k)] = dc.h[bar_rows[k]];
      strict_.push_back(dc.strict[static_cast<std::size_t>(bar_rows[k])]);
    }

    if (a_all.rows() == 0) {
      z_ = Matrix::Identity(n, n);
    } else {
      Eigen::JacobiSVD<Matrix> svd(a_all, Eigen::ComputeFullV);
      const Vector& sv = svd.singularValues();
      Eigen::Index rank = 0;
      const double cut = 1e-10 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cut) ++rank;
      z_ = svd.matrixV().rightCols(n - rank);
      // Coordinates pinned by a single-variable equality stay exactly put.
      for (Eigen::Index r = 0; r < a_all.rows(); ++r) {
        Eigen::Index j = -1, nz = 0;
        for (Eigen::Index c = 0; c < n; ++c) {
          if (a_all(r, c) != 0.0) {
            ++nz;
            j = c;
          }
        }
        if (nz == 1) {
          x0[j] = b_all[r] / a_all(r, j);
          z_.row(j).setZero();
        }
      }
    }
    for (const auto& t : p_->terms) {
      if (t.kind != Term::Kind::measurement) continue;
      x0[static_cast<Eigen::Index>(t.t_index)] = measurement_floor(t, x0) - 1.0;
    }
    x0_ = x0;
    if (has_black_box_) setup_black_box_directions();
    return true;
  }

  const Vector& start() const { return x0_; }
  const Matrix& null_space() const { return z_; }
  std::size_t barrier_rows() const {
    std::size_t m = static_cast<std::size_t>(gb_.rows());
    for (const auto& t : p_->terms)
      if (t.kind == Term::Kind::measurement) m += std::get<EntropyFn::Measurement>(t.fn->variant()).maps.size();
    return m;
  }
  bool has_black_box() const { return has_black_box_; }

  Vector slacks(const Vector& x) const { return hb_ - gb_ * x; }

  std::vector<double> strict_slacks(const Vector& x) const {
    const Vector s = slacks(x);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (strict_[static_cast<std::size_t>(i)]) out.push_back(s[i]);
    return out;
  }

  // Barrier objective; -inf outside the open feasible region. `objective`
  // receives the objective part alone.
  double phi(const Vector& x, double mu, double* objective = nullptr) const {
    const Vector s = slacks(x);
    double bar = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (!(s[i] > 0.0)) return -kInf;
      bar += std::log(s[i]);
    }
    double obj = 0.0;
    for (const auto& t : p_->terms) {
      switch (t.kind) {
        case Term::Kind::smooth: {
          const ExtReal v = evaluate_raw(*t.fn, Vector(block(x, t)));
          if (v.is_neg_inf()) return -kInf;
          obj += v.value();
          break;
        }
        case Term::Kind::black_box:
          break;
        case Term::Kind::measurement: {
          const double tv = x[static_cast<Eigen::Index>(t.t_index)];
          obj += tv;
          const Vector pv = block(x, t);
          for (const auto& e : std::get<EntropyFn::Measurement>(t.fn->variant()).maps) {
            const double u = shannon_entropy(e.apply(pv)) - tv;
            if (!(u > 0.0)) return -kInf;
            bar += std::log(u);
          }
          break;
        }
      }
    }
    if (has_black_box_) {
      const double v = black_box_value(*p_, x);
      if (!std::isfinite(v)) return v;
      obj += v;
    }
    if (objective) *objective = obj;
    return obj + mu * bar;
  }

  // Reduced gradient and Hessian of phi at x (in null-space coordinates).
  void derivatives(const Vector& x, double mu, Vector& gr, Matrix& hr) const {
    const auto n = x.size();
    Vector g = Vector::Zero(n);
    Matrix h = Matrix::Zero(n, n);
    for (const auto& t : p_->terms) {
      const auto off = static_cast<Eigen::Index>(t.offset);
      const auto d = static_cast<Eigen::Index>(t.fn->dim());
      if (t.kind == Term::Kind::smooth) {
        Vector tg;
        Matrix th;
        entropy_derivatives(*t.fn, Vector(block(x, t)), tg, th);
        g.segment(off, d) += tg;
        h.block(off, off, d, d) += th;
      } else if (t.kind == Term::Kind::measurement) {
        const auto ti = static_cast<Eigen::Index>(t.t_index);
        g[ti] += 1.0;
        const Vector pv = block(x, t);
        for (const auto& e : std::get<EntropyFn::Measurement>(t.fn->variant()).maps) {
          const Vector q = e.apply(pv);
          const double u = shannon_entropy(q) - x[ti];
          Vector dq = Vector::Zero(q.size());
          Vector curv = Vector::Zero(q.size());
          for (Eigen::Index i = 0; i < q.size(); ++i) {
            if (q[i] > 0.0) {
              dq[i] = -std::log(q[i]) - 1.0;
              curv[i] = -1.0 / q[i];
            }
          }
          Vector du = Vector::Zero(n);
          du.segment(off, d) = e.matrix().transpose() * dq;
          du[ti] = -1.0;
          Matrix hu = Matrix::Zero(n, n);
          hu.block(off, off, d, d) = e.matrix().transpose() * curv.asDiagonal() * e.matrix();
          g += mu * du / u;
          h += mu * (hu / u - du * du.transpose() / (u * u));
        }
      }
    }
    if (gb_.rows() > 0) {
      const Vector inv = slacks(x).cwiseInverse();
      g -= mu * gb_.transpose() * inv;
      h -= mu * gb_.transpose() * inv.cwiseAbs2().asDiagonal() * gb_;
    }
    gr = z_.transpose() * g;
    hr = z_.transpose() * h * z_;
    if (has_black_box_) add_black_box_derivatives(x, gr, hr);
  }

 private:
  double measurement_floor(const Term& t, const Vector& x) const {
    double best = kInf;
    const Vector pv = block(x, t);
    for (const auto& e : std::get<EntropyFn::Measurement>(t.fn->variant()).maps)
      best = std::min(best, shannon_entropy(e.apply(pv)));
    return best;
  }

  // Null-space directions that move the black-box coordinates. Directions
  // that only move witness variables leave the nested value unchanged.
  void setup_black_box_directions() {
    const Eigen::Index n = z_.rows(), k = z_.cols();
    bb_mask_ = Vector::Zero(n);
    for (const auto& t : p_->terms) {
      if (t.kind != Term::Kind::black_box) continue;
      bb_mask_.segment(static_cast<Eigen::Index>(t.offset), static_cast<Eigen::Index>(t.fn->dim())).setOnes();
    }
    bb_dirs_.resize(k, 0);
    if (k == 0) return;
    const Matrix zy = bb_mask_.asDiagonal() * z_;
    Eigen::JacobiSVD<Matrix> svd(zy, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    const double cut = 1e-10 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > cut) ++rank;
    bb_dirs_ = svd.matrixV().leftCols(rank);
  }

  // Finite differences of the nested value along bb_dirs_. Probes move only
  // the black-box coordinates. Near the edge of the nested domain a
  // direction falls back to one-sided second-order differences, so the step
  // never has to shrink to the distance from the edge (where the inner
  // solver's tolerance would swamp the quotients).
  void add_black_box_derivatives(const Vector& x, Vector& gr, Matrix& hr) const {
    const Eigen::Index k = bb_dirs_.cols();
    if (k == 0) return;
    const Matrix moves = bb_mask_.asDiagonal() * (z_ * bb_dirs_);
    const double f0 = black_box_value(*p_, x);
    auto probe = [&](Eigen::Index i, double ti, Eigen::Index j, double tj) {
      Vector y = x + ti * moves.col(i);
      if (j >= 0) y += tj * moves.col(j);
      return black_box_value(*p_, y);
    };
    if (!std::isfinite(f0)) {
      throw ConvergenceError("maximize: nested objective is not finite at the current point", f0,
                             std::vector<double>(x.data(), x.data() + x.size()));
    }
    struct Estimate {
      bool ok = false;
      double g = 0.0, h2 = 0.0, step = 0.0;
    };
    auto estimate = [&](Eigen::Index i, double h) {
      Estimate e;
      const double fp = probe(i, h, -1, 0), fm = probe(i, -h, -1, 0);
      if (std::isfinite(fp) && std::isfinite(fm)) return Estimate{true, (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h), h};
      for (double sgn : {1.0, -1.0}) {
        const double f1 = sgn > 0 ? fp : fm;
        if (!std::isfinite(f1)) continue;
        const double f2 = probe(i, 2 * sgn * h, -1, 0);
        if (std::isfinite(f2)) return Estimate{true, sgn * (-3 * f0 + 4 * f1 - f2) / (2 * h), (f0 - 2 * f1 + f2) / (h * h), sgn * h};
      }
      return e;
    };
    // The step halves until estimates at h and h/2 agree: close to the edge
    // of the nested domain the value bends sharply and a wide stencil lies.
    Vector g(k), step(k);
    Matrix hh = Matrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      double h = kFdStep * std::max(1.0, x.cwiseProduct(bb_mask_).lpNorm<Eigen::Infinity>());
      Estimate wide = estimate(i, h), chosen;
      for (int attempt = 0; attempt < 40; ++attempt) {
        h *= 0.5;
        const Estimate narrow = estimate(i, h);
        if (wide.ok && narrow.ok && std::abs(wide.g - narrow.g) <= 1e-4 * (1.0 + std::abs(narrow.g)) &&
            std::abs(wide.h2 - narrow.h2) <= 0.1 * std::abs(narrow.h2) + 1e-6) {
          chosen = narrow;
          break;
        }
        wide = narrow;
      }
      if (!chosen.ok) chosen = wide;
      if (!chosen.ok) {
        throw ConvergenceError("maximize: nested objective is not finite near the current point", f0,
                               std::vector<double>(x.data(), x.data() + x.size()));
      }
      g[i] = chosen.g;
      hh(i, i) = chosen.h2;
      step[i] = chosen.step;
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      const double fi = probe(i, step[i], -1, 0);
      for (Eigen::Index j = 0; j < i; ++j) {
        const double fij = probe(i, step[i], j, step[j]), fj = probe(j, step[j], -1, 0);
        if (std::isfinite(fij) && std::isfinite(fi) && std::isfinite(fj))
          hh(i, j) = hh(j, i) = (fij - fi - fj + f0) / (step[i] * step[j]);
      }
    }
    // Quotient noise must not make the model convex.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hh);
    const Vector lam = eig.eigenvalues().cwiseMin(0.0);
    hh = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
    gr += bb_dirs_ * g;
    hr += bb_dirs_ * hh * bb_dirs_.transpose();
  }

  const Program* p_;
  const SolverConfig* cfg_;
  bool has_black_box_ = false;
  Matrix gb_;
  Vector hb_;
  std::vector<bool> strict_;
  Matrix z_;
  Vector x0_;
  Vector bb_mask_;
  Matrix bb_dirs_;
};

// Newton direction in null-space coordinates for the concave phi.
Vector newton_direction(const Vector& gr, const Matrix& hr) {
  const Eigen::Index k = gr.size();
  Matrix m = -0.5 * (hr + hr.transpose());
  double delta = std::max(1e-12 * m.diagonal().cwiseAbs().maxCoeff(), 1e-30);
  for (int attempt = 0; attempt < 40; ++attempt, delta *= 100.0) {
    Eigen::LDLT<Matrix> ldlt(m + delta * Matrix::Identity(k, k));
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && (ldlt.vectorD().array() > 0.0).all()) {
      Vector d = ldlt.solve(gr);
      if (d.allFinite()) return d;
    }
  }
  return gr;
}

struct Outcome {
  MaxStatus status = MaxStatus::attained;
  Vector x;
  ExtReal value;
  std::optional<Vector> certificate;
  std::size_t iterations = 0;
};

std::vector<double> to_std(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// The iterates ran away from the start. Decide between +inf and a supremum
// approached at infinity by following the ray from x along d.
Outcome probe_ray(const Program& p, const Barrier& bar, const SolverConfig& cfg, const Vector& x,
                  const Vector& last_step, Outcome out) {
  std::vector<Vector> candidates;
  if (last_step.norm() > 0.0) candidates.push_back(last_step.normalized());
  const Vector drift = x - bar.start();
  if (drift.norm() > 0.0) candidates.push_back(drift.normalized());
  const Vector s0 = bar.slacks(x);
  for (const Vector& d : candidates) {
    const Vector s1 = bar.slacks(x + d);
    // A recession direction never eats into a slack.
    if (((s0 - s1).array() > 1e-9).any()) continue;
    const double base = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    std::vector<double> vals;
    ExtReal best = program_value(p, x);
    for (double t = base; t <= kRayLimit; t *= 2.0) {
      const ExtReal v = program_value(p, x + t * d);
      if (v.is_pos_inf() || (v.is_finite() && v.value() > cfg.unbounded_threshold)) {
        out.status = MaxStatus::unbounded;
        out.value = ExtReal::pos_inf();
        out.certificate = d;
        return out;
      }
      if (!v.is_finite()) break;
      if (!vals.empty() && v.value() < vals.back()) break;
      vals.push_back(v.value());
      best = std::max(best, v);
    }
    if (vals.size() >= 3) {
      const double first = vals[1] - vals[0];
      const double last = vals.back() - vals[vals.size() - 2];
      if (first > 0.0 && last > std::max(cfg.tol_value, 1e-4 * first)) {
        out.status = MaxStatus::unbounded;
        out.value = ExtReal::pos_inf();
        out.certificate = d;
        return out;
      }
    }
    out.status = MaxStatus::approached;
    out.value = best;
    out.x = x;
    return out;
  }
  throw ConvergenceError("maximize: iterates diverge without a feasible improving ray", program_value(p, x).value(),
                         to_std(x));
}

Outcome run_barrier(const Program& p, const Barrier& bar, const SolverConfig& cfg) {
  Outcome out;
  Vector x = bar.start();
  const Matrix& z = bar.null_space();
  const std::size_t m = bar.barrier_rows();
  const double x0_scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
  // Finite-difference noise puts a floor under the Newton decrement of
  // nested objectives.
  const double center_tol = (bar.has_black_box() ? 0.1 : 1e-3) * cfg.tol_value;

  double mu = m == 0 ? 0.0 : kMuStart;
  std::vector<double> prev_strict, cur_strict;
  Vector last_step = Vector::Zero(x.size());
  for (;;) {
    // The last stage is centered to rounding level so that the argmax, not
    // just the value, is accurate; Newton's quadratic convergence makes this
    // a step or two.
    const bool last = m == 0 || mu * static_cast<double>(m) <= 0.01 * cfg.tol_value;
    const double stop = last && !bar.has_black_box() ? 1e-24 : center_tol;
    for (int step = 0; step < kMaxCenteringSteps && z.cols() > 0; ++step) {
      Vector gr;
      Matrix hr;
      bar.derivatives(x, mu, gr, hr);
      const Vector dw = newton_direction(gr, hr);
      const double lambda2 = gr.dot(dw);
      if (!(lambda2 / 2.0 > stop)) break;
      const Vector d = z * dw;

      double alpha = 1.0;
      {
        const Vector s = bar.slacks(x);
        const Vector s_after = bar.slacks(x + d);
        for (Eigen::Index i = 0; i < s.size(); ++i) {
          const double rate = s[i] - s_after[i];
          if (rate > 0.0) alpha = std::min(alpha, kBoundaryFraction * s[i] / rate);
        }
      }
      const double phi0 = bar.phi(x, mu);
      bool accepted = false;
      Vector trial;
      // Steps below 1e-12 only chase rounding noise; the stage is done.
      for (; alpha >= 1e-12; alpha *= 0.5) {
        trial = x + alpha * d;
        const double phi1 = bar.phi(trial, mu);
        if (std::isfinite(phi1) && phi1 >= phi0 + kArmijo * alpha * lambda2) {
          accepted = true;
          break;
        }
        if (phi1 == kInf) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      last_step = trial - x;
      x = trial;
      if (++out.iterations > cfg.max_iters) {
        throw ConvergenceError("maximize: iteration budget of " + std::to_string(cfg.max_iters) + " exhausted",
                               program_value(p, x).value(), to_std(x));
      }
      double objective = 0.0;
      const double phi_now = bar.phi(x, mu, &objective);
      if (phi_now == kInf || objective > cfg.unbounded_threshold) {
        out.status = MaxStatus::unbounded;
        out.value = ExtReal::pos_inf();
        const Vector drift = x - bar.start();
        out.certificate = drift.norm() > 0.0 ? Vector(drift.normalized()) : drift;
        return out;
      }
      if (x.lpNorm<Eigen::Infinity>() > kRunaway * x0_scale) return probe_ray(p, bar, cfg, x, last_step, out);
    }
    prev_strict = std::move(cur_strict);
    cur_strict = bar.strict_slacks(x);
    if (last) break;
    mu *= kMuFactor;
  }

  out.x = x;
  out.value = program_value(p, x);
  for (std::size_t i = 0; i < cur_strict.size() && i < prev_strict.size(); ++i) {
    if (cur_strict[i] < kOpenSlack && prev_strict[i] > 5.0 * cur_strict[i]) out.status = MaxStatus::approached;
  }
  return out;
}

MaxResult infeasible_result() {
  MaxResult r;
  r.value = ExtReal::neg_inf();
  r.status = MaxStatus::infeasible;
  return r;
}

// Start for a program with black-box terms whose domain is smaller than its
// linear constraints: the relative interior of the fully lifted program.
std::optional<Vector> lifted_start(const EntropyFn& f, const ConstraintSet& cs, const Presolved& ps,
                                   const SolverConfig& cfg) {
  const Program lifted = build_program(f, cs, false);
  const DenseConstraints dc = DenseConstraints::from(lifted.sys, cfg.tol_membership);
  const RelativeInterior ri = find_relative_interior(dc, cfg.tol_membership, kTolStrict);
  if (!ri.feasible) return std::nullopt;
  Vector x = Vector::Zero(static_cast<Eigen::Index>(ps.kept.size()));
  for (std::size_t k = 0; k < ps.kept.size(); ++k) {
    if (ps.kept[k] < cs.system.num_vars)
      x[static_cast<Eigen::Index>(k)] = ri.x[static_cast<Eigen::Index>(ps.kept[k])];
  }
  return x;
}

}  // namespace

std::string to_string(MaxStatus s) {
  switch (s) {
    case MaxStatus::attained:
      return "attained";
    case MaxStatus::approached:
      return "approached";
    case MaxStatus::unbounded:
      return "unbounded";
    case MaxStatus::infeasible:
      return "infeasible";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(tol_value > 0.0) || !(tol_membership > 0.0) || !(unbounded_threshold > 0.0))
    throw DomainError("solver config: tolerances and the unbounded threshold must be positive");
  if (max_iters == 0) throw DomainError("solver config: max_iters must be positive");
  if (grid_resolution == 0) throw DomainError("solver config: grid_resolution must be positive");
}

MaxResult maximize(const EntropyFn& f, const ConstraintSet& feasible, const SolverConfig& cfg) {
  cfg.validate();
  const Presolved ps = presolve(build_program(f, feasible, cfg.nested_pushforward));
  const Program& p = ps.prog;
  if (p.constant.is_neg_inf()) return infeasible_result();

  Barrier bar(p, cfg);
  if (!bar.setup(nullptr)) return infeasible_result();
  ExtReal v0 = program_value(p, bar.start());
  if (v0.is_neg_inf() && bar.has_black_box()) {
    if (const auto start = lifted_start(f, feasible, ps, cfg)) {
      Barrier alt(p, cfg);
      if (alt.setup(&*start) && !program_value(p, alt.start()).is_neg_inf()) {
        bar = std::move(alt);
        v0 = program_value(p, bar.start());
      }
    }
  }
  if (v0.is_neg_inf()) return infeasible_result();
  if (v0.is_pos_inf()) {
    MaxResult r;
    r.value = v0;
    r.status = MaxStatus::unbounded;
    return r;
  }

  const Outcome out = run_barrier(p, bar, cfg);
  MaxResult r;
  r.status = out.status;
  r.value = out.value;
  r.iterations = out.iterations;
  r.certificate = out.certificate;
  if (r.status == MaxStatus::unbounded) return r;
  if (r.value.is_neg_inf()) return infeasible_result();
  if (r.status == MaxStatus::attained) {
    r.argmax = Vector(expand(ps, out.x).head(static_cast<Eigen::Index>(feasible.dim)));
  }
  return r;
}

// ---------------------------------------------------------------- oracle

namespace {

// Largest and smallest reduced coordinate over the feasible set, per axis.
struct ReducedBox {
  Vector lo, hi;
};

ReducedBox reduced_bounds(const Matrix& g, const Vector& h, const Matrix& z, const Vector& x0) {
  const Eigen::Index k = z.cols();
  ReducedBox box{Vector::Constant(k, -kInf), Vector::Constant(k, kInf)};
  const Matrix gz = g * z;
  const Vector rhs = h - g * x0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(k);
      c[i] = sign;
      const LpResult r = lp_maximize(c, Matrix(0, k), Vector(0), gz, rhs);
      if (r.status != LpStatus::optimal) continue;
      if (sign > 0)
        box.hi[i] = r.x[i];
      else
        box.lo[i] = r.x[i];
    }
  }
  return box;
}

GridSearch search_box(const EntropyFn& f, std::size_t dim, const LinearSystem& sys, const Matrix& z, const Vector& x0,
                      const Vector& lo, const Vector& hi, std::size_t per_axis, double tol) {
  const Eigen::Index k = z.cols();
  GridSearch out;
  out.reduced_dim = static_cast<std::size_t>(k);
  Vector step(k);
  for (Eigen::Index i = 0; i < k; ++i) step[i] = (hi[i] - lo[i]) / static_cast<double>(per_axis);
  out.spacing = k > 0 ? step.maxCoeff() : 0.0;

  auto point = [&](const std::vector<std::size_t>& idx) {
    Vector w(k);
    for (Eigen::Index i = 0; i < k; ++i)
      w[i] = lo[i] + (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) * step[i];
    return Vector(x0 + z * w);
  };
  auto value_at = [&](const Vector& x) -> ExtReal {
    if (!sys.satisfied_by(x, tol)) return ExtReal::neg_inf();
    return evaluate_raw(f, Vector(x.head(static_cast<Eigen::Index>(dim))));
  };

  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0), best_idx;
  for (bool more = true; more;) {
    const Vector x = point(idx);
    const ExtReal v = value_at(x);
    ++out.points;
    if (v > out.value || (!out.best && !v.is_neg_inf())) {
      out.value = v;
      out.best = Vector(x.head(static_cast<Eigen::Index>(dim)));
      best_idx = idx;
      if (v.is_pos_inf()) return out;
    }
    more = false;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (++idx[a] < per_axis) {
        more = true;
        break;
      }
      idx[a] = 0;
    }
  }
  if (!out.value.is_finite()) return out;
  for (std::size_t a = 0; a < best_idx.size(); ++a) {
    for (int dir : {-1, 1}) {
      if ((dir < 0 && best_idx[a] == 0) || (dir > 0 && best_idx[a] + 1 >= per_axis)) continue;
      std::vector<std::size_t> nb = best_idx;
      nb[a] = static_cast<std::size_t>(static_cast<long long>(nb[a]) + dir);
      const ExtReal v = value_at(point(nb));
      if (!v.is_finite()) continue;
      out.lipschitz = std::max(out.lipschitz, std::abs(v.value() - out.value.value()) / step[static_cast<Eigen::Index>(a)]);
    }
  }
  return out;
}

}  // namespace

GridSearch grid_search(const EntropyFn& f, const ConstraintSet& feasible, const SolverConfig& cfg,
                       const std::optional<BoundingBox>& box) {
  cfg.validate();
  if (f.dim() != feasible.dim) throw DomainError("brute_force_sup: objective and feasible set disagree on dimension");
  LinearSystem sys = feasible.system;
  if (box) {
    if (static_cast<std::size_t>(box->lo.size()) != sys.num_vars || static_cast<std::size_t>(box->hi.size()) != sys.num_vars)
      throw DomainError("brute_force_sup: bounding box must cover every program variable");
    for (std::size_t i = 0; i < sys.num_vars; ++i) {
      sys.add_row(LinearRow{{{i, 1.0}}, box->hi[static_cast<Eigen::Index>(i)], Sense::le});
      sys.add_row(LinearRow{{{i, -1.0}}, -box->lo[static_cast<Eigen::Index>(i)], Sense::le});
    }
  }
  Program p;
  p.sys = sys;
  Barrier geometry(p, cfg);
  if (!geometry.setup(nullptr)) return GridSearch{};
  const Matrix& z = geometry.null_space();
  const Eigen::Index k = z.cols();
  if (static_cast<std::size_t>(k) > kBruteForceMaxDim) {
    throw DomainError("brute_force_sup: feasible set spans " + std::to_string(k) + " dimensions; at most " +
                      std::to_string(kBruteForceMaxDim) + " are searched");
  }
  const Vector x0 = geometry.start();
  if (k == 0) {
    GridSearch out;
    out.points = 1;
    out.value = evaluate_raw(f, Vector(x0.head(static_cast<Eigen::Index>(feasible.dim))));
    if (!out.value.is_neg_inf()) out.best = Vector(x0.head(static_cast<Eigen::Index>(feasible.dim)));
    return out;
  }

  std::size_t per_axis = cfg.grid_resolution;
  const auto cap = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(kBruteForceMaxPoints), 1.0 / static_cast<double>(k)) + 1e-9));
  per_axis = std::max<std::size_t>(1, std::min(per_axis, cap));

  const DenseConstraints dc = DenseConstraints::from(sys, cfg.tol_membership);
  const ReducedBox rb = reduced_bounds(dc.g, dc.h, z, x0);
  const bool bounded = rb.lo.allFinite() && rb.hi.allFinite();
  if (bounded) return search_box(f, feasible.dim, sys, z, x0, rb.lo, rb.hi, per_axis, cfg.tol_membership);

  // Growing boxes: +inf when the best value passes the threshold or keeps
  // climbing by non-vanishing amounts per decade.
  // Wider boxes have coarser grids, so the best box is kept, not the last.
  GridSearch best;
  std::vector<double> bests;
  for (int e = 0; e <= 15; ++e) {
    const double r = std::pow(10.0, e);
    const Vector lo = rb.lo.cwiseMax(Vector::Constant(k, -r));
    const Vector hi = rb.hi.cwiseMin(Vector::Constant(k, r));
    GridSearch last = search_box(f, feasible.dim, sys, z, x0, lo, hi, per_axis, cfg.tol_membership);
    if (last.value.is_pos_inf() || (last.value.is_finite() && last.value.value() > cfg.unbounded_threshold)) {
      last.value = ExtReal::pos_inf();
      last.best.reset();
      return last;
    }
    if (last.value.is_finite()) bests.push_back(last.value.value());
    if (e == 0 || best.value < last.value) best = std::move(last);
  }
  if (bests.size() >= 3) {
    double biggest = 0.0;
    for (std::size_t i = 1; i < bests.size(); ++i) biggest = std::max(biggest, bests[i] - bests[i - 1]);
    const double final_step = bests.back() - bests[bests.size() - 2];
    if (biggest > 0.0 && final_step > std::max(cfg.tol_value, 1e-3 * biggest)) {
      best.value = ExtReal::pos_inf();
      best.best.reset();
    }
  }
  return best;
}

ExtReal brute_force_sup(const EntropyFn& f, const ConstraintSet& feasible, const SolverConfig& cfg,
                        const std::optional<BoundingBox>& box) {
  return grid_search(f, feasible, cfg, box).value;
}

// ---------------------------------------------------------------- pushforward

ThermostaticSystem pushforward(const ThermostaticSystem& sys, const ConvexRelation& r, const SolverConfig& cfg) {
  if (!same_space(sys.space(), r.source())) {
    throw DomainError("pushforward: system '" + sys.name() + "' lives on " + sys.space().describe() +
                      " but the relation starts at " + r.source().describe());
  }
  cfg.validate();
  EntropyFn f(EntropyFn::Pushforward{std::make_shared<const ThermostaticSystem>(sys),
                                     std::make_shared<const ConvexRelation>(r), cfg});
  return ThermostaticSystem(r.target(), std::move(f), "push(" + sys.name() + ")");
}

ExtReal evaluate_pushforward(const EntropyFn::Pushforward& p, const Vector& y) {
  if (!contains(p.relation->target(), y)) return ExtReal::neg_inf();
  return maximize(p.inner->entropy(), fiber(*p.relation, y), p.config).value;
}

MaxResult solve_at(const ThermostaticSystem& sys, const State& y, const SolverConfig& cfg) {
  if (static_cast<std::size_t>(y.size()) != sys.space().dim()) {
    throw DomainError("solve_at: query has " + std::to_string(y.size()) + " coordinates but " + sys.space().describe() +
                      " has " + std::to_string(sys.space().dim()));
  }
  if (!contains(sys.space(), y)) return infeasible_result();
  if (const auto* p = std::get_if<EntropyFn::Pushforward>(&sys.entropy().variant())) {
    return maximize(p->inner->entropy(), fiber(*p->relation, y), cfg);
  }
  MaxResult r;
  r.value = evaluate(sys, y);
  if (r.value.is_neg_inf()) return infeasible_result();
  r.status = r.value.is_pos_inf() ? MaxStatus::unbounded : MaxStatus::attained;
  if (r.value.is_finite()) r.argmax = y;
  return r;
}

MaxResult legendre_solve(const ThermostaticSystem& sys, double beta, const State& fixed, const SolverConfig& cfg) {
  const std::size_t k = sys.space().dim();
  if (k == 0 || static_cast<std::size_t>(fixed.size()) + 1 != k)
    throw DomainError("legendre_transform: expected " + std::to_string(k == 0 ? 0 : k - 1) + " fixed coordinates");
  if (!std::isfinite(beta)) throw DomainError("legendre_transform: beta must be finite");
  // Variables (x_0 .. x_{k-1}, u) with u = x_0 carrying the -beta u term.
  ConstraintSet cs;
  cs.dim = k + 1;
  cs.system.add_vars(k + 1);
  sys.space().lower(cs.system, 0);
  for (std::size_t i = 1; i < k; ++i)
    cs.system.add_row(LinearRow{{{i, 1.0}}, fixed[static_cast<Eigen::Index>(i - 1)], Sense::eq});
  cs.system.add_row(LinearRow{{{k, 1.0}, {0, -1.0}}, 0.0, Sense::eq});
  const EntropyFn f = EntropyFn::sum(sys.entropy(), EntropyFn::affine({-beta}, 0.0));
  MaxResult r = maximize(f, cs, cfg);
  if (r.argmax) r.argmax = Vector(r.argmax->head(static_cast<Eigen::Index>(k)));
  return r;
}

ExtReal legendre_transform(const ThermostaticSystem& sys, double beta, const State& fixed, const SolverConfig& cfg) {
  return legendre_solve(sys, beta, fixed, cfg).value;
}

}  // namespace entroad
