#include "entroad/relation.hpp"

#include "entroad/errors.hpp"
#include "entroad/lp.hpp"

namespace entroad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_state(const ConvexSpace& s, const State& x, const char* who) {
  if (static_cast<std::size_t>(x.size()) != s.dim()) {
    throw DomainError(std::string(who) + ": state dimension " + std::to_string(x.size()) + " does not match " +
                      s.describe());
  }
}

}  // namespace

ConvexRelation ConvexRelation::affine(ConvexSpace source, ConvexSpace target, std::vector<Row> rows) {
  for (const auto& r : rows) {
    if (r.a.size() != source.dim() || r.b.size() != target.dim())
      throw DomainError("affine relation: row coefficient lengths do not match source/target dimensions");
  }
  return ConvexRelation(std::move(source), std::move(target), Affine{std::move(rows)});
}

ConvexRelation ConvexRelation::full(ConvexSpace source, ConvexSpace target) {
  return ConvexRelation(std::move(source), std::move(target), Full{});
}

ConvexRelation ConvexRelation::graph(ConvexSpace source, ConvexSpace target, AffineMap map) {
  if (static_cast<std::size_t>(map.matrix.cols()) != source.dim() ||
      static_cast<std::size_t>(map.matrix.rows()) != target.dim() || map.offset.size() != map.matrix.rows())
    throw DomainError("graph relation: map shape does not match source/target dimensions");
  return ConvexRelation(std::move(source), std::move(target), Graph{std::move(map)});
}

void ConvexRelation::lower(LinearSystem& sys, std::size_t x_first, std::size_t y_first) const {
  std::visit(overloaded{
                 [&](const Affine& aff) {
                   for (const auto& r : aff.rows) {
                     LinearRow row{{}, r.c, r.sense};
                     for (std::size_t i = 0; i < r.a.size(); ++i)
                       if (r.a[i] != 0.0) row.terms.emplace_back(x_first + i, r.a[i]);
                     for (std::size_t i = 0; i < r.b.size(); ++i)
                       if (r.b[i] != 0.0) row.terms.emplace_back(y_first + i, r.b[i]);
                     sys.add_row(std::move(row));
                   }
                 },
                 [&](const Chain& ch) {
                   const ConvexSpace& mid = ch.first->target();
                   const std::size_t m = sys.add_vars(mid.dim());
                   mid.lower(sys, m);
                   ch.first->lower(sys, x_first, m);
                   ch.second->lower(sys, m, y_first);
                 },
                 [&](const Prod& p) {
                   p.left->lower(sys, x_first, y_first);
                   p.right->lower(sys, x_first + p.left->source().dim(), y_first + p.left->target().dim());
                 },
                 [](const Full&) {},
                 [&](const Graph& g) {
                   for (Eigen::Index i = 0; i < g.map.matrix.rows(); ++i) {
                     LinearRow row{{{y_first + static_cast<std::size_t>(i), 1.0}}, g.map.offset[i], Sense::eq};
                     for (Eigen::Index j = 0; j < g.map.matrix.cols(); ++j)
                       if (g.map.matrix(i, j) != 0.0)
                         row.terms.emplace_back(x_first + static_cast<std::size_t>(j), -g.map.matrix(i, j));
                     sys.add_row(std::move(row));
                   }
                 },
             },
             body_);
}

ConvexRelation identity(const ConvexSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  return ConvexRelation::graph(space, space, AffineMap{Matrix::Identity(d, d), Vector::Zero(d)});
}

ConvexRelation compose(const ConvexRelation& r, const ConvexRelation& rp) {
  if (!same_space(r.target(), rp.source())) {
    throw DomainError("compose: target " + r.target().describe() + " does not match source " +
                      rp.source().describe());
  }
  return ConvexRelation(r.source(), rp.target(),
                        ConvexRelation::Chain{std::make_shared<const ConvexRelation>(r),
                                              std::make_shared<const ConvexRelation>(rp)});
}

ConvexRelation rel_product(const ConvexRelation& r, const ConvexRelation& rp) {
  return ConvexRelation(product(r.source(), rp.source()), product(r.target(), rp.target()),
                        ConvexRelation::Prod{std::make_shared<const ConvexRelation>(r),
                                             std::make_shared<const ConvexRelation>(rp)});
}

void substitute(LinearSystem& sys, std::size_t first, const Vector& values) {
  const auto k = static_cast<std::size_t>(values.size());
  for (auto& row : sys.rows) {
    std::vector<std::pair<std::size_t, double>> kept;
    for (auto [i, c] : row.terms) {
      if (i >= first && i < first + k) {
        row.rhs -= c * values[static_cast<Eigen::Index>(i - first)];
      } else {
        kept.emplace_back(i >= first + k ? i - k : i, c);
      }
    }
    row.terms = std::move(kept);
  }
  sys.num_vars -= k;
}

bool member(const ConvexRelation& r, const State& x, const State& y, double tol) {
  check_state(r.source(), x, "member");
  check_state(r.target(), y, "member");
  if (!contains(r.source(), x, tol) || !contains(r.target(), y, tol)) return false;
  LinearSystem sys;
  const std::size_t xf = sys.add_vars(r.source().dim());
  const std::size_t yf = sys.add_vars(r.target().dim());
  r.lower(sys, xf, yf);
  substitute(sys, yf, y);
  substitute(sys, xf, x);
  if (sys.num_vars == 0) return sys.satisfied_by(Vector(), tol);
  return is_feasible(sys, tol);
}

ConstraintSet fiber(const ConvexRelation& r, const State& y) {
  check_state(r.target(), y, "fiber");
  if (!contains(r.target(), y)) throw DomainError("fiber: point outside target " + r.target().describe());
  ConstraintSet cs;
  cs.dim = r.source().dim();
  const std::size_t xf = cs.system.add_vars(r.source().dim());
  const std::size_t yf = cs.system.add_vars(r.target().dim());
  r.source().lower(cs.system, xf);
  r.lower(cs.system, xf, yf);
  substitute(cs.system, yf, y);
  return cs;
}

}  // namespace entroad
