#pragma once

// Convex relations R subset of X x Y: the constraints along which systems
// compose. Composition is lazy; the optimizer discharges the existential over
// the middle space by lifting it into one program.

#include <memory>
#include <variant>
#include <vector>

#include "entroad/convex.hpp"

namespace entroad {

/// y = matrix * x + offset
struct AffineMap {
  Matrix matrix;
  Vector offset;
};

class ConvexRelation {
 public:
  /// a . x + b . y  (sense)  c
  struct Row {
    std::vector<double> a;
    std::vector<double> b;
    double c = 0.0;
    Sense sense = Sense::eq;
  };
  struct Affine {
    std::vector<Row> rows;
  };
  /// second o first
  struct Chain {
    std::shared_ptr<const ConvexRelation> first;
    std::shared_ptr<const ConvexRelation> second;
  };
  struct Prod {
    std::shared_ptr<const ConvexRelation> left;
    std::shared_ptr<const ConvexRelation> right;
  };
  struct Full {};
  struct Graph {
    AffineMap map;
  };
  using Body = std::variant<Affine, Chain, Prod, Full, Graph>;

  static ConvexRelation affine(ConvexSpace source, ConvexSpace target, std::vector<Row> rows);
  static ConvexRelation full(ConvexSpace source, ConvexSpace target);
  static ConvexRelation graph(ConvexSpace source, ConvexSpace target, AffineMap map);

  const ConvexSpace& source() const { return source_; }
  const ConvexSpace& target() const { return target_; }
  const Body& body() const { return body_; }

  /// Appends the body's constraints linking x-variables [x_first, +dim X) to
  /// y-variables [y_first, +dim Y). Chains allocate their middle variables
  /// (with the middle space's own constraints) at the end of `sys`. Source
  /// and target space constraints are not added.
  void lower(LinearSystem& sys, std::size_t x_first, std::size_t y_first) const;

  friend ConvexRelation compose(const ConvexRelation& r, const ConvexRelation& rp);
  friend ConvexRelation rel_product(const ConvexRelation& r, const ConvexRelation& rp);

 private:
  ConvexRelation(ConvexSpace source, ConvexSpace target, Body body)
      : source_(std::move(source)), target_(std::move(target)), body_(std::move(body)) {}

  ConvexSpace source_;
  ConvexSpace target_;
  Body body_;
};

/// Graph of the identity map.
ConvexRelation identity(const ConvexSpace& space);

/// rp o r = {(x, z) : exists y, (x, y) in r and (y, z) in rp}. Lazy.
ConvexRelation compose(const ConvexRelation& r, const ConvexRelation& rp);

/// r x rp relating X x Y to X' x Y' after the coordinate split.
ConvexRelation rel_product(const ConvexRelation& r, const ConvexRelation& rp);

/// (x, y) in R, within tol. Chains decide the middle existential with a
/// phase-one feasibility program.
bool member(const ConvexRelation& r, const State& x, const State& y, double tol = kTolMembership);

/// The constrained set {x in X : (x, y) in R}. The first dim X variables are
/// x; chain middles follow. Throws DomainError when y is outside the target.
ConstraintSet fiber(const ConvexRelation& r, const State& y);

/// Replaces variables [first, first + values.size()) by constants and
/// renumbers later variables down.
void substitute(LinearSystem& sys, std::size_t first, const Vector& values);

}  // namespace entroad
