#pragma once

// Operations of the operad of convex relations and their action on
// thermostatic systems: sum the inputs, then push forward along the relation.

#include <cstddef>
#include <vector>

#include "entroad/convex.hpp"
#include "entroad/optimize.hpp"
#include "entroad/relation.hpp"
#include "entroad/system.hpp"

namespace entroad {

/// An n-ary operation: a relation from the left-nested product of `inputs`
/// to `output`.
struct Operation {
  std::vector<ConvexSpace> inputs;
  ConvexSpace output;
  ConvexRelation rel = identity(ConvexSpace::point());
};

/// Checks that rel runs from product(inputs) to output.
Operation make_operation(std::vector<ConvexSpace> inputs, ConvexSpace output, ConvexRelation rel);

/// The unary operation whose relation is the identity on `space`.
Operation identity_op(const ConvexSpace& space);

/// sigma[i] is the old position of the input that moves to position i.
struct Permutation {
  std::vector<std::size_t> sigma;

  /// Throws DomainError unless sigma is a bijection on {0..n-1}.
  explicit Permutation(std::vector<std::size_t> s);
  static Permutation identity(std::size_t n);
  std::size_t size() const { return sigma.size(); }

  /// out[i] = items[sigma[i]].
  template <class T>
  std::vector<T> apply(const std::vector<T>& items) const {
    std::vector<T> out;
    out.reserve(items.size());
    for (std::size_t i : sigma) out.push_back(items[i]);
    return out;
  }
};

/// Operadic substitution g o (f_1, ..., f_n). Inputs are concatenated in
/// order. Throws DomainError naming the first slot whose output does not
/// match g's input.
Operation op_compose(const Operation& g, const std::vector<Operation>& fs);

/// Inputs reordered by sigma; the relation is precomposed with the graph of
/// the matching block permutation.
Operation permute_op(const Operation& op, const Permutation& sigma);

/// Sum of the systems (the constant 0 on the point when empty), pushed
/// forward along op.rel.
ThermostaticSystem act(const Operation& op, const std::vector<ThermostaticSystem>& systems,
                       const SolverConfig& cfg = {});

}  // namespace entroad
