#include "entroad/operad.hpp"

#include <numeric>

#include "entroad/errors.hpp"

namespace entroad {

Operation make_operation(std::vector<ConvexSpace> inputs, ConvexSpace output, ConvexRelation rel) {
  if (!same_space(product(inputs), rel.source()))
    throw DomainError("operation: relation source " + rel.source().describe() + " is not the product of the inputs");
  if (!same_space(output, rel.target()))
    throw DomainError("operation: relation target " + rel.target().describe() + " is not the output " +
                      output.describe());
  return Operation{std::move(inputs), std::move(output), std::move(rel)};
}

Operation identity_op(const ConvexSpace& space) { return Operation{{space}, space, identity(space)}; }

Permutation::Permutation(std::vector<std::size_t> s) : sigma(std::move(s)) {
  std::vector<bool> seen(sigma.size(), false);
  for (std::size_t i : sigma) {
    if (i >= sigma.size() || seen[i]) throw DomainError("permutation: not a bijection");
    seen[i] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), 0);
  return Permutation(std::move(s));
}

Operation op_compose(const Operation& g, const std::vector<Operation>& fs) {
  if (fs.size() != g.inputs.size()) {
    throw DomainError("op_compose: outer operation has " + std::to_string(g.inputs.size()) + " inputs but " +
                      std::to_string(fs.size()) + " operations were supplied");
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!same_space(fs[i].output, g.inputs[i])) {
      throw DomainError("op_compose: slot " + std::to_string(i) + " expects " + g.inputs[i].describe() +
                        " but the supplied operation produces " + fs[i].output.describe());
    }
  }
  std::vector<ConvexSpace> inputs;
  for (const auto& f : fs) inputs.insert(inputs.end(), f.inputs.begin(), f.inputs.end());
  if (fs.empty()) return Operation{{}, g.output, compose(identity(ConvexSpace::point()), g.rel)};
  ConvexRelation inner = fs.front().rel;
  for (std::size_t i = 1; i < fs.size(); ++i) inner = rel_product(inner, fs[i].rel);
  return Operation{std::move(inputs), g.output, compose(inner, g.rel)};
}

Operation permute_op(const Operation& op, const Permutation& sigma) {
  if (sigma.size() != op.inputs.size()) {
    throw DomainError("permute_op: permutation on " + std::to_string(sigma.size()) + " letters applied to an arity-" +
                      std::to_string(op.inputs.size()) + " operation");
  }
  std::vector<ConvexSpace> inputs = sigma.apply(op.inputs);
  std::vector<std::size_t> old_start(op.inputs.size(), 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < op.inputs.size(); ++i) {
    old_start[i] = total;
    total += op.inputs[i].dim();
  }
  // New coordinates (blocks in sigma order) to old coordinates.
  const auto n = static_cast<Eigen::Index>(total);
  Matrix p = Matrix::Zero(n, n);
  std::size_t col = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const std::size_t old = sigma.sigma[i];
    for (std::size_t k = 0; k < op.inputs[old].dim(); ++k, ++col)
      p(static_cast<Eigen::Index>(old_start[old] + k), static_cast<Eigen::Index>(col)) = 1.0;
  }
  ConvexRelation shuffle = ConvexRelation::graph(product(inputs), op.rel.source(), AffineMap{p, Vector::Zero(n)});
  return Operation{std::move(inputs), op.output, compose(shuffle, op.rel)};
}

ThermostaticSystem act(const Operation& op, const std::vector<ThermostaticSystem>& systems, const SolverConfig& cfg) {
  if (systems.size() != op.inputs.size()) {
    throw DomainError("act: operation takes " + std::to_string(op.inputs.size()) + " systems, got " +
                      std::to_string(systems.size()));
  }
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (!same_space(systems[i].space(), op.inputs[i])) {
      throw DomainError("act: system '" + systems[i].name() + "' in slot " + std::to_string(i) + " lives on " +
                        systems[i].space().describe() + ", expected " + op.inputs[i].describe());
    }
  }
  if (systems.empty()) {
    const ThermostaticSystem unit(ConvexSpace::point(), EntropyFn::constant(0.0), "unit");
    return pushforward(unit, op.rel, cfg);
  }
  ThermostaticSystem total = systems.front();
  for (std::size_t i = 1; i < systems.size(); ++i) total = sum_systems(total, systems[i]);
  return pushforward(total, op.rel, cfg);
}

}  // namespace entroad
