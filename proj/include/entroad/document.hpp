#pragma once

// Batch documents: named spaces, systems and relations, a composition tree,
// solver settings and query points, loaded from JSON and type-checked before
// anything is solved.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "entroad/operad.hpp"
#include "entroad/solver_config.hpp"

namespace entroad {

/// A node of the composition tree: a declared system, or an operation (a
/// declared relation) applied to child nodes.
struct ComposeNode {
  std::string system;    // leaf when non-empty
  std::string relation;  // operation otherwise
  std::vector<ComposeNode> children;
};

struct Document {
  SolverConfig solver;
  std::vector<std::pair<std::string, ConvexSpace>> spaces;
  std::vector<ThermostaticSystem> systems;
  std::vector<std::pair<std::string, ConvexRelation>> relations;
  ComposeNode compose;
  std::vector<State> queries;

  const ThermostaticSystem& system(const std::string& name) const;
  const ConvexRelation& relation(const std::string& name) const;
};

/// Parses and type-checks a document. Errors are ValidationError messages
/// naming the offending declaration and its position, e.g.
/// "systems[1] 'hot': unknown space 'tnak'".
Document load_document(const std::string& json_text);
Document load_document_file(const std::string& path);

/// Canonical JSON: defaults filled in, every reference inlined, keys sorted.
/// Loading the output gives an equivalent document.
std::string dump_normalized(const Document& doc);

/// Output space of the composition tree.
ConvexSpace output_space(const Document& doc);
/// Space of the argmax reported for a query: the summed leaves when the root
/// is an operation, else the root system's space.
ConvexSpace argmax_space(const Document& doc);

/// Column names for argmax coordinates: child name and coordinate label
/// ("small.U"); children that share a name also get their position.
std::vector<std::string> argmax_labels(const Document& doc);

/// The composed system. Nested operations become nested pushforwards, which
/// the optimizer lifts into one program unless solver.nested_pushforward.
ThermostaticSystem build_composed(const Document& doc);

}  // namespace entroad
