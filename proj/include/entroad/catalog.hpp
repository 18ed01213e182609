#pragma once

// Worked examples as runnable entries: an operation, the systems plugged into
// it, query points on the output, and a closed-form reference evaluated at
// full double precision.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entroad/operad.hpp"

namespace entroad {

struct Reference {
  ExtReal value;
  /// State of the summed input systems that attains the value, if any.
  std::optional<State> argmax;
};

struct CatalogEntry {
  std::string name;
  Operation op;
  std::vector<ThermostaticSystem> systems;
  std::vector<State> queries;
  std::function<Reference(const State&)> reference;

  ThermostaticSystem composed(const SolverConfig& cfg = {}) const { return act(op, systems, cfg); }
};

/// Two tanks merged along U1 + U2 = U. Queries U = 1..10.
CatalogEntry two_tanks(double c1, double c2);

/// Two ideal gases exchanging energy and volume with particle numbers passed
/// through: (U1,V1,N1,U2,V2,N2) -> (U1+U2, V1+V2, N1, N2).
CatalogEntry gas_equalization(double mass1 = 1.0, double mass2 = 1.0);

/// Ideal gas coupled to a heat bath at T by U_gas + U_bath = 0; the output
/// keeps (V, N). Queries on a 3x3 (V, N) grid.
CatalogEntry bath_coupling(double temperature);

/// Tank of capacity C coupled to a bath at T; output is the point.
CatalogEntry tank_bath_coupling(double capacity, double temperature);

/// Distribution on n+1 levels coupled to a bath by U + sum H_i p_i = 0.
CatalogEntry canonical(std::vector<double> energies, double temperature);

/// Heat bath plus particle bath (entropy beta*mu*N) with U + sum H_i p_i = 0
/// and N + sum M_i p_i = 0.
CatalogEntry grand_canonical(std::vector<double> energies, std::vector<double> particles, double temperature,
                             double mu);

/// A tank whose energy is forgotten entirely: unbounded entropy.
CatalogEntry infinite_entropy(double capacity);

/// A tank pushed along the inclusion of the positive reals into the line:
/// nonpositive energies are impossible states.
CatalogEntry impossible_state(double capacity);

struct MicroResult {
  ExtReal value;
  std::optional<State> argmax;
};

/// Shannon entropy maximized over the distributions supported on levels with
/// |H_i - U| <= tol_level (exact equality by default): log of the level count,
/// uniform argmax, -inf on an empty level set.
MicroResult microcanonical(const std::vector<double>& energies, double energy, double tol_level = 0.0);

/// The same supremum computed by the optimizer over the sub-simplex.
MaxResult microcanonical_solve(const std::vector<double>& energies, double energy, const SolverConfig& cfg = {},
                               double tol_level = 0.0);

using CatalogParams = std::map<std::string, std::string>;

/// Names accepted by make_entry, plus "microcanonical".
std::vector<std::string> catalog_names();

/// Builds a named entry from string parameters (lists comma separated).
/// Throws ValidationError on unknown names or malformed parameters.
CatalogEntry make_entry(const std::string& name, const CatalogParams& params);

struct CatalogRow {
  State query;
  Reference reference;
  MaxResult engine;
  double value_gap = 0.0;            // 0 when both infinite and equal; inf on a status mismatch
  std::optional<double> argmax_gap;  // max-norm, when both argmaxes exist
  bool pass = false;
};

inline constexpr double kCatalogValueTol = 1e-6;
inline constexpr double kCatalogArgmaxTol = 1e-4;

/// Solves every query of the entry and compares with the reference.
std::vector<CatalogRow> run_entry(const CatalogEntry& entry, const SolverConfig& cfg = {});

/// For "microcanonical": the optimizer path against the closed form at every
/// distinct level of H and at `extra` energies.
std::vector<CatalogRow> run_microcanonical(const std::vector<double>& energies, const std::vector<double>& extra,
                                           const SolverConfig& cfg = {});

}  // namespace entroad
