#pragma once

// Thermostatic systems: a convex space of states paired with a concave
// entropy function into the extended reals.

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "entroad/convex.hpp"
#include "entroad/relation.hpp"
#include "entroad/solver_config.hpp"
#include "entroad/xreal.hpp"

namespace entroad {

/// Column-stochastic matrix sending distributions on `inputs()` outcomes to
/// distributions on `outcomes()` outcomes.
class StochasticMap {
 public:
  /// Columns are given one per input outcome. Throws DomainError unless
  /// entries are nonnegative and each column sums to 1 within 1e-12.
  static StochasticMap from_columns(const std::vector<std::vector<double>>& columns);
  static StochasticMap from_matrix(Matrix m);
  static StochasticMap identity(std::size_t outcomes);

  std::size_t inputs() const { return static_cast<std::size_t>(m_.cols()); }
  std::size_t outcomes() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Vector apply(const Vector& p) const { return m_ * p; }
  std::vector<std::vector<double>> columns() const;

 private:
  explicit StochasticMap(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

class ThermostaticSystem;

class EntropyFn {
 public:
  /// C log U on the positive half-line.
  struct LogTank {
    double capacity = 1.0;
  };
  /// Ideal gas on (U, V, N): N [log((V/N) (4 pi m U / (3 N h^2))^{3/2}) + 5/2].
  struct SackurTetrode {
    double mass = 1.0;
    double planck = 1.0;
  };
  /// U / T0 on the real line.
  struct HeatBath {
    double temperature = 1.0;
  };
  /// -sum p_i log p_i on the n-simplex.
  struct Shannon {
    std::size_t n = 0;
  };
  /// -Tr(rho log rho) over the packed d x d Hermitian coordinates.
  struct VonNeumann {
    std::size_t d = 0;
  };
  struct Affine {
    std::vector<double> a;
    double b = 0.0;
  };
  /// inf over the maps e of Shannon(e(x)).
  struct Measurement {
    std::vector<StochasticMap> maps;
  };
  struct Sum {
    std::shared_ptr<const EntropyFn> left;
    std::shared_ptr<const EntropyFn> right;
  };
  /// R_* S: y -> sup over the fiber of y. Evaluated lazily by the optimizer.
  struct Pushforward {
    std::shared_ptr<const ThermostaticSystem> inner;
    std::shared_ptr<const ConvexRelation> relation;
    SolverConfig config;
  };
  struct Constant {
    ExtReal value;
    std::size_t dim = 0;
  };
  using Variant =
      std::variant<LogTank, SackurTetrode, HeatBath, Shannon, VonNeumann, Affine, Measurement, Sum, Pushforward, Constant>;

  static EntropyFn log_tank(double capacity);
  static EntropyFn sackur_tetrode(double mass = 1.0, double planck = 1.0);
  static EntropyFn heat_bath(double temperature);
  static EntropyFn shannon(std::size_t n);
  static EntropyFn von_neumann(std::size_t d);
  static EntropyFn affine(std::vector<double> a, double b);
  static EntropyFn measurement(std::vector<StochasticMap> maps);
  static EntropyFn sum(EntropyFn left, EntropyFn right);
  static EntropyFn constant(ExtReal value, std::size_t dim = 0);

  const Variant& variant() const { return v_; }
  /// Number of state coordinates the function reads.
  std::size_t dim() const { return dim_; }
  std::string kind() const;

  friend class ThermostaticSystem;
  friend ThermostaticSystem pushforward(const ThermostaticSystem& sys, const ConvexRelation& r,
                                        const SolverConfig& cfg);

 private:
  explicit EntropyFn(Variant v);
  Variant v_;
  std::size_t dim_ = 0;
};

class ThermostaticSystem {
 public:
  /// Throws DomainError when the entropy's dimension differs from the space's.
  ThermostaticSystem(ConvexSpace space, EntropyFn entropy, std::string name = {});

  const ConvexSpace& space() const { return space_; }
  const EntropyFn& entropy() const { return entropy_; }
  const std::string& name() const { return name_; }

 private:
  ConvexSpace space_;
  EntropyFn entropy_;
  std::string name_;
};

/// S(x). Throws DomainError when x is outside the system's space; never NaN.
ExtReal evaluate(const ThermostaticSystem& sys, const State& x);

/// The entropy's natural extension: -inf off its natural domain instead of
/// an error. This is what the optimizer maximizes.
ExtReal evaluate_raw(const EntropyFn& f, const Vector& x);

/// Analytic gradient and Hessian for the smooth closed-form families at an
/// interior point. Returns false for families without closed forms.
bool entropy_derivatives(const EntropyFn& f, const Vector& x, Vector& grad, Matrix& hess);

/// Laxator: S + T on the product space, adding with -inf dominant.
ThermostaticSystem sum_systems(const ThermostaticSystem& a, const ThermostaticSystem& b);

/// |C log(CT + dU) - C log(CT) - dU/T|: distance between a tank of capacity
/// C around temperature T and the heat bath at T. Requires dU > -CT.
double tank_bath_limit_gap(double capacity, double temperature, double delta_u);

/// -sum p_i log p_i with 0 log 0 = 0.
double shannon_entropy(const Vector& p);

/// min over maps of Shannon(e p). Throws DomainError on an empty list or a
/// map whose input count differs from p's length.
ExtReal measurement_entropy(const std::vector<StochasticMap>& maps, const State& p);

/// The map M~ o e where M~ is the 0/1 matrix of `outcome_map`. `outcomes` is
/// the size of the coarse outcome set (0 means max(outcome_map) + 1).
StochasticMap coarse_grain(const StochasticMap& e, const std::vector<std::size_t>& outcome_map,
                           std::size_t outcomes = 0);

/// Density-matrix coordinates: the d diagonal entries, then (Re, Im) of each
/// strict-upper-triangle entry in row-major order; d^2 reals in all.
struct DensityMatrix {
  Matrix re;
  Matrix im;
};
DensityMatrix decode_density(const State& coords, std::size_t d);
State encode_density(const DensityMatrix& rho);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on its real
/// symmetric embedding, stopping when the off-diagonal Frobenius norm is
/// below 1e-12. Ascending.
std::vector<double> hermitian_eigenvalues(const DensityMatrix& rho);

/// -Tr(rho log rho). Throws DomainError unless rho is Hermitian, trace 1 and
/// PSD within 1e-9.
ExtReal von_neumann(const State& rho_coords);

/// The constraint set of density-matrix coordinates handed to VonNeumann
/// systems: trace 1 over d^2 coordinates. PSD is checked on evaluation.
ConvexSpace density_space(std::size_t d);

}  // namespace entroad
