#include "entroad/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entroad/errors.hpp"
#include "entroad/optimize.hpp"

namespace entroad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kNegativeMass = 1e-9;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

double sackur_constant(const EntropyFn::SackurTetrode& g) {
  return std::log(4.0 * std::numbers::pi * g.mass / (3.0 * g.planck * g.planck));
}

}  // namespace

// ---------------------------------------------------------------- StochasticMap

StochasticMap StochasticMap::from_matrix(Matrix m) {
  if (m.rows() == 0 || m.cols() == 0) throw DomainError("stochastic map: empty matrix");
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!(m(i, j) >= 0.0) || !std::isfinite(m(i, j))) throw DomainError("stochastic map: negative entry");
      total += m(i, j);
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("stochastic map: column does not sum to 1");
  }
  return StochasticMap(std::move(m));
}

StochasticMap StochasticMap::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw DomainError("stochastic map: no columns");
  const std::size_t rows = columns.front().size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw DomainError("stochastic map: ragged columns");
    for (std::size_t i = 0; i < rows; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j][i];
  }
  return from_matrix(std::move(m));
}

StochasticMap StochasticMap::identity(std::size_t outcomes) {
  const auto k = static_cast<Eigen::Index>(outcomes);
  return from_matrix(Matrix::Identity(k, k));
}

std::vector<std::vector<double>> StochasticMap::columns() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m_.cols()));
  for (Eigen::Index j = 0; j < m_.cols(); ++j)
    for (Eigen::Index i = 0; i < m_.rows(); ++i) out[static_cast<std::size_t>(j)].push_back(m_(i, j));
  return out;
}

// ---------------------------------------------------------------- EntropyFn

EntropyFn::EntropyFn(Variant v) : v_(std::move(v)) {
  dim_ = std::visit(overloaded{
                        [](const LogTank&) -> std::size_t { return 1; },
                        [](const SackurTetrode&) -> std::size_t { return 3; },
                        [](const HeatBath&) -> std::size_t { return 1; },
                        [](const Shannon& s) { return s.n + 1; },
                        [](const VonNeumann& q) { return q.d * q.d; },
                        [](const Affine& a) { return a.a.size(); },
                        [](const Measurement& m) { return m.maps.front().inputs(); },
                        [](const Sum& s) { return s.left->dim() + s.right->dim(); },
                        [](const Pushforward& p) { return p.relation->target().dim(); },
                        [](const Constant& c) { return c.dim; },
                    },
                    v_);
}

EntropyFn EntropyFn::log_tank(double capacity) {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) throw DomainError("log_tank: capacity must be positive");
  return EntropyFn(LogTank{capacity});
}

EntropyFn EntropyFn::sackur_tetrode(double mass, double planck) {
  if (!(mass > 0.0) || !(planck > 0.0) || !std::isfinite(mass) || !std::isfinite(planck))
    throw DomainError("sackur_tetrode: mass and planck must be positive");
  return EntropyFn(SackurTetrode{mass, planck});
}

EntropyFn EntropyFn::heat_bath(double temperature) {
  require_finite(temperature, "heat_bath: temperature");
  if (temperature == 0.0) throw DomainError("heat_bath: temperature must be nonzero");
  return EntropyFn(HeatBath{temperature});
}

EntropyFn EntropyFn::shannon(std::size_t n) { return EntropyFn(Shannon{n}); }

EntropyFn EntropyFn::von_neumann(std::size_t d) {
  if (d == 0) throw DomainError("von_neumann: d must be positive");
  return EntropyFn(VonNeumann{d});
}

EntropyFn EntropyFn::affine(std::vector<double> a, double b) {
  for (double v : a) require_finite(v, "affine: coefficient");
  require_finite(b, "affine: offset");
  return EntropyFn(Affine{std::move(a), b});
}

EntropyFn EntropyFn::measurement(std::vector<StochasticMap> maps) {
  if (maps.empty()) throw DomainError("measurement: empty map list");
  for (const auto& m : maps) {
    if (m.inputs() != maps.front().inputs()) throw DomainError("measurement: maps disagree on input count");
  }
  return EntropyFn(Measurement{std::move(maps)});
}

EntropyFn EntropyFn::sum(EntropyFn left, EntropyFn right) {
  return EntropyFn(Sum{std::make_shared<const EntropyFn>(std::move(left)),
                       std::make_shared<const EntropyFn>(std::move(right))});
}

EntropyFn EntropyFn::constant(ExtReal value, std::size_t dim) { return EntropyFn(Constant{value, dim}); }

std::string EntropyFn::kind() const {
  return std::visit(overloaded{
                        [](const LogTank&) { return "log_tank"; },
                        [](const SackurTetrode&) { return "sackur_tetrode"; },
                        [](const HeatBath&) { return "heat_bath"; },
                        [](const Shannon&) { return "shannon"; },
                        [](const VonNeumann&) { return "von_neumann"; },
                        [](const Affine&) { return "affine"; },
                        [](const Measurement&) { return "measurement"; },
                        [](const Sum&) { return "sum"; },
                        [](const Pushforward&) { return "pushforward"; },
                        [](const Constant&) { return "constant"; },
                    },
                    v_);
}

// ---------------------------------------------------------------- systems

ThermostaticSystem::ThermostaticSystem(ConvexSpace space, EntropyFn entropy, std::string name)
    : space_(std::move(space)), entropy_(std::move(entropy)), name_(std::move(name)) {
  if (space_.dim() != entropy_.dim()) {
    throw DomainError("thermostatic system '" + name_ + "': entropy " + entropy_.kind() + " reads " +
                      std::to_string(entropy_.dim()) + " coordinates but space " + space_.describe() + " has " +
                      std::to_string(space_.dim()));
  }
}

double shannon_entropy(const Vector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
  }
  return s;
}

ExtReal evaluate_raw(const EntropyFn& f, const Vector& x) {
  return std::visit(
      overloaded{
          [&](const EntropyFn::LogTank& t) -> ExtReal {
            return x[0] > 0.0 ? ExtReal(t.capacity * std::log(x[0])) : ExtReal::neg_inf();
          },
          [&](const EntropyFn::SackurTetrode& g) -> ExtReal {
            const double u = x[0], v = x[1], n = x[2];
            if (!(u > 0.0 && v > 0.0 && n > 0.0)) return ExtReal::neg_inf();
            const double lv = std::log(v) - std::log(n) + 1.5 * (sackur_constant(g) + std::log(u) - std::log(n));
            return ExtReal(n * (lv + 2.5));
          },
          [&](const EntropyFn::HeatBath& b) -> ExtReal { return ExtReal(x[0] / b.temperature); },
          [&](const EntropyFn::Shannon&) -> ExtReal {
            if ((x.array() < -kNegativeMass).any()) return ExtReal::neg_inf();
            return ExtReal(shannon_entropy(x));
          },
          [&](const EntropyFn::VonNeumann& q) -> ExtReal {
            const DensityMatrix rho = decode_density(x, q.d);
            const std::vector<double> ev = hermitian_eigenvalues(rho);
            if (ev.front() < -kNegativeMass) return ExtReal::neg_inf();
            double s = 0.0;
            for (double l : ev)
              if (l > 0.0) s -= l * std::log(l);
            return ExtReal(s);
          },
          [&](const EntropyFn::Affine& a) -> ExtReal {
            double s = a.b;
            for (std::size_t i = 0; i < a.a.size(); ++i) s += a.a[i] * x[static_cast<Eigen::Index>(i)];
            return ExtReal(s);
          },
          [&](const EntropyFn::Measurement& m) -> ExtReal {
            if ((x.array() < -kNegativeMass).any()) return ExtReal::neg_inf();
            double best = std::numeric_limits<double>::infinity();
            for (const auto& e : m.maps) best = std::min(best, shannon_entropy(e.apply(x)));
            return ExtReal(best);
          },
          [&](const EntropyFn::Sum& s) -> ExtReal {
            const auto dl = static_cast<Eigen::Index>(s.left->dim());
            const ExtReal l = evaluate_raw(*s.left, x.head(dl));
            if (l.is_neg_inf()) return l;
            return xr_add(l, evaluate_raw(*s.right, x.tail(x.size() - dl)));
          },
          [&](const EntropyFn::Pushforward& p) -> ExtReal { return evaluate_pushforward(p, x); },
          [&](const EntropyFn::Constant& c) -> ExtReal { return c.value; },
      },
      f.variant());
}

bool entropy_derivatives(const EntropyFn& f, const Vector& x, Vector& grad, Matrix& hess) {
  const auto d = static_cast<Eigen::Index>(f.dim());
  grad = Vector::Zero(d);
  hess = Matrix::Zero(d, d);
  return std::visit(
      overloaded{
          [&](const EntropyFn::LogTank& t) {
            grad[0] = t.capacity / x[0];
            hess(0, 0) = -t.capacity / (x[0] * x[0]);
            return true;
          },
          [&](const EntropyFn::SackurTetrode& g) {
            const double u = x[0], v = x[1], n = x[2];
            const double lv = std::log(v) - std::log(n) + 1.5 * (sackur_constant(g) + std::log(u) - std::log(n));
            grad << 1.5 * n / u, n / v, lv;
            hess(0, 0) = -1.5 * n / (u * u);
            hess(0, 2) = hess(2, 0) = 1.5 / u;
            hess(1, 1) = -n / (v * v);
            hess(1, 2) = hess(2, 1) = 1.0 / v;
            hess(2, 2) = -2.5 / n;
            return true;
          },
          [&](const EntropyFn::HeatBath& b) {
            grad[0] = 1.0 / b.temperature;
            return true;
          },
          [&](const EntropyFn::Shannon&) {
            // Coordinates pinned at zero carry no derivative; the optimizer
            // removes them from the search space.
            for (Eigen::Index i = 0; i < d; ++i) {
              if (x[i] > 0.0) {
                grad[i] = -std::log(x[i]) - 1.0;
                hess(i, i) = -1.0 / x[i];
              }
            }
            return true;
          },
          [&](const EntropyFn::Affine& a) {
            for (Eigen::Index i = 0; i < d; ++i) grad[i] = a.a[static_cast<std::size_t>(i)];
            return true;
          },
          [&](const EntropyFn::Constant&) { return true; },
          [&](const EntropyFn::Sum& s) {
            const auto dl = static_cast<Eigen::Index>(s.left->dim());
            Vector gl, gr;
            Matrix hl, hr;
            if (!entropy_derivatives(*s.left, x.head(dl), gl, hl)) return false;
            if (!entropy_derivatives(*s.right, x.tail(d - dl), gr, hr)) return false;
            grad << gl, gr;
            hess.topLeftCorner(dl, dl) = hl;
            hess.bottomRightCorner(d - dl, d - dl) = hr;
            return true;
          },
          [](const auto&) { return false; },
      },
      f.variant());
}

ExtReal evaluate(const ThermostaticSystem& sys, const State& x) {
  if (!contains(sys.space(), x)) {
    throw DomainError("evaluate: state outside the space " + sys.space().describe() + " of system '" +
                      sys.name() + "'");
  }
  if (std::holds_alternative<EntropyFn::VonNeumann>(sys.entropy().variant())) return von_neumann(x);
  return evaluate_raw(sys.entropy(), x);
}

ThermostaticSystem sum_systems(const ThermostaticSystem& a, const ThermostaticSystem& b) {
  return ThermostaticSystem(product(a.space(), b.space()), EntropyFn::sum(a.entropy(), b.entropy()),
                            a.name() + "+" + b.name());
}

double tank_bath_limit_gap(double capacity, double temperature, double delta_u) {
  if (!(capacity > 0.0) || !(temperature > 0.0)) throw DomainError("tank_bath_limit_gap: C and T must be positive");
  const double ct = capacity * temperature;
  if (!(delta_u > -ct)) throw DomainError("tank_bath_limit_gap: dU must exceed -C*T");
  return std::abs(capacity * std::log1p(delta_u / ct) - delta_u / temperature);
}

ExtReal measurement_entropy(const std::vector<StochasticMap>& maps, const State& p) {
  if (maps.empty()) throw DomainError("measurement_entropy: empty map list");
  for (const auto& e : maps) {
    if (e.inputs() != static_cast<std::size_t>(p.size()))
      throw DomainError("measurement_entropy: map input count does not match the distribution");
  }
  if (p.size() == 0 || !contains(ConvexSpace::simplex(static_cast<std::size_t>(p.size()) - 1), p))
    throw DomainError("measurement_entropy: p is not a probability distribution");
  return evaluate_raw(EntropyFn::measurement(maps), p);
}

StochasticMap coarse_grain(const StochasticMap& e, const std::vector<std::size_t>& outcome_map, std::size_t outcomes) {
  if (outcome_map.size() != e.outcomes())
    throw DomainError("coarse_grain: outcome map must be total on the measurement's outcomes");
  std::size_t k = outcomes;
  if (k == 0) k = *std::max_element(outcome_map.begin(), outcome_map.end()) + 1;
  Matrix f = Matrix::Zero(static_cast<Eigen::Index>(k), e.matrix().cols());
  for (std::size_t j = 0; j < outcome_map.size(); ++j) {
    if (outcome_map[j] >= k) throw DomainError("coarse_grain: outcome index out of range");
    f.row(static_cast<Eigen::Index>(outcome_map[j])) += e.matrix().row(static_cast<Eigen::Index>(j));
  }
  return StochasticMap::from_matrix(std::move(f));
}

// ---------------------------------------------------------------- density matrices

DensityMatrix decode_density(const State& coords, std::size_t d) {
  if (static_cast<std::size_t>(coords.size()) != d * d)
    throw DomainError("density matrix: expected d^2 = " + std::to_string(d * d) + " coordinates");
  const auto n = static_cast<Eigen::Index>(d);
  DensityMatrix rho{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) rho.re(i, i) = coords[k++];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      rho.re(i, j) = rho.re(j, i) = coords[k++];
      rho.im(i, j) = coords[k++];
      rho.im(j, i) = -rho.im(i, j);
    }
  }
  return rho;
}

State encode_density(const DensityMatrix& rho) {
  const Eigen::Index n = rho.re.rows();
  State s(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) s[k++] = rho.re(i, i);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      s[k++] = rho.re(i, j);
      s[k++] = rho.im(i, j);
    }
  }
  return s;
}

std::vector<double> hermitian_eigenvalues(const DensityMatrix& rho) {
  const Eigen::Index d = rho.re.rows();
  Matrix a(2 * d, 2 * d);
  a << rho.re, -rho.im, rho.im, rho.re;
  const Eigen::Index n = a.rows();
  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off_norm() >= 1e-12; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(all.begin(), all.end());
  // The real embedding doubles every eigenvalue.
  std::vector<double> out;
  for (std::size_t i = 0; i < all.size(); i += 2) out.push_back(0.5 * (all[i] + all[i + 1]));
  return out;
}

ExtReal von_neumann(const State& rho_coords) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rho_coords.size()))));
  if (d == 0 || d * d != static_cast<std::size_t>(rho_coords.size()))
    throw DomainError("von_neumann: coordinate count is not a perfect square");
  const DensityMatrix rho = decode_density(rho_coords, d);
  if (std::abs(rho.re.trace() - 1.0) > 1e-9) throw DomainError("von_neumann: trace is not 1");
  const std::vector<double> ev = hermitian_eigenvalues(rho);
  if (ev.front() < -1e-9) throw DomainError("von_neumann: matrix is not positive semidefinite");
  double s = 0.0;
  for (double l : ev)
    if (l > 0.0) s -= l * std::log(l);
  return ExtReal(s);
}

ConvexSpace density_space(std::size_t d) {
  std::vector<double> trace(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) trace[i] = 1.0;
  return ConvexSpace::polyhedron(d * d, {Hyperplane{trace, 1.0}}, {});
}

}  // namespace entroad
