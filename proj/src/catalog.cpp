#include "entroad/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "entroad/errors.hpp"

namespace entroad {

namespace {

using Row = ConvexRelation::Row;

ConvexSpace labelled(ConvexSpace s, std::vector<std::string> labels) { return s.with_labels(std::move(labels)); }

std::vector<std::string> indexed(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

double sackur_value(double u, double v, double n, double mass) {
  return n * (std::log(v / n) + 1.5 * std::log(4.0 * std::numbers::pi * mass * u / (3.0 * n)) + 2.5);
}

// log sum_i exp(-x_i), shifted for range.
double log_sum_exp_neg(const std::vector<double>& x) {
  const double m = *std::min_element(x.begin(), x.end());
  double s = 0.0;
  for (double v : x) s += std::exp(-(v - m));
  return std::log(s) - m;
}

std::vector<double> boltzmann(const std::vector<double>& x) {
  const double m = *std::min_element(x.begin(), x.end());
  std::vector<double> w;
  double z = 0.0;
  for (double v : x) {
    w.push_back(std::exp(-(v - m)));
    z += w.back();
  }
  for (double& v : w) v /= z;
  return w;
}

void require_levels(const std::vector<double>& h, const char* who) {
  if (h.empty()) throw DomainError(std::string(who) + ": need at least one energy level");
  for (double v : h)
    if (!std::isfinite(v)) throw DomainError(std::string(who) + ": energy levels must be finite");
}

double inverse_temperature(double t, const char* who) {
  if (t == 0.0 || !std::isfinite(t)) throw DomainError(std::string(who) + ": temperature must be finite and nonzero");
  return 1.0 / t;
}

}  // namespace

CatalogEntry two_tanks(double c1, double c2) {
  CatalogEntry e;
  e.name = "two_tanks";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::orthant(1), {"U1"}), EntropyFn::log_tank(c1), "tank1"),
               ThermostaticSystem(labelled(ConvexSpace::orthant(1), {"U2"}), EntropyFn::log_tank(c2), "tank2")};
  const ConvexSpace out = labelled(ConvexSpace::orthant(1), {"U"});
  e.op = make_operation({e.systems[0].space(), e.systems[1].space()}, out,
                        ConvexRelation::affine(product(e.systems[0].space(), e.systems[1].space()), out,
                                               {Row{{1.0, 1.0}, {-1.0}, 0.0, Sense::eq}}));
  for (int u = 1; u <= 10; ++u) e.queries.push_back(make_state({static_cast<double>(u)}));
  e.reference = [c1, c2](const State& y) {
    const double u = y[0], c = c1 + c2;
    return Reference{c * std::log(u) + c1 * std::log(c1 / c) + c2 * std::log(c2 / c), make_state({c1 / c * u, c2 / c * u})};
  };
  return e;
}

CatalogEntry gas_equalization(double mass1, double mass2) {
  CatalogEntry e;
  e.name = "gas_equalization";
  e.systems = {
      ThermostaticSystem(labelled(ConvexSpace::orthant(3), {"U1", "V1", "N1"}), EntropyFn::sackur_tetrode(mass1), "gas1"),
      ThermostaticSystem(labelled(ConvexSpace::orthant(3), {"U2", "V2", "N2"}), EntropyFn::sackur_tetrode(mass2), "gas2")};
  const ConvexSpace out = labelled(ConvexSpace::orthant(4), {"U", "V", "N1", "N2"});
  const ConvexSpace in = product(e.systems[0].space(), e.systems[1].space());
  e.op = make_operation({e.systems[0].space(), e.systems[1].space()}, out,
                        ConvexRelation::affine(in, out,
                                               {Row{{1, 0, 0, 1, 0, 0}, {-1, 0, 0, 0}, 0.0, Sense::eq},
                                                Row{{0, 1, 0, 0, 1, 0}, {0, -1, 0, 0}, 0.0, Sense::eq},
                                                Row{{0, 0, 1, 0, 0, 0}, {0, 0, -1, 0}, 0.0, Sense::eq},
                                                Row{{0, 0, 0, 0, 0, 1}, {0, 0, 0, -1}, 0.0, Sense::eq}}));
  e.queries = {make_state({2, 2, 1, 1}), make_state({3, 1, 1, 2}), make_state({5, 4, 2, 0.5})};
  // Equal temperatures 1.5 N_i / U_i and pressures N_i / V_i: both totals
  // split in proportion to particle number, whatever the masses.
  e.reference = [mass1, mass2](const State& y) {
    const double u = y[0], v = y[1], n1 = y[2], n2 = y[3], n = n1 + n2;
    const double u1 = u * n1 / n, u2 = u * n2 / n, v1 = v * n1 / n, v2 = v * n2 / n;
    return Reference{sackur_value(u1, v1, n1, mass1) + sackur_value(u2, v2, n2, mass2),
                     make_state({u1, v1, n1, u2, v2, n2})};
  };
  return e;
}

CatalogEntry bath_coupling(double temperature) {
  const double beta = inverse_temperature(temperature, "bath_coupling");
  CatalogEntry e;
  e.name = "bath_coupling";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::orthant(3), {"U", "V", "N"}), EntropyFn::sackur_tetrode(), "gas"),
               ThermostaticSystem(labelled(ConvexSpace::real_line(1), {"U_bath"}), EntropyFn::heat_bath(temperature),
                                  "bath")};
  const ConvexSpace out = labelled(ConvexSpace::orthant(2), {"V", "N"});
  const ConvexSpace in = product(e.systems[0].space(), e.systems[1].space());
  e.op = make_operation({e.systems[0].space(), e.systems[1].space()}, out,
                        ConvexRelation::affine(in, out,
                                               {Row{{1, 0, 0, 1}, {0, 0}, 0.0, Sense::eq},
                                                Row{{0, 1, 0, 0}, {-1, 0}, 0.0, Sense::eq},
                                                Row{{0, 0, 1, 0}, {0, -1}, 0.0, Sense::eq}}));
  for (double v : {1.0, 2.0, 3.0})
    for (double n : {1.0, 2.0, 3.0}) e.queries.push_back(make_state({v, n}));
  // sup_U S(U, V, N) - beta U is attained at U = 1.5 N / beta.
  e.reference = [beta](const State& y) {
    if (beta <= 0.0) return Reference{ExtReal::pos_inf(), std::nullopt};
    const double v = y[0], n = y[1], u = 1.5 * n / beta;
    return Reference{sackur_value(u, v, n, 1.0) - beta * u, make_state({u, v, n, -u})};
  };
  return e;
}

CatalogEntry tank_bath_coupling(double capacity, double temperature) {
  const double beta = inverse_temperature(temperature, "tank_bath_coupling");
  CatalogEntry e;
  e.name = "tank_bath_coupling";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::orthant(1), {"U"}), EntropyFn::log_tank(capacity), "tank"),
               ThermostaticSystem(labelled(ConvexSpace::real_line(1), {"U_bath"}), EntropyFn::heat_bath(temperature),
                                  "bath")};
  const ConvexSpace in = product(e.systems[0].space(), e.systems[1].space());
  e.op = make_operation({e.systems[0].space(), e.systems[1].space()}, ConvexSpace::point(),
                        ConvexRelation::affine(in, ConvexSpace::point(), {Row{{1, 1}, {}, 0.0, Sense::eq}}));
  e.queries = {State(0)};
  e.reference = [capacity, beta](const State&) {
    if (beta <= 0.0) return Reference{ExtReal::pos_inf(), std::nullopt};
    const double u = capacity / beta;
    return Reference{capacity * std::log(u) - capacity, make_state({u, -u})};
  };
  return e;
}

CatalogEntry canonical(std::vector<double> energies, double temperature) {
  require_levels(energies, "canonical");
  const double beta = inverse_temperature(temperature, "canonical");
  const std::size_t n = energies.size() - 1;
  CatalogEntry e;
  e.name = "canonical";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::simplex(n), indexed("p", n + 1)), EntropyFn::shannon(n), "levels"),
               ThermostaticSystem(labelled(ConvexSpace::real_line(1), {"U"}), EntropyFn::heat_bath(temperature), "bath")};
  std::vector<double> a = energies;
  a.push_back(1.0);
  const ConvexSpace in = product(e.systems[0].space(), e.systems[1].space());
  e.op = make_operation({e.systems[0].space(), e.systems[1].space()}, ConvexSpace::point(),
                        ConvexRelation::affine(in, ConvexSpace::point(), {Row{a, {}, 0.0, Sense::eq}}));
  e.queries = {State(0)};
  e.reference = [energies, beta](const State&) {
    std::vector<double> x;
    for (double h : energies) x.push_back(beta * h);
    const std::vector<double> p = boltzmann(x);
    State arg(static_cast<Eigen::Index>(p.size() + 1));
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      arg[static_cast<Eigen::Index>(i)] = p[i];
      mean += p[i] * energies[i];
    }
    arg[static_cast<Eigen::Index>(p.size())] = -mean;
    return Reference{log_sum_exp_neg(x), arg};
  };
  return e;
}

CatalogEntry grand_canonical(std::vector<double> energies, std::vector<double> particles, double temperature,
                             double mu) {
  require_levels(energies, "grand_canonical");
  require_levels(particles, "grand_canonical");
  if (particles.size() != energies.size())
    throw DomainError("grand_canonical: energy and particle lists differ in length");
  if (!std::isfinite(mu)) throw DomainError("grand_canonical: mu must be finite");
  const double beta = inverse_temperature(temperature, "grand_canonical");
  const std::size_t n = energies.size() - 1;
  CatalogEntry e;
  e.name = "grand_canonical";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::simplex(n), indexed("p", n + 1)), EntropyFn::shannon(n), "levels"),
               ThermostaticSystem(labelled(ConvexSpace::real_line(1), {"U"}), EntropyFn::heat_bath(temperature), "bath"),
               ThermostaticSystem(labelled(ConvexSpace::real_line(1), {"N"}), EntropyFn::affine({beta * mu}, 0.0),
                                  "particle_bath")};
  std::vector<double> a1 = energies, a2 = particles;
  a1.insert(a1.end(), {1.0, 0.0});
  a2.insert(a2.end(), {0.0, 1.0});
  const ConvexSpace in = product(product(e.systems[0].space(), e.systems[1].space()), e.systems[2].space());
  e.op = make_operation({e.systems[0].space(), e.systems[1].space(), e.systems[2].space()}, ConvexSpace::point(),
                        ConvexRelation::affine(in, ConvexSpace::point(),
                                               {Row{a1, {}, 0.0, Sense::eq}, Row{a2, {}, 0.0, Sense::eq}}));
  e.queries = {State(0)};
  e.reference = [energies, particles, beta, mu](const State&) {
    std::vector<double> x;
    for (std::size_t i = 0; i < energies.size(); ++i) x.push_back(beta * (energies[i] + mu * particles[i]));
    const std::vector<double> p = boltzmann(x);
    State arg(static_cast<Eigen::Index>(p.size() + 2));
    double mh = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      arg[static_cast<Eigen::Index>(i)] = p[i];
      mh += p[i] * energies[i];
      mm += p[i] * particles[i];
    }
    arg[static_cast<Eigen::Index>(p.size())] = -mh;
    arg[static_cast<Eigen::Index>(p.size() + 1)] = -mm;
    return Reference{log_sum_exp_neg(x), arg};
  };
  return e;
}

CatalogEntry infinite_entropy(double capacity) {
  CatalogEntry e;
  e.name = "infinite_entropy";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::orthant(1), {"U"}), EntropyFn::log_tank(capacity), "tank")};
  e.op = make_operation({e.systems[0].space()}, ConvexSpace::point(),
                        ConvexRelation::full(e.systems[0].space(), ConvexSpace::point()));
  e.queries = {State(0)};
  e.reference = [](const State&) { return Reference{ExtReal::pos_inf(), std::nullopt}; };
  return e;
}

CatalogEntry impossible_state(double capacity) {
  CatalogEntry e;
  e.name = "impossible_state";
  e.systems = {ThermostaticSystem(labelled(ConvexSpace::orthant(1), {"U"}), EntropyFn::log_tank(capacity), "tank")};
  const ConvexSpace out = labelled(ConvexSpace::real_line(1), {"U"});
  e.op = make_operation({e.systems[0].space()}, out,
                        ConvexRelation::graph(e.systems[0].space(), out, AffineMap{Matrix::Identity(1, 1), Vector::Zero(1)}));
  e.queries = {make_state({2.0}), make_state({0.5}), make_state({0.0}), make_state({-1.0})};
  e.reference = [capacity](const State& y) {
    if (y[0] <= 0.0) return Reference{ExtReal::neg_inf(), std::nullopt};
    return Reference{capacity * std::log(y[0]), y};
  };
  return e;
}

MicroResult microcanonical(const std::vector<double>& energies, double energy, double tol_level) {
  require_levels(energies, "microcanonical");
  std::size_t count = 0;
  for (double h : energies)
    if (std::abs(h - energy) <= tol_level) ++count;
  if (count == 0) return MicroResult{ExtReal::neg_inf(), std::nullopt};
  State p = State::Zero(static_cast<Eigen::Index>(energies.size()));
  for (std::size_t i = 0; i < energies.size(); ++i)
    if (std::abs(energies[i] - energy) <= tol_level) p[static_cast<Eigen::Index>(i)] = 1.0 / static_cast<double>(count);
  return MicroResult{std::log(static_cast<double>(count)), p};
}

MaxResult microcanonical_solve(const std::vector<double>& energies, double energy, const SolverConfig& cfg,
                               double tol_level) {
  require_levels(energies, "microcanonical");
  const std::size_t n = energies.size() - 1;
  ConstraintSet cs;
  cs.dim = n + 1;
  cs.system.add_vars(n + 1);
  ConvexSpace::simplex(n).lower(cs.system, 0);
  for (std::size_t i = 0; i <= n; ++i)
    if (!(std::abs(energies[i] - energy) <= tol_level)) cs.system.add_row(LinearRow{{{i, 1.0}}, 0.0, Sense::eq});
  return maximize(EntropyFn::shannon(n), cs, cfg);
}

std::vector<std::string> catalog_names() {
  return {"two_tanks",        "gas_equalization", "bath_coupling",    "tank_bath_coupling", "canonical",
          "grand_canonical",  "microcanonical",   "infinite_entropy", "impossible_state"};
}

namespace {

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw ValidationError("catalog parameter " + key + ": '" + text + "' is not a finite number");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ValidationError("catalog parameter " + key + ": empty list");
  return out;
}

class Params {
 public:
  Params(const CatalogParams& p, std::set<std::string> allowed) : p_(p) {
    for (const auto& [k, v] : p)
      if (!allowed.count(k)) throw ValidationError("unknown catalog parameter '" + k + "'");
  }
  double num(const std::string& k, double def) const {
    auto it = p_.find(k);
    return it == p_.end() ? def : parse_number(k, it->second);
  }
  std::vector<double> list(const std::string& k, std::vector<double> def) const {
    auto it = p_.find(k);
    return it == p_.end() ? def : parse_list(k, it->second);
  }

 private:
  const CatalogParams& p_;
};

}  // namespace

CatalogEntry make_entry(const std::string& name, const CatalogParams& params) {
  try {
    if (name == "two_tanks") {
      Params p(params, {"C1", "C2"});
      return two_tanks(p.num("C1", 1.0), p.num("C2", 2.0));
    }
    if (name == "gas_equalization") {
      Params p(params, {"m1", "m2"});
      return gas_equalization(p.num("m1", 1.0), p.num("m2", 1.0));
    }
    if (name == "bath_coupling") {
      Params p(params, {"T"});
      return bath_coupling(p.num("T", 1.0));
    }
    if (name == "tank_bath_coupling") {
      Params p(params, {"C", "T"});
      return tank_bath_coupling(p.num("C", 1.0), p.num("T", 1.0));
    }
    if (name == "canonical") {
      Params p(params, {"H", "T"});
      return canonical(p.list("H", {0, 1, 2}), p.num("T", 1.0));
    }
    if (name == "grand_canonical") {
      Params p(params, {"H", "M", "T", "mu"});
      return grand_canonical(p.list("H", {0, 1}), p.list("M", {0, 1}), p.num("T", 1.0), p.num("mu", 1.0));
    }
    if (name == "infinite_entropy") {
      Params p(params, {"C"});
      return infinite_entropy(p.num("C", 1.0));
    }
    if (name == "impossible_state") {
      Params p(params, {"C"});
      return impossible_state(p.num("C", 1.0));
    }
  } catch (const DomainError& e) {
    throw ValidationError(std::string("catalog ") + name + ": " + e.what());
  }
  throw ValidationError("unknown catalog entry '" + name + "'");
}

namespace {

void score(CatalogRow& row) {
  const ExtReal a = row.reference.value, b = row.engine.value;
  if (a.is_finite() && b.is_finite())
    row.value_gap = std::abs(a.value() - b.value());
  else
    row.value_gap = a == b ? 0.0 : std::numeric_limits<double>::infinity();
  if (row.reference.argmax && row.engine.argmax && row.reference.argmax->size() == row.engine.argmax->size())
    row.argmax_gap = (*row.reference.argmax - *row.engine.argmax).lpNorm<Eigen::Infinity>();
  row.pass = row.value_gap <= kCatalogValueTol;
  if (row.reference.argmax && a.is_finite()) row.pass = row.pass && row.argmax_gap && *row.argmax_gap <= kCatalogArgmaxTol;
}

}  // namespace

std::vector<CatalogRow> run_entry(const CatalogEntry& entry, const SolverConfig& cfg) {
  const ThermostaticSystem sys = entry.composed(cfg);
  std::vector<CatalogRow> rows;
  for (const State& q : entry.queries) {
    CatalogRow row;
    row.query = q;
    row.reference = entry.reference(q);
    row.engine = solve_at(sys, q, cfg);
    score(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CatalogRow> run_microcanonical(const std::vector<double>& energies, const std::vector<double>& extra,
                                           const SolverConfig& cfg) {
  std::vector<double> levels = energies;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  levels.insert(levels.end(), extra.begin(), extra.end());
  std::vector<CatalogRow> rows;
  for (double u : levels) {
    CatalogRow row;
    row.query = make_state({u});
    const MicroResult m = microcanonical(energies, u);
    row.reference = Reference{m.value, m.argmax};
    row.engine = microcanonical_solve(energies, u, cfg);
    score(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace entroad
