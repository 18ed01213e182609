#include "entroad/laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "entroad/operad.hpp"
#include "entroad/optimize.hpp"
#include "entroad/random.hpp"

namespace entroad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xr_gap(ExtReal a, ExtReal b) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value());
  return a == b ? 0.0 : kInf;
}

void record(SuiteReport& r, double gap, double tol) {
  r.worst_gap = std::max(r.worst_gap, gap);
  if (gap <= tol)
    ++r.passed;
  else
    ++r.failed;
}

// Per-trial generator so that trial i does not depend on earlier trials.
Rng trial_rng(std::uint64_t seed, std::uint64_t suite, std::size_t trial) {
  return Rng(seed * 0x9E3779B97F4A7C15ull + suite * 0xBF58476D1CE4E5B9ull + trial);
}

// ---------------------------------------------------------------- instances

struct Source {
  ThermostaticSystem sys;
  bool positive = true;  // orthant states (else simplex)
  std::size_t free_dim = 0;  // dimension of the space's affine hull
  std::function<State(Rng&)> draw;
};

Source random_source(Rng& rng, std::size_t max_dim) {
  if (rng.uniform() < 0.6) {
    const std::size_t k = 1 + rng.index(max_dim);
    std::optional<ThermostaticSystem> sys;
    for (std::size_t i = 0; i < k; ++i) {
      const bool tank = rng.uniform() < 0.75;
      ThermostaticSystem part(ConvexSpace::orthant(1),
                              tank ? EntropyFn::log_tank(rng.uniform(0.5, 3.0))
                                   : EntropyFn::affine({-rng.uniform(0.1, 1.0)}, rng.uniform(-1.0, 1.0)),
                              tank ? "tank" : "slope");
      sys = sys ? sum_systems(*sys, part) : part;
    }
    return Source{*sys, true, k, [k](Rng& r) {
                    State x(static_cast<Eigen::Index>(k));
                    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = r.uniform(0.5, 3.0);
                    return x;
                  }};
  }
  const std::size_t k = 2 + rng.index(max_dim - 1);
  const std::size_t n = k - 1;
  EntropyFn f = EntropyFn::shannon(n);
  if (rng.uniform() < 0.3) {
    std::vector<double> a(k);
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    f = EntropyFn::affine(a, 0.0);
  }
  return Source{ThermostaticSystem(ConvexSpace::simplex(n), f, "dist"), false, n, [k](Rng& r) {
                  State p(static_cast<Eigen::Index>(k));
                  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = r.exponential();
                  p /= p.sum();
                  return State(0.5 * p.array() + 0.5 / static_cast<double>(k));
                }};
}

struct MapRelation {
  ConvexRelation rel;
  Matrix a;
};

// y = A x with A positive (orthant to orthant) or signed (into the line),
// stored either as a graph or as explicit affine rows.
MapRelation random_map(Rng& rng, const ConvexSpace& source, bool positive, std::size_t m) {
  const auto k = static_cast<Eigen::Index>(source.dim());
  const auto rows = static_cast<Eigen::Index>(m);
  Matrix a(rows, k);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = positive ? rng.uniform(0.2, 2.0) : rng.uniform(-1.0, 1.0);
  const ConvexSpace target = positive ? ConvexSpace::orthant(m) : ConvexSpace::real_line(m);
  if (rng.uniform() < 0.5) return MapRelation{ConvexRelation::graph(source, target, AffineMap{a, Vector::Zero(rows)}), a};
  std::vector<ConvexRelation::Row> body;
  for (Eigen::Index i = 0; i < rows; ++i) {
    ConvexRelation::Row r;
    for (Eigen::Index j = 0; j < k; ++j) r.a.push_back(a(i, j));
    r.b.assign(m, 0.0);
    r.b[static_cast<std::size_t>(i)] = -1.0;
    body.push_back(r);
  }
  return MapRelation{ConvexRelation::affine(source, target, body), a};
}

ThermostaticSystem tank(double c) { return ThermostaticSystem(ConvexSpace::orthant(1), EntropyFn::log_tank(c), "tank"); }

State concat(const State& a, const State& b) {
  State out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- suites

SuiteReport convex_axiom_suite(const LawOptions& opt) {
  SuiteReport rep{"convex_axioms"};
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng = trial_rng(opt.seed, 1, t);
    ConvexSpace space;
    switch (rng.index(4)) {
      case 0:
        space = ConvexSpace::simplex(1 + rng.index(3));
        break;
      case 1:
        space = ConvexSpace::orthant(1 + rng.index(3));
        break;
      case 2:
        space = ConvexSpace::polyhedron(2, {}, {HalfSpace{{1, 1}, 2.5}, HalfSpace{{-1, 0}, 0.0}, HalfSpace{{0, -1}, 0.0, true}});
        break;
      default:
        space = product(ConvexSpace::simplex(1), ConvexSpace::orthant(1));
        break;
    }
    const auto pts = sample(space, BoundingBox::uniform(space.dim(), 0.0, 3.0), rng.index(1u << 30), 3);
    const State &x = pts[0], &y = pts[1], &z = pts[2];
    double gap = 0.0;
    auto dist = [](const State& a, const State& b) { return (a - b).lpNorm<Eigen::Infinity>(); };
    for (double lam : grid) {
      for (double mu : grid) {
        gap = std::max(gap, dist(combine(space, 1.0, x, y), x));
        gap = std::max(gap, dist(combine(space, lam, x, x), x));
        gap = std::max(gap, dist(combine(space, lam, x, y), combine(space, 1.0 - lam, y, x)));
        const double lp = lam * mu;
        const double mp = lp == 1.0 ? 0.0 : lam * (1.0 - mu) / (1.0 - lp);
        gap = std::max(gap, dist(combine(space, lam, combine(space, mu, x, y), z),
                                 combine(space, lp, x, combine(space, mp, y, z))));
        if (!contains(space, combine(space, lam, x, y))) gap = kInf;
      }
    }
    // The same laws on the extended reals, infinities included.
    const ExtReal pool[] = {ExtReal::neg_inf(), ExtReal::pos_inf(), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const ExtReal a = pool[rng.index(4)], b = pool[rng.index(4)], c = pool[rng.index(4)];
    for (double lam : grid) {
      for (double mu : grid) {
        const double lp = lam * mu;
        const double mp = lp == 1.0 ? 0.0 : lam * (1.0 - mu) / (1.0 - lp);
        gap = std::max(gap, xr_gap(xr_combine(lam, xr_combine(mu, a, b), c), xr_combine(lp, a, xr_combine(mp, b, c))));
        gap = std::max(gap, xr_gap(xr_combine(lam, a, b), xr_combine(1.0 - lam, b, a)));
        gap = std::max(gap, xr_gap(xr_combine(lam, a, a), a));
      }
    }
    record(rep, gap, kAxiomTolerance);
  }
  return rep;
}

SuiteReport functoriality_suite(const LawOptions& opt) {
  SuiteReport rep{"functoriality"};
  SolverConfig nested = opt.cfg;
  nested.nested_pushforward = true;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng = trial_rng(opt.seed, 2, t);
    const Source src = random_source(rng, 3);
    const std::size_t m = 1 + rng.index(src.free_dim);
    const std::size_t l = 1 + rng.index(m);
    const MapRelation r1 = random_map(rng, src.sys.space(), src.positive, m);
    const MapRelation r2 = random_map(rng, r1.rel.target(), src.positive, l);
    const ThermostaticSystem two_step = pushforward(pushforward(src.sys, r1.rel, nested), r2.rel, nested);
    const ThermostaticSystem one_step = pushforward(src.sys, compose(r1.rel, r2.rel), opt.cfg);
    double gap = 0.0;
    for (int q = 0; q < 5; ++q) {
      const State z = r2.a * (r1.a * src.draw(rng));
      gap = std::max(gap, xr_gap(evaluate(two_step, z), evaluate(one_step, z)));
    }
    record(rep, gap, kLawTolerance);
  }
  return rep;
}

SuiteReport laxator_suite(const LawOptions& opt) {
  SuiteReport rep{"laxator"};
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng = trial_rng(opt.seed, 3, t);
    double gap = 0.0;
    if (t % 4 == 0) {
      // Q_*S = +inf (energy forgotten), R_*T = -inf (negative energy).
      const ThermostaticSystem s = tank(rng.uniform(0.5, 3.0)), tt = tank(rng.uniform(0.5, 3.0));
      const ConvexRelation q = ConvexRelation::full(s.space(), ConvexSpace::point());
      const ConvexRelation r = ConvexRelation::graph(tt.space(), ConvexSpace::real_line(1),
                                                     AffineMap{Matrix::Identity(1, 1), Vector::Zero(1)});
      const State y = make_state({-rng.uniform(0.5, 3.0)});
      const ExtReal lhs = evaluate(pushforward(sum_systems(s, tt), rel_product(q, r), opt.cfg), y);
      const ExtReal rhs = opt.add(evaluate(pushforward(s, q, opt.cfg), State(0)), evaluate(pushforward(tt, r, opt.cfg), y));
      gap = xr_gap(lhs, rhs);
    } else {
      const Source s = random_source(rng, 2), tt = random_source(rng, 2);
      const MapRelation q = random_map(rng, s.sys.space(), s.positive, 1 + rng.index(s.free_dim));
      const MapRelation r = random_map(rng, tt.sys.space(), tt.positive, 1 + rng.index(tt.free_dim));
      const ThermostaticSystem joint = pushforward(sum_systems(s.sys, tt.sys), rel_product(q.rel, r.rel), opt.cfg);
      const ThermostaticSystem qs = pushforward(s.sys, q.rel, opt.cfg), rt = pushforward(tt.sys, r.rel, opt.cfg);
      for (int k = 0; k < 3; ++k) {
        const State x = q.a * s.draw(rng), y = r.a * tt.draw(rng);
        gap = std::max(gap, xr_gap(evaluate(joint, concat(x, y)), opt.add(evaluate(qs, x), evaluate(rt, y))));
      }
    }
    record(rep, gap, kLawTolerance);
  }
  return rep;
}

SuiteReport equivariance_suite(const LawOptions& opt) {
  SuiteReport rep{"equivariance"};
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng = trial_rng(opt.seed, 4, t);
    const std::size_t n = 2 + rng.index(2);
    std::vector<ThermostaticSystem> systems;
    std::vector<ConvexSpace> inputs;
    std::vector<std::function<State(Rng&)>> draws;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Source s = random_source(rng, 2);
      while (!s.positive) s = random_source(rng, 2);
      inputs.push_back(s.sys.space());
      systems.push_back(s.sys);
      draws.push_back(s.draw);
      total += s.sys.space().dim();
    }
    const MapRelation map = random_map(rng, product(inputs), true, 1 + rng.index(std::min<std::size_t>(total, 2)));
    const Operation op = make_operation(inputs, map.rel.target(), map.rel);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    const Permutation sigma(perm);
    const ThermostaticSystem plain = act(op, systems, opt.cfg);
    const ThermostaticSystem shuffled = act(permute_op(op, sigma), sigma.apply(systems), opt.cfg);
    double gap = 0.0;
    for (int k = 0; k < 3; ++k) {
      State x(static_cast<Eigen::Index>(total));
      Eigen::Index at = 0;
      for (const auto& d : draws) {
        const State part = d(rng);
        x.segment(at, part.size()) = part;
        at += part.size();
      }
      const State y = map.a * x;
      gap = std::max(gap, xr_gap(evaluate(plain, y), evaluate(shuffled, y)));
    }
    record(rep, gap, kLawTolerance);
  }
  return rep;
}

SuiteReport oracle_suite(const LawOptions& opt) {
  SuiteReport rep{"oracle_agreement"};
  SolverConfig grid_cfg = opt.cfg;
  grid_cfg.grid_resolution = opt.oracle_resolution;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng = trial_rng(opt.seed, 5, t);
    std::optional<ThermostaticSystem> sys;
    State y;
    switch (t % 8 == 0 ? 3 : t % 8 == 4 ? 4 : rng.index(3)) {
      case 0: {  // two tanks
        const ThermostaticSystem both = sum_systems(tank(rng.uniform(0.5, 3.0)), tank(rng.uniform(0.5, 3.0)));
        sys = pushforward(both, ConvexRelation::affine(both.space(), ConvexSpace::orthant(1),
                                                        {ConvexRelation::Row{{1, 1}, {-1}, 0.0, Sense::eq}}));
        y = make_state({rng.uniform(1.0, 10.0)});
        break;
      }
      case 1: {  // levels against a bath
        const std::size_t n = 1 + rng.index(2);
        std::vector<double> a;
        for (std::size_t i = 0; i <= n; ++i) a.push_back(rng.uniform(0.0, 3.0));
        a.push_back(1.0);
        const ThermostaticSystem both =
            sum_systems(ThermostaticSystem(ConvexSpace::simplex(n), EntropyFn::shannon(n)),
                        ThermostaticSystem(ConvexSpace::real_line(1), EntropyFn::heat_bath(rng.uniform(0.5, 3.0))));
        sys = pushforward(both, ConvexRelation::affine(both.space(), ConvexSpace::point(),
                                                        {ConvexRelation::Row{a, {}, 0.0, Sense::eq}}));
        y = State(0);
        break;
      }
      case 2: {  // distribution with a linear bonus, one mean pinned
        const std::size_t n = 1 + rng.index(2);
        std::vector<double> w, b;
        for (std::size_t i = 0; i <= n; ++i) {
          w.push_back(rng.uniform(-1.0, 1.0));
          b.push_back(rng.uniform(0.0, 2.0));
        }
        const ThermostaticSystem dist(ConvexSpace::simplex(n), EntropyFn::shannon(n));
        const ThermostaticSystem bonus(ConvexSpace::simplex(n), EntropyFn::affine(w, 0.0));
        const ConvexSpace in = product(ConvexSpace::simplex(n), ConvexSpace::simplex(n));
        std::vector<ConvexRelation::Row> rows;
        for (std::size_t i = 0; i <= n; ++i) {
          std::vector<double> a(2 * (n + 1), 0.0);
          a[i] = 1.0;
          a[n + 1 + i] = -1.0;
          if (i < n) rows.push_back({a, {0.0}, 0.0, Sense::eq});
        }
        std::vector<double> mean(2 * (n + 1), 0.0);
        std::copy(b.begin(), b.end(), mean.begin());
        rows.push_back({mean, {-1.0}, 0.0, Sense::eq});
        sys = pushforward(sum_systems(dist, bonus), ConvexRelation::affine(in, ConvexSpace::real_line(1), rows));
        State p(static_cast<Eigen::Index>(n + 1));
        for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = rng.exponential() + 0.2;
        p /= p.sum();
        y = make_state({Eigen::Map<const Vector>(b.data(), p.size()).dot(p)});
        break;
      }
      case 3:  // +inf
        sys = pushforward(tank(rng.uniform(0.5, 3.0)), ConvexRelation::full(ConvexSpace::orthant(1), ConvexSpace::point()));
        y = State(0);
        break;
      default:  // -inf
        sys = pushforward(tank(rng.uniform(0.5, 3.0)),
                          ConvexRelation::graph(ConvexSpace::orthant(1), ConvexSpace::real_line(1),
                                                AffineMap{Matrix::Identity(1, 1), Vector::Zero(1)}));
        y = make_state({-rng.uniform(0.1, 3.0)});
        break;
    }
    const auto& pf = std::get<EntropyFn::Pushforward>(sys->entropy().variant());
    double gap = kInf, bound = 0.0;
    if (contains(pf.relation->target(), y)) {
      const ConstraintSet cs = fiber(*pf.relation, y);
      const MaxResult engine = maximize(pf.inner->entropy(), cs, opt.cfg);
      const GridSearch grid = grid_search(pf.inner->entropy(), cs, grid_cfg);
      gap = xr_gap(engine.value, grid.value);
      bound = 2.0 * grid.spacing * grid.lipschitz + 1e-9;
    } else {
      gap = xr_gap(solve_at(*sys, y, opt.cfg).value, ExtReal::neg_inf());
    }
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap <= bound)
      ++rep.passed;
    else
      ++rep.failed;
  }
  return rep;
}

std::vector<SuiteReport> run_laws(const LawOptions& opt) {
  return {convex_axiom_suite(opt), functoriality_suite(opt), laxator_suite(opt), equivariance_suite(opt),
          oracle_suite(opt)};
}

std::string format_reports(const std::vector<SuiteReport>& reports) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %8s %8s  %s\n", "suite", "passed", "failed", "worst_gap");
  out << line;
  for (const auto& r : reports) {
    const std::string gap = std::isinf(r.worst_gap) ? "+inf" : [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", r.worst_gap);
      return std::string(buf);
    }();
    std::snprintf(line, sizeof line, "%-18s %8zu %8zu  %s\n", r.name.c_str(), r.passed, r.failed, gap.c_str());
    out << line;
  }
  return out.str();
}

ConcavityReport check_concavity(const ConvexSpace& space, const std::function<ExtReal(const State&)>& f,
                                const BoundingBox& region, std::uint64_t seed, std::size_t triples, double tol) {
  ConcavityReport rep;
  const auto pts = sample(space, region, seed, 2 * triples);
  Rng rng(seed ^ 0xC0FFEEull);
  for (std::size_t i = 0; i < triples; ++i) {
    const State &x = pts[2 * i], &y = pts[2 * i + 1];
    const double lam = rng.uniform();
    const ExtReal mixed = f(combine(space, lam, x, y));
    const ExtReal chord = xr_combine(lam, f(x), f(y));
    ++rep.triples;
    if (chord.is_neg_inf()) continue;
    if (mixed.is_neg_inf() || (chord.is_pos_inf() && !mixed.is_pos_inf())) {
      ++rep.violations;
      rep.worst_excess = kInf;
      continue;
    }
    if (!mixed.is_finite() || !chord.is_finite()) continue;
    const double excess = chord.value() - mixed.value();
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (excess > tol) ++rep.violations;
  }
  return rep;
}

ConcavityReport check_concavity(const ThermostaticSystem& sys, const BoundingBox& region, std::uint64_t seed,
                                std::size_t triples, double tol) {
  return check_concavity(
      sys.space(), [&](const State& x) { return evaluate(sys, x); }, region, seed, triples, tol);
}

}  // namespace entroad
