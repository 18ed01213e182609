#include "entroad/document.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "entroad/errors.hpp"
#include "entroad/optimize.hpp"

namespace entroad {

using json = nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ValidationError(where + ": " + what); }

// ---------------------------------------------------------------- reading

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      const ExtReal x = parse_ext_real(v.get<std::string>());
      if (x.is_finite()) return x.value();
    } catch (const DomainError&) {
    }
  }
  fail(where, "expected a finite number");
}

ExtReal ext_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_ext_real(v.get<std::string>());
    } catch (const DomainError&) {
    }
  }
  fail(where, "expected a number, \"+inf\" or \"-inf\"");
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(where, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void expect_length(const std::vector<double>& v, std::size_t n, const std::string& where) {
  if (v.size() != n) fail(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
}

std::string name_of(const json& decl, const std::string& where) {
  const json& n = field(decl, "name", where);
  if (!n.is_string() || n.get<std::string>().empty()) fail(where, "name must be a nonempty string");
  return n.get<std::string>();
}

// Accepts both {"name": ..., ...} and {"<kind>": {"name": ..., ...}}.
const json& unwrap(const json& decl, const char* wrapper) {
  if (decl.is_object() && decl.size() == 1 && decl.contains(wrapper)) return decl.at(wrapper);
  return decl;
}

struct Loader {
  Document doc;
  std::map<std::string, ConvexSpace> spaces;
  std::map<std::string, std::size_t> systems;
  std::map<std::string, std::size_t> relations;

  ConvexSpace space(const json& v, const std::string& where) {
    if (v.is_string()) {
      const auto it = spaces.find(v.get<std::string>());
      if (it == spaces.end()) fail(where, "unknown space '" + v.get<std::string>() + "'");
      return it->second;
    }
    if (!v.is_object()) fail(where, "expected a space name or object");
    const json& kind_v = field(v, "kind", where);
    if (!kind_v.is_string()) fail(where, "kind must be a string");
    const std::string kind = kind_v.get<std::string>();
    ConvexSpace s;
    try {
      if (kind == "simplex") {
        s = ConvexSpace::simplex(count(field(v, "n", where), where + ".n"));
      } else if (kind == "orthant") {
        s = ConvexSpace::orthant(count(field(v, "n", where), where + ".n"));
      } else if (kind == "real" || kind == "real_line") {
        s = ConvexSpace::real_line(v.contains("n") ? count(v.at("n"), where + ".n") : 1);
      } else if (kind == "point") {
        s = ConvexSpace::point();
      } else if (kind == "density") {
        s = density_space(count(field(v, "d", where), where + ".d"));
      } else if (kind == "polyhedron") {
        const std::size_t dim = count(field(v, "dim", where), where + ".dim");
        std::vector<Hyperplane> eq;
        std::vector<HalfSpace> ineq;
        const json empty = json::array();
        const json& eqs = v.contains("eq") ? v.at("eq") : empty;
        const json& ins = v.contains("ineq") ? v.at("ineq") : empty;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
          const std::string w = where + ".eq[" + std::to_string(i) + "]";
          Hyperplane h{numbers(field(eqs[i], "a", w), w + ".a"), number_or(eqs[i], "rhs", 0.0, w)};
          expect_length(h.a, dim, w + ".a");
          eq.push_back(std::move(h));
        }
        for (std::size_t i = 0; i < ins.size(); ++i) {
          const std::string w = where + ".ineq[" + std::to_string(i) + "]";
          HalfSpace h{numbers(field(ins[i], "a", w), w + ".a"), number_or(ins[i], "rhs", 0.0, w),
                      ins[i].value("strict", false)};
          expect_length(h.a, dim, w + ".a");
          ineq.push_back(std::move(h));
        }
        s = ConvexSpace::polyhedron(dim, std::move(eq), std::move(ineq));
      } else if (kind == "product") {
        const json& fs = field(v, "factors", where);
        if (!fs.is_array()) fail(where + ".factors", "expected an array");
        std::vector<ConvexSpace> factors;
        for (std::size_t i = 0; i < fs.size(); ++i)
          factors.push_back(space(fs[i], where + ".factors[" + std::to_string(i) + "]"));
        s = product(factors);
      } else {
        fail(where, "unknown space kind '" + kind + "'");
      }
      if (v.contains("labels")) {
        const json& l = v.at("labels");
        if (!l.is_array()) fail(where + ".labels", "expected an array of strings");
        std::vector<std::string> labels;
        for (const auto& x : l) {
          if (!x.is_string()) fail(where + ".labels", "expected an array of strings");
          labels.push_back(x.get<std::string>());
        }
        if (labels.size() != s.dim())
          fail(where + ".labels", std::to_string(labels.size()) + " labels for dimension " + std::to_string(s.dim()));
        s = s.with_labels(std::move(labels));
      }
    } catch (const DomainError& e) {
      fail(where, e.what());
    }
    return s;
  }

  EntropyFn entropy(const json& v, std::size_t dim, const std::string& where) {
    const json& kind_v = field(v, "kind", where);
    if (!kind_v.is_string()) fail(where, "kind must be a string");
    const std::string kind = kind_v.get<std::string>();
    try {
      if (kind == "log_tank") return EntropyFn::log_tank(number(field(v, "C", where), where + ".C"));
      if (kind == "sackur_tetrode")
        return EntropyFn::sackur_tetrode(number_or(v, "mass", 1.0, where), number_or(v, "planck", 1.0, where));
      if (kind == "heat_bath") return EntropyFn::heat_bath(number(field(v, "T", where), where + ".T"));
      if (kind == "shannon") {
        if (v.contains("n")) return EntropyFn::shannon(count(v.at("n"), where + ".n"));
        if (dim == 0) fail(where, "shannon needs \"n\" here");
        return EntropyFn::shannon(dim - 1);
      }
      if (kind == "von_neumann") {
        std::size_t d = 0;
        while (d * d < dim) ++d;
        return EntropyFn::von_neumann(v.contains("d") ? count(v.at("d"), where + ".d") : d);
      }
      if (kind == "affine") {
        const std::vector<double> a = numbers(field(v, "a", where), where + ".a");
        return EntropyFn::affine(a, number_or(v, "b", 0.0, where));
      }
      if (kind == "constant") {
        return EntropyFn::constant(ext_number(field(v, "value", where), where + ".value"),
                                   v.contains("dim") ? count(v.at("dim"), where + ".dim") : dim);
      }
      if (kind == "measurement") {
        const json& ms = field(v, "maps", where);
        if (!ms.is_array()) fail(where + ".maps", "expected an array of maps");
        std::vector<StochasticMap> maps;
        for (std::size_t i = 0; i < ms.size(); ++i) {
          const std::string w = where + ".maps[" + std::to_string(i) + "]";
          if (!ms[i].is_array()) fail(w, "expected an array of columns");
          std::vector<std::vector<double>> cols;
          for (std::size_t j = 0; j < ms[i].size(); ++j) cols.push_back(numbers(ms[i][j], w + "[" + std::to_string(j) + "]"));
          maps.push_back(StochasticMap::from_columns(cols));
        }
        return EntropyFn::measurement(std::move(maps));
      }
      if (kind == "sum") {
        const json& ts = field(v, "terms", where);
        if (!ts.is_array() || ts.empty()) fail(where + ".terms", "expected a nonempty array");
        std::optional<EntropyFn> total;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          EntropyFn t = entropy(ts[i], 0, where + ".terms[" + std::to_string(i) + "]");
          total = total ? EntropyFn::sum(*total, t) : t;
        }
        return *total;
      }
    } catch (const DomainError& e) {
      fail(where, e.what());
    }
    fail(where, "unknown entropy kind '" + kind + "'");
  }

  ConvexRelation::Row row(const json& v, std::size_t nx, std::size_t ny, bool inequality, const std::string& where) {
    ConvexRelation::Row r;
    r.a = v.contains("a") ? numbers(v.at("a"), where + ".a") : std::vector<double>(nx, 0.0);
    r.b = v.contains("b") ? numbers(v.at("b"), where + ".b") : std::vector<double>(ny, 0.0);
    expect_length(r.a, nx, where + ".a");
    expect_length(r.b, ny, where + ".b");
    r.c = number_or(v, "c", 0.0, where);
    if (!inequality) return r;
    const std::string sense = v.value("sense", std::string("le"));
    if (sense == "le" || sense == "<=") {
      r.sense = Sense::le;
    } else if (sense == "lt" || sense == "<") {
      r.sense = Sense::lt;
    } else if (sense == "ge" || sense == ">=" || sense == "gt" || sense == ">") {
      for (double& x : r.a) x = -x;
      for (double& x : r.b) x = -x;
      r.c = -r.c;
      r.sense = sense == "gt" || sense == ">" ? Sense::lt : Sense::le;
    } else {
      fail(where + ".sense", "expected le, lt, ge or gt");
    }
    return r;
  }

  ConvexRelation relation(const json& v, const std::string& where) {
    const std::string kind = v.value("kind", std::string("affine"));
    if (kind == "identity") {
      const ConvexSpace s = space(v.contains("space") ? v.at("space") : field(v, "source", where), where + ".space");
      return identity(s);
    }
    const ConvexSpace src = space(field(v, "source", where), where + ".source");
    const ConvexSpace tgt = space(field(v, "target", where), where + ".target");
    try {
      if (kind == "full") return ConvexRelation::full(src, tgt);
      if (kind == "graph") {
        const json& m = field(v, "matrix", where);
        if (!m.is_array()) fail(where + ".matrix", "expected an array of rows");
        if (m.size() != tgt.dim())
          fail(where + ".matrix", "expected " + std::to_string(tgt.dim()) + " rows, got " + std::to_string(m.size()));
        Matrix a(static_cast<Eigen::Index>(tgt.dim()), static_cast<Eigen::Index>(src.dim()));
        for (std::size_t i = 0; i < m.size(); ++i) {
          const std::string w = where + ".matrix[" + std::to_string(i) + "]";
          const std::vector<double> r = numbers(m[i], w);
          expect_length(r, src.dim(), w);
          for (std::size_t j = 0; j < r.size(); ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[j];
        }
        Vector off = Vector::Zero(a.rows());
        if (v.contains("offset")) {
          const std::vector<double> o = numbers(v.at("offset"), where + ".offset");
          expect_length(o, tgt.dim(), where + ".offset");
          for (std::size_t i = 0; i < o.size(); ++i) off[static_cast<Eigen::Index>(i)] = o[i];
        }
        return ConvexRelation::graph(src, tgt, AffineMap{a, off});
      }
      if (kind == "affine") {
        std::vector<ConvexRelation::Row> rows;
        for (const char* key : {"eq", "ineq"}) {
          if (!v.contains(key)) continue;
          const json& rs = v.at(key);
          if (!rs.is_array()) fail(where + "." + key, "expected an array of rows");
          for (std::size_t i = 0; i < rs.size(); ++i)
            rows.push_back(row(rs[i], src.dim(), tgt.dim(), std::string(key) == "ineq",
                               where + "." + key + "[" + std::to_string(i) + "]"));
        }
        return ConvexRelation::affine(src, tgt, std::move(rows));
      }
    } catch (const DomainError& e) {
      fail(where, e.what());
    }
    fail(where, "unknown relation kind '" + kind + "'");
  }

  ComposeNode node(const json& v, const std::string& where) {
    ComposeNode n;
    if (v.is_string()) {
      n.system = v.get<std::string>();
      if (!systems.count(n.system)) fail(where, "unknown system '" + n.system + "'");
      return n;
    }
    const json& body = unwrap(v, "compose");
    const json& op = field(body, "op", where);
    if (!op.is_string()) fail(where + ".op", "expected a relation name");
    n.relation = op.get<std::string>();
    if (!relations.count(n.relation)) fail(where + ".op", "unknown relation '" + n.relation + "'");
    const json& cs = field(body, "children", where);
    if (!cs.is_array()) fail(where + ".children", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) n.children.push_back(node(cs[i], where + ".children[" + std::to_string(i) + "]"));
    return n;
  }

  // Output space of a node; throws naming the node on a type mismatch.
  ConvexSpace check(const ComposeNode& n, const std::string& where) {
    if (!n.system.empty()) return doc.system(n.system).space();
    std::vector<ConvexSpace> inputs;
    for (std::size_t i = 0; i < n.children.size(); ++i)
      inputs.push_back(check(n.children[i], where + ".children[" + std::to_string(i) + "]"));
    const ConvexRelation& r = doc.relation(n.relation);
    const ConvexSpace in = product(inputs);
    if (!same_space(in, r.source())) {
      fail(where, "relation '" + n.relation + "' expects source " + r.source().describe() + " but its children give " +
                      in.describe());
    }
    return r.target();
  }

  void load(const json& root) {
    if (!root.is_object()) fail("document", "expected a JSON object");
    for (const auto& [key, _] : root.items()) {
      static const char* known[] = {"solver", "spaces", "systems", "relations", "compose", "queries"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) fail("document", "unknown field '" + key + "'");
    }
    if (root.contains("solver")) {
      const json& s = root.at("solver");
      SolverConfig& c = doc.solver;
      c.tol_value = number_or(s, "tol_value", c.tol_value, "solver");
      c.tol_membership = number_or(s, "tol_membership", c.tol_membership, "solver");
      c.unbounded_threshold = number_or(s, "unbounded_threshold", c.unbounded_threshold, "solver");
      if (s.contains("max_iters")) c.max_iters = count(s.at("max_iters"), "solver.max_iters");
      if (s.contains("grid_resolution")) c.grid_resolution = count(s.at("grid_resolution"), "solver.grid_resolution");
      if (s.contains("seed")) c.seed = count(s.at("seed"), "solver.seed");
      c.nested_pushforward = s.value("nested_pushforward", false);
      try {
        c.validate();
      } catch (const DomainError& e) {
        fail("solver", e.what());
      }
    }
    const json empty = json::array();
    auto list = [&](const char* key) -> const json& {
      if (!root.contains(key)) return empty;
      if (!root.at(key).is_array()) fail(key, "expected an array");
      return root.at(key);
    };

    const json& sp = list("spaces");
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const std::string w0 = "spaces[" + std::to_string(i) + "]";
      const json& d = unwrap(sp[i], "space");
      const std::string name = name_of(d, w0);
      const std::string w = w0 + " '" + name + "'";
      if (spaces.count(name)) fail(w, "duplicate space name");
      const ConvexSpace s = space(d, w);
      spaces.emplace(name, s);
      doc.spaces.emplace_back(name, s);
    }

    const json& sy = list("systems");
    for (std::size_t i = 0; i < sy.size(); ++i) {
      const std::string w0 = "systems[" + std::to_string(i) + "]";
      const json& d = unwrap(sy[i], "system");
      const std::string name = name_of(d, w0);
      const std::string w = w0 + " '" + name + "'";
      if (systems.count(name)) fail(w, "duplicate system name");
      const ConvexSpace s = space(field(d, "space", w), w + ".space");
      const EntropyFn f = entropy(field(d, "entropy", w), s.dim(), w + ".entropy");
      if (f.dim() != s.dim()) {
        fail(w, "entropy reads " + std::to_string(f.dim()) + " coordinates but the space has dimension " +
                    std::to_string(s.dim()));
      }
      systems.emplace(name, doc.systems.size());
      doc.systems.emplace_back(s, f, name);
    }

    const json& re = list("relations");
    for (std::size_t i = 0; i < re.size(); ++i) {
      const std::string w0 = "relations[" + std::to_string(i) + "]";
      const json& d = unwrap(re[i], "relation");
      const std::string name = name_of(d, w0);
      const std::string w = w0 + " '" + name + "'";
      if (relations.count(name)) fail(w, "duplicate relation name");
      relations.emplace(name, doc.relations.size());
      doc.relations.emplace_back(name, relation(d, w));
    }

    if (!root.contains("compose")) fail("compose", "missing composition tree");
    doc.compose = node(root.at("compose"), "compose");
    const ConvexSpace out = check(doc.compose, "compose");

    const json& qs = list("queries");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::string w = "queries[" + std::to_string(i) + "]";
      const json& q = qs[i].is_object() ? field(qs[i], "point", w) : qs[i];
      const std::vector<double> p = numbers(q, w);
      expect_length(p, out.dim(), w);
      doc.queries.push_back(Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size())));
    }
  }
};

// ---------------------------------------------------------------- writing

json ext_json(ExtReal x) {
  if (x.is_finite()) return x.value();
  return to_string(x);
}

json vec_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json space_json(const ConvexSpace& s) {
  json out = std::visit(
      overloaded{
          [](const ConvexSpace::Polyhedron& p) {
            json eq = json::array(), ineq = json::array();
            for (const auto& h : p.eq) eq.push_back({{"a", h.a}, {"rhs", h.rhs}});
            for (const auto& h : p.ineq) ineq.push_back({{"a", h.a}, {"rhs", h.rhs}, {"strict", h.strict}});
            return json{{"kind", "polyhedron"}, {"dim", p.dim}, {"eq", eq}, {"ineq", ineq}};
          },
          [](const ConvexSpace::Simplex& p) { return json{{"kind", "simplex"}, {"n", p.n}}; },
          [](const ConvexSpace::Orthant& p) { return json{{"kind", "orthant"}, {"n", p.n}}; },
          [](const ConvexSpace::RealLine& p) { return json{{"kind", "real"}, {"n", p.n}}; },
          [](const ConvexSpace::Singleton&) { return json{{"kind", "point"}}; },
          [](const ConvexSpace::Product& p) {
            return json{{"kind", "product"}, {"factors", {space_json(*p.left), space_json(*p.right)}}};
          },
      },
      s.variant());
  if (!s.labels().empty()) out["labels"] = s.labels();
  return out;
}

json entropy_json(const EntropyFn& f) {
  return std::visit(
      overloaded{
          [](const EntropyFn::LogTank& e) { return json{{"kind", "log_tank"}, {"C", e.capacity}}; },
          [](const EntropyFn::SackurTetrode& e) {
            return json{{"kind", "sackur_tetrode"}, {"mass", e.mass}, {"planck", e.planck}};
          },
          [](const EntropyFn::HeatBath& e) { return json{{"kind", "heat_bath"}, {"T", e.temperature}}; },
          [](const EntropyFn::Shannon& e) { return json{{"kind", "shannon"}, {"n", e.n}}; },
          [](const EntropyFn::VonNeumann& e) { return json{{"kind", "von_neumann"}, {"d", e.d}}; },
          [](const EntropyFn::Affine& e) { return json{{"kind", "affine"}, {"a", e.a}, {"b", e.b}}; },
          [](const EntropyFn::Measurement& e) {
            json maps = json::array();
            for (const auto& m : e.maps) maps.push_back(m.columns());
            return json{{"kind", "measurement"}, {"maps", maps}};
          },
          [](const EntropyFn::Sum& e) {
            json terms = json::array();
            std::function<void(const EntropyFn&)> flatten = [&](const EntropyFn& g) {
              if (const auto* s = std::get_if<EntropyFn::Sum>(&g.variant())) {
                flatten(*s->left);
                flatten(*s->right);
              } else {
                terms.push_back(entropy_json(g));
              }
            };
            flatten(*e.left);
            flatten(*e.right);
            return json{{"kind", "sum"}, {"terms", terms}};
          },
          [](const EntropyFn::Pushforward&) -> json {
            throw ValidationError("dump: pushforward entropies are not declarable");
          },
          [](const EntropyFn::Constant& e) {
            return json{{"kind", "constant"}, {"value", ext_json(e.value)}, {"dim", e.dim}};
          },
      },
      f.variant());
}

json relation_json(const ConvexRelation& r) {
  json out{{"source", space_json(r.source())}, {"target", space_json(r.target())}};
  std::visit(overloaded{
                 [&](const ConvexRelation::Affine& a) {
                   json eq = json::array(), ineq = json::array();
                   for (const auto& row : a.rows) {
                     json j{{"a", row.a}, {"b", row.b}, {"c", row.c}};
                     if (row.sense == Sense::eq) {
                       eq.push_back(j);
                     } else {
                       j["sense"] = row.sense == Sense::lt ? "lt" : "le";
                       ineq.push_back(j);
                     }
                   }
                   out["kind"] = "affine";
                   out["eq"] = eq;
                   out["ineq"] = ineq;
                 },
                 [&](const ConvexRelation::Full&) { out["kind"] = "full"; },
                 [&](const ConvexRelation::Graph& g) {
                   json m = json::array();
                   for (Eigen::Index i = 0; i < g.map.matrix.rows(); ++i) m.push_back(vec_json(g.map.matrix.row(i).transpose()));
                   out["kind"] = "graph";
                   out["matrix"] = m;
                   out["offset"] = vec_json(g.map.offset);
                 },
                 [&](const auto&) { throw ValidationError("dump: composite relations are not declarable"); },
             },
             r.body());
  return out;
}

json node_json(const ComposeNode& n) {
  if (!n.system.empty()) return n.system;
  json children = json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  return json{{"op", n.relation}, {"children", children}};
}

ThermostaticSystem build(const Document& doc, const ComposeNode& n) {
  if (!n.system.empty()) return doc.system(n.system);
  std::vector<ThermostaticSystem> kids;
  std::vector<ConvexSpace> inputs;
  for (const auto& c : n.children) {
    kids.push_back(build(doc, c));
    inputs.push_back(kids.back().space());
  }
  const ConvexRelation& r = doc.relation(n.relation);
  return act(make_operation(inputs, r.target(), r), kids, doc.solver);
}

}  // namespace

const ThermostaticSystem& Document::system(const std::string& name) const {
  for (const auto& s : systems)
    if (s.name() == name) return s;
  throw ValidationError("unknown system '" + name + "'");
}

const ConvexRelation& Document::relation(const std::string& name) const {
  for (const auto& [n, r] : relations)
    if (n == name) return r;
  throw ValidationError("unknown relation '" + name + "'");
}

Document load_document(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("document: malformed JSON: ") + e.what());
  }
  Loader loader;
  loader.load(root);
  return std::move(loader.doc);
}

Document load_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_document(buf.str());
}

std::string dump_normalized(const Document& doc) {
  const SolverConfig& c = doc.solver;
  json root;
  root["solver"] = {{"tol_value", c.tol_value},
                    {"tol_membership", c.tol_membership},
                    {"max_iters", c.max_iters},
                    {"unbounded_threshold", c.unbounded_threshold},
                    {"grid_resolution", c.grid_resolution},
                    {"seed", c.seed},
                    {"nested_pushforward", c.nested_pushforward}};
  root["spaces"] = json::array();
  for (const auto& [name, s] : doc.spaces) {
    json j = space_json(s);
    j["name"] = name;
    root["spaces"].push_back(j);
  }
  root["systems"] = json::array();
  for (const auto& s : doc.systems)
    root["systems"].push_back({{"name", s.name()}, {"space", space_json(s.space())}, {"entropy", entropy_json(s.entropy())}});
  root["relations"] = json::array();
  for (const auto& [name, r] : doc.relations) {
    json j = relation_json(r);
    j["name"] = name;
    root["relations"].push_back(j);
  }
  root["compose"] = node_json(doc.compose);
  root["queries"] = json::array();
  for (const auto& q : doc.queries) root["queries"].push_back({{"point", vec_json(q)}});
  return root.dump(2) + "\n";
}

ConvexSpace output_space(const Document& doc) {
  if (!doc.compose.system.empty()) return doc.system(doc.compose.system).space();
  return doc.relation(doc.compose.relation).target();
}

ConvexSpace argmax_space(const Document& doc) {
  if (!doc.compose.system.empty()) return doc.system(doc.compose.system).space();
  std::vector<ConvexSpace> inputs;
  for (const auto& c : doc.compose.children) inputs.push_back(build(doc, c).space());
  return product(inputs);
}

std::vector<std::string> argmax_labels(const Document& doc) {
  if (!doc.compose.system.empty()) return coordinate_labels(argmax_space(doc), "x");
  const auto& kids = doc.compose.children;
  std::vector<std::string> names;
  for (const auto& c : kids) names.push_back(c.system.empty() ? c.relation : c.system);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::string prefix = names[i];
    if (std::count(names.begin(), names.end(), names[i]) > 1) prefix += "[" + std::to_string(i) + "]";
    for (const auto& l : coordinate_labels(build(doc, kids[i]).space(), "x")) out.push_back(prefix + "." + l);
  }
  return out;
}

ThermostaticSystem build_composed(const Document& doc) { return build(doc, doc.compose); }

}  // namespace entroad
