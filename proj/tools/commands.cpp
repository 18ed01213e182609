#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "entroad/errors.hpp"
#include "entroad/laws.hpp"
#include "entroad/optimize.hpp"
#include "entroad/parallel.hpp"

namespace entroad::cli {

namespace {

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) throw ValidationError(what + ": not a finite number: '" + text + "'");
  return v;
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : to_string(ExtReal::pos_inf()); }

// One evaluated point: entropy, status, argmax; errors become the status.
struct Row {
  std::string value = "-inf";
  std::string status;
  std::vector<std::string> argmax;
  bool failed = false;
  std::string message;
};

Row solve_row(const ThermostaticSystem& sys, const State& y, const SolverConfig& cfg, std::size_t argmax_dim) {
  Row row;
  row.argmax.assign(argmax_dim, "");
  try {
    const MaxResult r = solve_at(sys, y, cfg);
    row.value = to_string(r.value);
    row.status = to_string(r.status);
    if (r.argmax && static_cast<std::size_t>(r.argmax->size()) == argmax_dim) {
      for (std::size_t i = 0; i < argmax_dim; ++i) row.argmax[i] = format_double((*r.argmax)[static_cast<Eigen::Index>(i)]);
    }
  } catch (const ConvergenceError& e) {
    row.failed = true;
    row.status = "error";
    row.value = std::isfinite(e.best_value()) ? format_double(e.best_value()) : "-inf";
    row.message = e.what();
  } catch (const DomainError& e) {
    row.failed = true;
    row.status = "error";
    row.message = e.what();
  }
  return row;
}

std::vector<std::string> header(const Document& doc) {
  std::vector<std::string> h = coordinate_labels(output_space(doc), "y");
  h.push_back("entropy");
  h.push_back("status");
  for (auto& l : argmax_labels(doc)) h.push_back(l);
  return h;
}

int emit(const Document& doc, const std::vector<State>& points, Format fmt, std::ostream& out, std::ostream& err) {
  const ThermostaticSystem sys = build_composed(doc);
  const std::size_t argmax_dim = argmax_space(doc).dim();
  const std::vector<Row> results = parallel_map(
      points.size(), [&](std::size_t i) { return solve_row(sys, points[i], doc.solver, argmax_dim); }, thread_count());
  std::vector<std::vector<std::string>> rows{header(doc)};
  bool failed = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<std::string> r;
    for (Eigen::Index k = 0; k < points[i].size(); ++k) r.push_back(format_double(points[i][k]));
    r.push_back(results[i].value);
    r.push_back(results[i].status);
    r.insert(r.end(), results[i].argmax.begin(), results[i].argmax.end());
    rows.push_back(std::move(r));
    if (results[i].failed) {
      failed = true;
      err << "query " << i << ": " << results[i].message << "\n";
    }
  }
  write_rows(rows, fmt, out);
  return failed ? kSolverFailure : kOk;
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "table") return Format::table;
  throw ValidationError("--format: expected csv or table, got '" + text + "'");
}

std::vector<double> Axis::values() const {
  std::vector<double> v;
  for (std::size_t i = 0; i < steps; ++i)
    v.push_back(steps == 1 ? lo : i + 1 == steps ? hi : lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(steps - 1));
  return v;
}

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("--axis '" + spec + "': expected name=lo:hi:steps");
  Axis a;
  a.name = spec.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream rest(spec.substr(eq + 1));
  for (std::string p; std::getline(rest, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ValidationError("--axis '" + spec + "': expected name=lo:hi:steps");
  a.lo = parse_double(parts[0], "--axis " + a.name);
  a.hi = parse_double(parts[1], "--axis " + a.name);
  const double steps = parse_double(parts[2], "--axis " + a.name);
  if (steps < 0 || steps != std::floor(steps) || steps > 1e7)
    throw ValidationError("--axis " + a.name + ": steps must be a nonnegative integer");
  a.steps = static_cast<std::size_t>(steps);
  return a;
}

void write_rows(const std::vector<std::vector<std::string>>& rows, Format fmt, std::ostream& out) {
  if (fmt == Format::csv) {
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      line += std::string(width[i] - r[i].size(), ' ') + r[i];
    }
    out << line << "\n";
  }
}

int cmd_eval(const Document& doc, Format fmt, std::ostream& out, std::ostream& err) {
  return emit(doc, doc.queries, fmt, out, err);
}

int cmd_sweep(const Document& doc, const std::vector<Axis>& axes, Format fmt, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> labels = coordinate_labels(output_space(doc), "y");
  std::vector<std::size_t> slot;
  for (const auto& a : axes) {
    const auto it = std::find(labels.begin(), labels.end(), a.name);
    if (it == labels.end()) throw ValidationError("--axis " + a.name + ": not a target coordinate");
    const auto k = static_cast<std::size_t>(it - labels.begin());
    if (std::find(slot.begin(), slot.end(), k) != slot.end()) throw ValidationError("--axis " + a.name + ": repeated");
    slot.push_back(k);
  }
  State base = State::Zero(static_cast<Eigen::Index>(labels.size()));
  if (!doc.queries.empty()) {
    base = doc.queries.front();
  } else if (slot.size() != labels.size()) {
    throw ValidationError("sweep: axes must cover every target coordinate when the document has no query");
  }
  // Row-major: the first axis varies slowest.
  std::vector<State> points;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.steps;
  if (axes.empty()) total = 0;
  std::vector<std::vector<double>> vals;
  for (const auto& a : axes) vals.push_back(a.values());
  for (std::size_t idx = 0; idx < total; ++idx) {
    State p = base;
    std::size_t rem = idx;
    for (std::size_t j = axes.size(); j-- > 0;) {
      p[static_cast<Eigen::Index>(slot[j])] = vals[j][rem % axes[j].steps];
      rem /= axes[j].steps;
    }
    points.push_back(std::move(p));
  }
  return emit(doc, points, fmt, out, err);
}

int cmd_laws(std::uint64_t seed, std::size_t trials, Format fmt, std::ostream& out) {
  if (trials == 0) throw ValidationError("laws: --trials must be at least 1");
  LawOptions opt;
  opt.seed = seed;
  opt.trials = trials;
  const std::vector<SuiteReport> reports = run_laws(opt);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.failed == 0;
  if (fmt == Format::table) {
    out << format_reports(reports);
  } else {
    std::vector<std::vector<std::string>> rows{{"suite", "passed", "failed", "worst_gap"}};
    for (const auto& r : reports)
      rows.push_back({r.name, std::to_string(r.passed), std::to_string(r.failed), cell(r.worst_gap)});
    write_rows(rows, fmt, out);
  }
  return ok ? kOk : kBreach;
}

namespace {

std::string vec_cell(const State& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

}  // namespace

int cmd_catalog_run(const std::string& name, const CatalogParams& params, Format fmt, std::ostream& out,
                    std::ostream& err) {
  std::vector<CatalogRow> rows;
  try {
    if (name == "microcanonical") {
      std::vector<double> energies{1, 2, 2, 3}, extra{5};
      for (const auto& [k, v] : params) {
        if (k != "H" && k != "U") throw ValidationError("catalog microcanonical: unknown parameter '" + k + "'");
        std::vector<double>& dst = k == "H" ? energies : extra;
        dst.clear();
        std::stringstream ss(v);
        for (std::string p; std::getline(ss, p, ',');) dst.push_back(parse_double(p, "catalog microcanonical: " + k));
      }
      rows = run_microcanonical(energies, extra);
    } else {
      rows = run_entry(make_entry(name, params));
    }
  } catch (const ConvergenceError& e) {
    err << "catalog " << name << ": " << e.what() << "\n";
    return kSolverFailure;
  }
  std::vector<std::vector<std::string>> table{{"query", "reference", "engine", "gap", "argmax_gap", "status", "pass"}};
  bool ok = true;
  for (const auto& r : rows) {
    ok = ok && r.pass;
    table.push_back({vec_cell(r.query), to_string(r.reference.value), to_string(r.engine.value), cell(r.value_gap),
                     r.argmax_gap ? cell(*r.argmax_gap) : "", to_string(r.engine.status), r.pass ? "yes" : "no"});
  }
  write_rows(table, fmt, out);
  return ok ? kOk : kBreach;
}

int cmd_catalog_list(std::ostream& out) {
  for (const auto& n : catalog_names()) out << n << "\n";
  return kOk;
}

}  // namespace entroad::cli
