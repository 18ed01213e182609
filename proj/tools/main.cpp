#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "entroad/errors.hpp"

using namespace entroad;
using namespace entroad::cli;

int main(int argc, char** argv) {
  CLI::App app{"Entropy maximization over compositions of thermostatic systems"};
  app.require_subcommand(1);
  std::string format = "csv";
  bool dump = false;
  app.add_option("--format", format, "Output format: csv or table")->check(CLI::IsMember({"csv", "table"}));
  app.add_flag("--dump-normalized", dump, "Print the loaded document in canonical form instead of running it");

  std::string doc_path;
  auto* eval = app.add_subcommand("eval", "Evaluate the composed system at every query point");
  eval->add_option("document", doc_path, "JSON document")->required();

  std::vector<std::string> axis_specs;
  auto* sweep = app.add_subcommand("sweep", "Evaluate the composed system on a grid of target points");
  sweep->add_option("document", doc_path, "JSON document")->required();
  sweep->add_option("--axis", axis_specs, "name=lo:hi:steps, repeatable; the first axis varies slowest");

  std::uint64_t seed = 0;
  std::size_t trials = 100;
  auto* laws = app.add_subcommand("laws", "Run the randomized law suites");
  laws->add_option("--seed", seed, "Seed for every suite");
  laws->add_option("--trials", trials, "Instances per suite");

  auto* catalog = app.add_subcommand("catalog", "Worked examples with closed-form references");
  catalog->require_subcommand(1);
  std::string entry;
  std::vector<std::string> param_specs;
  auto* run = catalog->add_subcommand("run", "Compare an entry against its reference");
  run->add_option("name", entry, "Entry name")->required();
  run->add_option("--param", param_specs, "k=v, repeatable; lists are comma separated");
  catalog->add_subcommand("list", "List entry names");

  for (auto* sub : {eval, sweep, laws, run}) {
    sub->add_option("--format", format, "Output format: csv or table")->check(CLI::IsMember({"csv", "table"}));
    sub->add_flag("--dump-normalized", dump, "Print the loaded document in canonical form instead of running it");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    const Format fmt = parse_format(format);
    if (*eval || *sweep) {
      const Document doc = load_document_file(doc_path);
      if (dump) {
        std::cout << dump_normalized(doc);
        return kOk;
      }
      if (*eval) return cmd_eval(doc, fmt, std::cout, std::cerr);
      std::vector<Axis> axes;
      for (const auto& s : axis_specs) axes.push_back(parse_axis(s));
      return cmd_sweep(doc, axes, fmt, std::cout, std::cerr);
    }
    if (*laws) return cmd_laws(seed, trials, fmt, std::cout);
    if (*run) {
      CatalogParams params;
      for (const auto& p : param_specs) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("--param '" + p + "': expected k=v");
        params[p.substr(0, eq)] = p.substr(eq + 1);
      }
      return cmd_catalog_run(entry, params, fmt, std::cout, std::cerr);
    }
    return cmd_catalog_list(std::cout);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
}
