#pragma once

// Subcommands of the entroad front end. Each writes its report to `out`,
// diagnostics to `err`, and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entroad/catalog.hpp"
#include "entroad/document.hpp"

namespace entroad::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kSolverFailure = 2, kBreach = 3 };

enum class Format { csv, table };

Format parse_format(const std::string& text);

/// name=lo:hi:steps; steps points from lo to hi inclusive (lo alone when
/// steps is 1, nothing when 0).
struct Axis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;

  std::vector<double> values() const;
};

Axis parse_axis(const std::string& spec);

int cmd_eval(const Document& doc, Format fmt, std::ostream& out, std::ostream& err);
int cmd_sweep(const Document& doc, const std::vector<Axis>& axes, Format fmt, std::ostream& out, std::ostream& err);
int cmd_laws(std::uint64_t seed, std::size_t trials, Format fmt, std::ostream& out);
int cmd_catalog_run(const std::string& name, const CatalogParams& params, Format fmt, std::ostream& out,
                    std::ostream& err);
int cmd_catalog_list(std::ostream& out);

/// Rows of cells rendered as CSV or as a right-aligned table.
void write_rows(const std::vector<std::vector<std::string>>& rows, Format fmt, std::ostream& out);

}  // namespace entroad::cli
