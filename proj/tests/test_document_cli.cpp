#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"
#include "entroad/document.hpp"
#include "entroad/errors.hpp"

using namespace entroad;

namespace {

const char* kTanks = R"({
  "spaces": [{"name": "energy", "kind": "orthant", "n": 1, "labels": ["U"]}],
  "systems": [
    {"name": "small", "space": "energy", "entropy": {"kind": "log_tank", "C": 1.0}},
    {"name": "large", "space": "energy", "entropy": {"kind": "log_tank", "C": 2.0}}
  ],
  "relations": [{
    "name": "total", "source": {"kind": "product", "factors": ["energy", "energy"]},
    "target": "energy", "eq": [{"a": [1, 1], "b": [-1], "c": 0.0}]
  }],
  "compose": {"op": "total", "children": ["small", "large"]},
  "queries": [[3], [-1]]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

std::string validation_message(const std::string& text) {
  try {
    load_document(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Document, LoadsAndComposes) {
  const Document doc = load_document(kTanks);
  EXPECT_EQ(doc.systems.size(), 2u);
  EXPECT_EQ(doc.queries.size(), 2u);
  EXPECT_EQ(output_space(doc).dim(), 1u);
  EXPECT_EQ(argmax_labels(doc), (std::vector<std::string>{"small.U", "large.U"}));
  const ThermostaticSystem s = build_composed(doc);
  EXPECT_NEAR(evaluate(s, make_state({3.0})).value(), 2.0 * std::log(2.0), 1e-6);
}

TEST(Document, ErrorsNameTheDeclaration) {
  std::string msg = validation_message(replace(kTanks, "\"space\": \"energy\", \"entropy\": {\"kind\": \"log_tank\", \"C\": 2.0}",
                                               "\"space\": \"enrgy\", \"entropy\": {\"kind\": \"log_tank\", \"C\": 2.0}"));
  EXPECT_NE(msg.find("systems[1]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("large"), std::string::npos) << msg;
  EXPECT_NE(msg.find("enrgy"), std::string::npos) << msg;

  msg = validation_message(replace(kTanks, "\"kind\": \"log_tank\", \"C\": 1.0", "\"kind\": \"log_tnak\", \"C\": 1.0"));
  EXPECT_NE(msg.find("systems[0]"), std::string::npos) << msg;

  msg = validation_message(replace(kTanks, "\"children\": [\"small\", \"large\"]", "\"children\": [\"small\"]"));
  EXPECT_FALSE(msg.empty());

  EXPECT_FALSE(validation_message("{not json").empty());
  EXPECT_FALSE(validation_message(replace(kTanks, "[3], [-1]", "[3, 4]")).empty());
}

TEST(Document, NormalizedDumpRoundTrips) {
  const Document doc = load_document(kTanks);
  const std::string once = dump_normalized(doc);
  const std::string twice = dump_normalized(load_document(once));
  EXPECT_EQ(once, twice);

  std::ostringstream a, b, err;
  cli::cmd_eval(doc, cli::Format::csv, a, err);
  cli::cmd_eval(load_document(once), cli::Format::csv, b, err);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Cli, EvalReportsEveryQuery) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_eval(load_document(kTanks), cli::Format::csv, out, err), cli::kOk);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "U,entropy,status,small.U,large.U");
  EXPECT_NE(text.find("\n3,"), std::string::npos);
  EXPECT_NE(text.find("\n-1,-inf,infeasible,,"), std::string::npos);
}

TEST(Cli, ParseAxis) {
  const cli::Axis a = cli::parse_axis("U=1:10:10");
  EXPECT_EQ(a.name, "U");
  EXPECT_EQ(a.values().size(), 10u);
  EXPECT_EQ(a.values().front(), 1.0);
  EXPECT_EQ(a.values().back(), 10.0);
  EXPECT_EQ(cli::parse_axis("U=2:5:1").values(), std::vector<double>{2.0});
  EXPECT_TRUE(cli::parse_axis("U=2:5:0").values().empty());
  EXPECT_THROW(cli::parse_axis("U=1:2"), ValidationError);
  EXPECT_THROW(cli::parse_axis("1:2:3"), ValidationError);
  EXPECT_THROW(cli::parse_axis("U=a:2:3"), ValidationError);
}

TEST(Cli, SweepOrderAndEmptyAxes) {
  const Document doc = load_document(kTanks);
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_sweep(doc, {cli::parse_axis("U=1:3:3")}, cli::Format::csv, out, err), cli::kOk);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> firsts;
  while (std::getline(lines, line)) firsts.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(firsts, (std::vector<std::string>{"U", "1", "2", "3"}));

  std::ostringstream empty;
  EXPECT_EQ(cli::cmd_sweep(doc, {cli::parse_axis("U=1:3:0")}, cli::Format::csv, empty, err), cli::kOk);
  EXPECT_EQ(empty.str(), "U,entropy,status,small.U,large.U\n");

  std::ostringstream bad;
  EXPECT_THROW(cli::cmd_sweep(doc, {cli::parse_axis("V=1:3:3")}, cli::Format::csv, bad, err), ValidationError);
}

TEST(Cli, CatalogExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_catalog_run("two_tanks", {}, cli::Format::csv, out, err), cli::kOk);
  EXPECT_THROW(cli::cmd_catalog_run("nope", {}, cli::Format::csv, out, err), ValidationError);
  std::ostringstream list;
  EXPECT_EQ(cli::cmd_catalog_list(list), cli::kOk);
  EXPECT_NE(list.str().find("microcanonical"), std::string::npos);
}

TEST(Cli, FormatsAndTables) {
  EXPECT_EQ(cli::parse_format("csv"), cli::Format::csv);
  EXPECT_EQ(cli::parse_format("table"), cli::Format::table);
  EXPECT_THROW(cli::parse_format("xml"), ValidationError);
  std::ostringstream out;
  cli::write_rows({{"a", "bb"}, {"ccc", "d"}}, cli::Format::table, out);
  EXPECT_EQ(out.str(), "  a  bb\nccc   d\n");
}
