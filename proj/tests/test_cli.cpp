#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "propint/cli.hpp"

using propint::cli::execute;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cells.back() += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cells.back() += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.emplace_back();
      } else {
        cells.back() += ch;
      }
    }
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("propint_test_" + name);
}

}  // namespace

TEST_CASE("ci prints the quadratic interval") {
  const auto r = execute({"ci", "--n", "10", "--k", "2", "--level", "0.95", "--method", "quadratic"});
  REQUIRE(r.exit_code == 0);
  CHECK_THAT(r.stdout_payload, ContainsSubstring("0.03305782"));
  CHECK_THAT(r.stdout_payload, ContainsSubstring("0.5109173"));
}

TEST_CASE("ci lists every method by default and can clip") {
  const auto r = execute({"ci", "--n", "10", "--k", "0", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_payload);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0][0] == "method");
  CHECK(rows[1][0] == "wald");
  CHECK(rows[1][7] == "true");  // degenerate

  const auto clipped = execute({"ci", "--n", "10", "--k", "0", "--method", "agresti_coull",
                                "--clip", "--format", "csv"});
  const auto crow = parse_csv(clipped.stdout_payload);
  CHECK(crow[1][4] == "0");
  CHECK(crow[1][8] == "true");  // overshoot flag is unaffected by clipping
}

TEST_CASE("coverage --exact") {
  const auto r = execute({"coverage", "--method", "wald", "--n", "10", "--p", "0.2", "--level",
                          "0.95", "--exact"});
  REQUIRE(r.exit_code == 0);
  CHECK_THAT(r.stdout_payload, ContainsSubstring("0.8862564"));
}

TEST_CASE("coverage over lists and grids") {
  const auto r = execute({"coverage", "--methods", "wald,quadratic", "--n", "10,20", "--p-grid",
                          "0:1:0.25", "--levels", "0.9,0.95", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  CHECK(parse_csv(r.stdout_payload).size() == 1 + 2 * 2 * 2 * 5);
  CHECK(execute({"coverage", "--n", "10", "--p", "0.5", "--p-grid", "0:1:0.5"}).exit_code == 1);
  CHECK(execute({"coverage", "--n", "10"}).exit_code == 1);
  CHECK(execute({"coverage", "--n-range", "5:7", "--p", "0.5", "--format", "csv"}).exit_code == 0);
}

TEST_CASE("simulated coverage is byte-identical across runs and honors PROPINT_SEED") {
  const std::vector<std::string> args{"coverage", "--method", "quadratic", "--n", "10", "--p",
                                      "0.2", "--simulate", "--reps", "2000", "--format", "csv"};
  ::unsetenv("PROPINT_SEED");
  const auto a = execute(args);
  const auto b = execute(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.stdout_payload == b.stdout_payload);
  CHECK_THAT(a.stdout_payload, ContainsSubstring(",20240501,"));

  ::setenv("PROPINT_SEED", "77", 1);
  const auto c = execute(args);
  CHECK_THAT(c.stdout_payload, ContainsSubstring(",77,"));
  auto explicit_seed = args;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "5"});
  CHECK_THAT(execute(explicit_seed).stdout_payload, ContainsSubstring(",5,"));
  ::setenv("PROPINT_SEED", "abc", 1);
  CHECK(execute(args).exit_code == 1);
  ::unsetenv("PROPINT_SEED");
}

TEST_CASE("expected-me and margin-profile") {
  const auto r = execute({"expected-me", "--method", "quadratic", "--n", "10", "--p", "0",
                          "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  CHECK_THAT(r.stdout_payload, ContainsSubstring("0.11997925524718"));

  const auto m = execute({"margin-profile", "--method", "wald", "--n", "100", "--pq", "0.25",
                          "--format", "csv"});
  REQUIRE(m.exit_code == 0);
  CHECK_THAT(m.stdout_payload, ContainsSubstring("0.0979981992270"));
  CHECK(execute({"margin-profile", "--method", "wilson", "--n", "10", "--pq", "0.1"}).exit_code == 2);
  CHECK(execute({"margin-profile", "--n", "5:6", "--pq-grid", "0:0.25:0.05"}).exit_code == 1);
  const auto g = execute({"margin-profile", "--n-range", "5:6", "--pq-grid", "0:0.25:0.05",
                          "--format", "csv"});
  CHECK(parse_csv(g.stdout_payload).size() == 1 + 2 * 2 * 6);
}

TEST_CASE("recommend") {
  const auto r = execute({"recommend", "--n", "8", "--p", "0.1", "--level", "0.95"});
  REQUIRE(r.exit_code == 0);
  CHECK_THAT(r.stdout_payload, ContainsSubstring("quadratic"));
  CHECK_THAT(r.stdout_payload, ContainsSubstring("s3-extremely-small"));
  CHECK_THAT(r.stdout_payload, ContainsSubstring("extrapolation"));
  const auto snapped = execute({"recommend", "--n", "8", "--p", "0.1", "--level", "0.93"});
  CHECK_THAT(snapped.stdout_payload, ContainsSubstring("mapped to studied level 0.95"));
}

TEST_CASE("stat with counts and with raw bits") {
  const auto r = execute({"stat", "--n", "2", "--k", "2", "--p", "0.5", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  CHECK(parse_csv(r.stdout_payload)[1][3] == "2");
  const auto b = execute({"stat", "--bits", "1,1", "--p", "0.5", "--format", "json"});
  REQUIRE(b.exit_code == 0);
  const auto j = nlohmann::json::parse(b.stdout_payload);
  CHECK(j[0]["closed_form"].get<double>() == Catch::Approx(2.0));
  CHECK(j[0]["pairwise_form"].get<double>() == Catch::Approx(2.0));
  CHECK(execute({"stat", "--n", "2", "--k", "1", "--p", "1"}).exit_code == 2);
  CHECK(execute({"stat", "--bits", "1,2", "--p", "0.5"}).exit_code == 1);
}

TEST_CASE("rules reports six predicates") {
  const auto r = execute({"rules", "--n", "30", "--k", "3", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_payload);
  REQUIRE(rows.size() == 7);
  // n p_hat q_hat = 2.7
  CHECK(rows[5][0] == "np_hat*q_hat");
  CHECK(std::stod(rows[5][1]) == Catch::Approx(2.7));
  CHECK(rows[5][3] == "false");
  const auto planned = execute({"rules", "--n", "30", "--k", "3", "--p", "0.5", "--format", "csv"});
  const auto prow = parse_csv(planned.stdout_payload);
  CHECK(prow[1][1] == "15");
  CHECK(prow[1][3] == "true");
}

TEST_CASE("analyze reads a CSV file") {
  const auto fixture = temp_file("fixture.csv");
  REQUIRE(execute({"fixture", "--output", fixture.string()}).exit_code == 0);
  const auto r = execute({"analyze", "--input", fixture.string(), "--filter",
                          "sex=female,region=3,arm=treatment", "--filter", "sex=nobody",
                          "--methods", "wald,quadratic", "--format", "json"});
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.stdout_payload);
  REQUIRE(j.size() == 4);
  CHECK(j[0]["n"] == 90);
  CHECK(j[0]["k"] == 3);
  CHECK(j[0]["lower"].get<double>() < 0.0);
  CHECK(j[0]["overshoot"] == true);
  CHECK(j[1]["lower"].get<double>() >= 0.0);
  CHECK(j[2]["error"] == "empty subgroup");
  CHECK(j[2]["lower"].is_null());

  CHECK(execute({"analyze", "--input", "/nonexistent/file.csv"}).exit_code == 2);
  CHECK(execute({"analyze", "--input", fixture.string(), "--filter", "color=red"}).exit_code == 2);
  std::filesystem::remove(fixture);
}

TEST_CASE("csv and json encode the same records") {
  for (const std::vector<std::string>& base :
       {std::vector<std::string>{"ci", "--n", "17", "--k", "4"},
        std::vector<std::string>{"coverage", "--n", "10,30", "--p-grid", "0:1:0.1"},
        std::vector<std::string>{"table1"}}) {
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    const auto csv = parse_csv(execute(csv_args).stdout_payload);
    const auto json = nlohmann::json::parse(execute(json_args).stdout_payload);
    REQUIRE(csv.size() == json.size() + 1);
    for (std::size_t i = 0; i < json.size(); ++i) {
      for (std::size_t c = 0; c < csv[0].size(); ++c) {
        const auto& v = json[i][csv[0][c]];
        const auto& cell = csv[i + 1][c];
        if (v.is_null()) {
          CHECK(cell.empty());
        } else if (v.is_string()) {
          CHECK(cell == v.get<std::string>());
        } else if (v.is_boolean()) {
          CHECK(cell == (v.get<bool>() ? "true" : "false"));
        } else {
          CHECK(std::stod(cell) == v.get<double>());
        }
      }
    }
  }
}

TEST_CASE("figure emission") {
  const auto r = execute({"figure", "--id", "coverage-vs-n", "--level", "0.95"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_payload);
  CHECK(rows[0] == std::vector<std::string>{"method", "level", "n", "p", "coverage", "expected_me"});
  CHECK(rows.size() == 1 + 4 * 96 * 4);
  CHECK(execute({"figure", "--id", "coverage-vs-n", "--level", "0.95"}).stdout_payload ==
        r.stdout_payload);
  CHECK(execute({"figure", "--id", "nope"}).exit_code == 1);
  CHECK(execute({"figure", "--id", "me-vs-n", "--level", "0.8"}).exit_code == 2);
  const auto margins = execute({"figure", "--id", "margins-vs-n"});
  CHECK(parse_csv(margins.stdout_payload)[0] ==
        std::vector<std::string>{"method", "level", "n", "pq", "margin"});
}

TEST_CASE("limit and table1") {
  const auto l = execute({"limit", "--n", "2000", "--p", "0.3", "--format", "json"});
  REQUIRE(l.exit_code == 0);
  CHECK(nlohmann::json::parse(l.stdout_payload)[0]["sup_distance"].get<double>() < 0.05);

  const auto t = execute({"table1", "--format", "csv"});
  REQUIRE(t.exit_code == 0);
  CHECK(parse_csv(t.stdout_payload).size() == 1 + 2 * 12 * 4);
  const auto text = execute({"table1", "--grid", "text", "--levels", "0.95", "--format", "csv"});
  const auto rows = parse_csv(text.stdout_payload);
  CHECK(rows.size() == 1 + 12 * 4);
  CHECK(rows[1][6].empty());  // no printed value for the text grid
  CHECK(execute({"table1", "--grid", "other"}).exit_code == 1);
}

TEST_CASE("exit codes") {
  CHECK(execute({}).exit_code == 1);
  CHECK(execute({"frobnicate"}).exit_code == 1);
  CHECK(execute({"ci", "--n", "10", "--k", "2", "--bogus"}).exit_code == 1);
  CHECK(execute({"ci", "--n", "10"}).exit_code == 1);
  const auto bad = execute({"ci", "--n", "10", "--k", "11"});
  CHECK(bad.exit_code == 2);
  CHECK_THAT(bad.stderr_payload, ContainsSubstring("exceed"));
  CHECK(execute({"ci", "--n", "10", "--k", "2", "--level", "1.5"}).exit_code == 2);
  CHECK(execute({"ci", "--n", "10", "--k", "2", "--method", "jeffreys"}).exit_code == 2);
  CHECK(execute({"ci", "--n", "1", "--k", "0", "--level", "0.5", "--method", "quadratic"}).exit_code == 2);
  CHECK(execute({"--help"}).exit_code == 0);
  CHECK(execute({"ci", "--n", "10", "--k", "2", "--format", "xml"}).exit_code == 1);
}

TEST_CASE("--output writes the payload to a file") {
  const auto path = temp_file("out.csv");
  const auto r = execute({"ci", "--n", "10", "--k", "2", "--format", "csv", "--output", path.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_payload.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == execute({"ci", "--n", "10", "--k", "2", "--format", "csv"}).stdout_payload);
  std::filesystem::remove(path);
}
