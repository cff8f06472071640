#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bmt/cli.hpp"
#include "bmt/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bmt;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bmt_cli_test_" + name);
}

}  // namespace

TEST_CASE("kernel subcommand") {
  Result r = run({"kernel", "--word", "4,1,3,4,1,4", "--graph", "complete:5"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "ker: {{1,4,6},{2,5},{3}}"));
  CHECK(contains(r.out, "equal=true"));

  r = run({"kernel", "--word", "1,8,8,4,1,5,8", "--family", "complete:8", "--format", "json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["ker"] == "{{1,5},{2,3,7},{4},{6}}");
  CHECK(j["equal"] == true);
  CHECK(Digraph::parse_text(j["relabeled_ncg"].get<std::string>()) ==
        Digraph({1, 4, 5, 8}, {{1, 8}, {8, 1}, {4, 1}, {4, 8}, {5, 8}}));

  r = run({"kernel", "--word", "1,2,1", "--graph", "empty:2"});
  CHECK(contains(r.out, "ker_G: {{1},{2},{3}}"));
  CHECK(contains(r.out, "equal=false"));
}

TEST_CASE("moment subcommand") {
  Result r = run({"moment", "--graph", "complete:2", "--word", "1,2,1,2", "--marginal", "bernoulli"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "moment: 1"));
  CHECK(contains(r.out, "ker_G: {{1,3},{2,4}}"));
  r = run({"moment", "--graph", "empty:2", "--word", "1,1,1", "--marginal", "skewed", "--format", "json"});
  json j = json::parse(r.out);
  CHECK(j["moment"]["num"] == -3);
  CHECK(j["moment"]["den"] == 2);
  CHECK(j["moment"]["decimal"] == doctest::Approx(-1.5));
}

TEST_CASE("law subcommand") {
  Result r = run({"law", "--name", "arcsine", "--upto", "6"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "m4 = 3/2"));
  CHECK(contains(r.out, "m6 = 5/2"));
  r = run({"law", "--name", "arcsine", "--upto", "4", "--decimal"});
  CHECK(contains(r.out, "m4 = 1.5"));
  r = run({"law", "--name", "poisson", "--upto", "5", "--format", "json"});
  json j = json::parse(r.out);
  CHECK(j["moments"][5]["moment"]["num"] == 52);
}

TEST_CASE("graph-gen subcommand") {
  Result r = run({"graph-gen", "counterexample:3"});
  CHECK(r.code == 0);
  CHECK(Digraph::parse_text(r.out).num_vertices() == 8);
  CHECK(run({"graph-gen", "empty:4"}).out == "vertices: 1 2 3 4\n");
  CHECK(Digraph::parse_text(run({"graph-gen", "turan:6,3"}).out).num_edges() == 24);
  CHECK(Digraph::parse_text(run({"graph-gen", "complete:N", "--N", "3"}).out) == generate(family::Complete{3}));
  CHECK(run({"graph-gen", "complete:N"}).code == 1);
}

TEST_CASE("graph files round-trip through the command line") {
  for (const char* spec : {"counterexample:4", "turan:7,3", "poset:4,1<3,2<3,2<4", "bipartite:2,3", "star:5"}) {
    Result r = run({"graph-gen", spec});
    REQUIRE(r.code == 0);
    auto path = temp_path("graph.txt");
    std::ofstream(path) << r.out;
    Digraph loaded = cli::load_graph(path.string());
    CHECK(loaded == generate(FamilyTemplate::parse(spec).instantiate()));
    CHECK(Digraph::parse_text(loaded.to_text()) == loaded);
    Result k = run({"kernel", "--word", "1,2,1,2", "--graph", path.string()});
    CHECK(k.code == 0);
    std::filesystem::remove(path);
  }
}

TEST_CASE("clt subcommand") {
  Result r = run({"clt", "--family", "empty:N", "--N", "2,4,8", "--moments", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  for (const auto& row : j["rows"]) {
    CHECK(row["reference"]["num"] == 1);
    CHECK(row["reference"]["den"] == 1);
    CHECK(row["exact"]["num"] == 1);
  }
  r = run({"clt", "--family", "complete:N", "--N", "2,4", "--moments", "3,4", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "N,vertices,m,exact,leading,reference"));
  CHECK(contains(r.out, "4,4,4,5/2,9/4,3"));
  r = run({"clt", "--family", "complete:N", "--N", "2", "--moments", "3", "--marginal", "skewed", "--format", "json"});
  j = json::parse(r.out);
  CHECK(j["rows"][0]["exact"]["raw"]["num"] == -3);
  CHECK(j["rows"][0]["exact"]["decimal"] == doctest::Approx(-1.5 / std::sqrt(2.0)));
}

TEST_CASE("poisson subcommand") {
  Result r = run({"poisson", "--family", "complete:N", "--lambda", "1", "--N", "4,8", "--moments", "1..3", "--format",
                  "json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["rows"].size() == 6);
  CHECK(j["rows"][0]["exact"]["num"] == 1);
  CHECK(j["rows"][2]["reference"]["num"] == 5);
}

TEST_CASE("operator-verify subcommand") {
  Result r = run({"operator-verify", "--graph", "total:3", "--max-len", "6"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "violations: 0"));
  r = run({"operator-verify", "--graph", "counterexample:3", "--max-len", "5", "--seed", "3", "--format", "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["violations"] == 0);
  CHECK(j["exhaustive"] == false);
}

TEST_CASE("output files and inferred formats") {
  auto path = temp_path("table.json");
  Result r = run({"clt", "--family", "total:N", "--N", "4", "--moments", "4", "--out", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  json j = json::parse(in);
  CHECK(j["rows"][0]["reference"]["num"] == 3);
  CHECK(j["rows"][0]["reference"]["den"] == 2);
  std::filesystem::remove(path);
  auto csv = temp_path("table.csv");
  CHECK(run({"clt", "--family", "total:N", "--N", "4", "--moments", "4", "--out", csv.string()}).code == 0);
  std::ifstream cin(csv);
  std::string header;
  std::getline(cin, header);
  CHECK(header.rfind("N,", 0) == 0);
  std::filesystem::remove(csv);
}

TEST_CASE("exit codes") {
  CHECK(run({"kernel", "--word", "1", "--nope"}).code == 1);
  CHECK(run({"kernel"}).code == 1);
  CHECK(run({"nosuch"}).code == 1);
  CHECK(run({}).code == 1);
  Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "clt"));
  CHECK(run({"clt", "--help"}).code == 0);
  Result bad = run({"moment", "--graph", "complete:2", "--word", "1,5"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "error:"));
  CHECK(run({"moment", "--graph", "nosuch:2", "--word", "1"}).code == 1);
  CHECK(run({"kernel", "--word", "x", "--graph", "complete:2"}).code == 1);
  Result cap = run({"law", "--name", "arcsine", "--upto", "30"});
  CHECK(cap.code == 2);
  CHECK(contains(cap.err, "refused:"));
  CHECK(run({"clt", "--family", "empty:N", "--N", "512", "--moments", "8"}).code == 2);
  CHECK(run({"graph-gen", "counterexample:12"}).code == 2);
  CHECK(run({"operator-verify", "--graph", "empty:13", "--max-len", "2"}).code == 2);
  CHECK(run({"clt", "--family", "empty:N", "--N", "4", "--moments", "4", "--format", "xml"}).code == 1);
}

TEST_CASE("integer lists") {
  CHECK(cli::parse_int_list("4,8,16") == std::vector<int>{4, 8, 16});
  CHECK(cli::parse_int_list("1..4") == std::vector<int>{1, 2, 3, 4});
  CHECK(cli::parse_int_list("2,4..6") == std::vector<int>{2, 4, 5, 6});
  CHECK_THROWS_AS(cli::parse_int_list("4..1"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_int_list("a"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_int_list(""), InvalidInput);
}

TEST_CASE("selftest subcommand") {
  Result r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "PASS"));
  CHECK_FALSE(contains(r.out, "FAIL"));
}
