#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqcrys/io.hpp"

using namespace sqcrys;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
int run(const std::string& args) {
  const std::string cmd = std::string(SQCRYS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}
fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("sqcrys_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}
}  // namespace

TEST_SUITE("io") {

TEST_CASE("non-finite numbers") {
  CHECK(num(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::isinf(num_from(json("-inf"))));
  CHECK(std::isnan(num_from(json("nan"))));
  CHECK(num_from(num(1.25)) == 1.25);
}

TEST_CASE("potential round trip") {
  for (const char* name : {"hard-sqrt2", "exv3", "exv3-truncated"}) {
    Potential p = potential_preset(name);
    Potential q = potential_from_json(json::parse(to_json(p).dump()));
    for (double r : {1.0, 1.1, 1.3, 1.5, 2.2, 4.0}) {
      INFO(name << " r=" << r);
      CHECK(q.value(r).value() == p.value(r).value());
    }
    CHECK(q.params().alpha == p.params().alpha);
    CHECK(to_json(q) == to_json(p));
  }
  CHECK_THROWS_AS(potential_preset("nope"), ParameterError);
  CHECK_THROWS(potential_from_json(json{{"builder", "exv3"}, {"tail", "sideways"}}));
}

TEST_CASE("configuration round trip") {
  Configuration X{{{0.1, -2.5}, {1.0 / 3.0, 7.0}, {1e-17, 3.0}}};
  Configuration Y = configuration_from_json(to_json(X));
  Configuration Z = configuration_from_csv(configuration_to_csv(X));
  REQUIRE(Y.size() == 3);
  REQUIRE(Z.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(Y.points[i] == X.points[i]);
    CHECK(Z.points[i] == X.points[i]);
  }
}

TEST_CASE("spec hash is order independent") {
  json a{{"x", 1}, {"y", "z"}}, b{{"y", "z"}, {"x", 1}};
  CHECK(spec_hash(a) == spec_hash(b));
  CHECK(spec_hash(a) != spec_hash(json{{"x", 2}, {"y", "z"}}));
  CHECK(hex64(spec_hash(a)).size() == 16);
}

}

TEST_SUITE("cli") {

TEST_CASE("check-potential from a file") {
  auto d = scratch();
  std::ofstream(d / "v.json") << to_json(potential_preset("exv3-truncated")).dump();
  REQUIRE(run("check-potential --file " + (d / "v.json").string() + " --constants c=0.1,cp=0.05 --out " +
              (d / "c.json").string()) == 0);
  json j = json::parse(slurp(d / "c.json"));
  CHECK(j.contains("spec_hash"));
  CHECK(j["result"]["conditions"].size() >= 7);
  json meta = json::parse(slurp(d / "c.json.meta.json"));
  CHECK(meta["seed"] == 1);
  CHECK(meta.contains("wall_time_s"));
  CHECK(meta["spec_hash"] == j["spec_hash"]);
}

TEST_CASE("crystal-bounds CSV equals the library report") {
  auto d = scratch();
  REQUIRE(run("crystal-bounds --potential hard-sqrt2 --N 4,9,16,25,36 --alpha 0.05 --format csv --out " +
              (d / "b.csv").string()) == 0);
  std::string csv = slurp(d / "b.csv");
  Potential h = potential_preset("hard-sqrt2");
  DeformationParams dp = h.params();
  dp.alpha = 0.05;
  h.set_params(dp);
  BoundsOptions bo;
  bo.search.seed = 1;
  const std::string lib = bounds_csv(crystal_bounds_report(h, {4, 9, 16, 25, 36}, bo));
  CHECK(csv.substr(csv.find('\n') + 1) == lib);
  CHECK(lib.find("excess") != std::string::npos);
}

TEST_CASE("lattice-decomp verdict") {
  auto d = scratch();
  REQUIRE(run("lattice-decomp --radius 20 --verify --out " + (d / "l.json").string()) == 0);
  json j = json::parse(slurp(d / "l.json"));
  CHECK(j["result"]["cover"]["verdict"] == "exact");
  REQUIRE(run("lattice-decomp --radius 20 --format csv --out " + (d / "l.csv").string()) == 0);
  CHECK(slurp(d / "l.csv").find("r2") != std::string::npos);
}

TEST_CASE("schema and usage errors exit non-zero") {
  auto d = scratch();
  std::ofstream(d / "bad.json") << "{\"builder\": \"nonsense\"}";
  CHECK(run("check-potential --file " + (d / "bad.json").string()) != 0);
  std::ofstream(d / "broken.json") << "{not json";
  CHECK(run("energy --potential hard-sqrt2 --config " + (d / "broken.json").string()) != 0);
  CHECK(run("spectrum --potential hard-sqrt2 --format xml") != 0);
  CHECK(run("no-such-command") != 0);
}

TEST_CASE("energy on a config file") {
  auto d = scratch();
  Configuration X{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  std::ofstream(d / "x.csv") << configuration_to_csv(X);
  REQUIRE(run("energy --potential hard-sqrt2 --e4 --config " + (d / "x.csv").string() + " --out " +
              (d / "e.json").string()) == 0);
  json j = json::parse(slurp(d / "e.json"));
  CHECK(num_from(j["result"]["total"]) == -6.0);
  CHECK(num_from(j["result"]["E4"]) == -4.0);
}

TEST_CASE("render-report aggregates runs and lists corrupt files") {
  auto d = scratch() / "runs";
  fs::remove_all(d);
  fs::create_directories(d);
  for (int N : {4, 9, 16, 25, 36})
    REQUIRE(run("crystal-bounds --potential hard-sqrt2 --N " + std::to_string(N) + " --out " +
                (d / ("b" + std::to_string(N) + ".json")).string()) == 0);
  std::ofstream(d / "junk.json") << "{oops";
  auto out = d.parent_path() / "report.json";
  REQUIRE(run("render-report --dir " + d.string() + " --out " + out.string()) == 0);
  json j = json::parse(slurp(out));
  CHECK(j["result"]["problems"].size() == 1);
  std::string series = j["result"]["excess_series_csv"];
  CHECK(std::count(series.begin(), series.end(), '\n') == 6);
  auto empty = d.parent_path() / "empty";
  fs::create_directories(empty);
  REQUIRE(run("render-report --dir " + empty.string() + " --out " + out.string()) == 0);
  CHECK(json::parse(slurp(out))["result"].contains("warning"));
}

}
