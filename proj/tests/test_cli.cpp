#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "awb/cli.hpp"
#include "awb/errors.hpp"
#include "awb/serialize.hpp"

using namespace awb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(AWB_FIXTURES) + "/" + name; }

Json load(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Json::parse(ss.str());
}

Json without_config(Json j) {
  j.erase("config");
  return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("documented examples") {
  auto r = run({"schreier", "member", "--alpha", "1", "--set", "2,3"});
  CHECK(r.code == 0);
  CHECK(r.json()["member"] == true);
  CHECK(r.json()["schema"] == kSchema);

  r = run({"schreier", "member", "--alpha", "1", "--set", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.json()["member"] == false);

  r = run({"norm", "eval", "--model", "tsirelson", "--vec", "3:1,4:1,5:1"});
  CHECK(r.code == 0);
  CHECK(r.json()["norm"] == "3/2");

  r = run({"block", "verify", fixture("singleton_bad.json")});
  CHECK(r.code == cli::kMathFail);
  auto v = r.json()["verdict"];
  CHECK(v["result"] == "2");
  CHECK(v["witness"] == Json::array({7}));

  r = run({"block", "verify", fixture("average_k6.json")});
  CHECK(r.code == 0);
  r = run({"block", "verify", "--no-prune", fixture("average_k6.json")});
  CHECK(r.code == 0);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"schreier", "member", "--alpha", "1"}).code == cli::kUsage);
  CHECK(run({"schreier", "member", "--alpha", "w+", "--set", "2"}).code == cli::kUsage);
  CHECK(run({"schreier", "enum", "--alpha", "1", "--window", "5:3"}).code == cli::kUsage);
  CHECK(run({"schreier", "enum", "--alpha", "1", "--window", "3-5"}).code == cli::kUsage);
  CHECK(run({"--budget", "bogus=1", "schreier", "member", "--alpha", "1", "--set", "2"}).code == cli::kUsage);
  CHECK(run({"--budget", "max_results", "schreier", "member", "--alpha", "1", "--set", "2"}).code == cli::kUsage);
  CHECK(run({"block", "verify", fixture("no_such_file.json")}).code == cli::kUsage);

  // Budget exhaustion and search failures.
  CHECK(run({"--budget", "max_results=3", "schreier", "enum", "--alpha", "1", "--window", "1:8"}).code ==
        cli::kResource);
  CHECK(run({"block", "find0", "--window", "3:60", "--eps", "1/2", "--mode", "strict"}).code == cli::kResource);
  CHECK(run({"block", "find0", "--window", "1:2", "--eps", "1/2"}).code == cli::kResource);
  auto r = run({"msep", "run", "--family", fixture("family_s1_3_12.json"), "--alpha", "1", "--window", "3:12"});
  CHECK(r.code == cli::kResource);
  CHECK(r.out.empty());

  // Small windows do not expose the Schreier model's failure of its declared constant.
  r = run({"norm", "a1-search", "--model", "schreier", "--window", "2:7", "--grid", "1"});
  CHECK(r.code == 0);
  CHECK(r.json()["worst_ratio"] == "3/5");
  CHECK(r.json()["violates_declared"] == false);
  r = run({"norm", "a1-search", "--model", "tsirelson", "--window", "2:7", "--grid", "1/2,1"});
  CHECK(r.code == 0);

  CHECK(run({"--help"}).code == 0);
  CHECK(run({"msep", "--help"}).code == 0);
}

TEST_CASE("global options after the subcommand") {
  auto a = run({"--budget", "max_results=3", "schreier", "enum", "--alpha", "1", "--window", "1:8"});
  auto b = run({"schreier", "enum", "--alpha", "1", "--window", "1:8", "--budget", "max_results=3"});
  CHECK(a.code == cli::kResource);
  CHECK(b.code == cli::kResource);
}

TEST_CASE("deterministic output") {
  std::vector<std::vector<std::string>> cmds{
      {"schreier", "enum", "--alpha", "w", "--window", "2:9", "--maximal"},
      {"schreier", "threshold", "--xi", "1", "--eta", "2", "--width", "3", "--max-n", "10"},
      {"schreier", "restrict", "--alpha", "2", "--window", "1:8", "--to", "2,4,6,8"},
      {"norm", "kpoints", "--model", "tsirelson", "--window", "2:6"},
      {"block", "find0", "--model", "schreier", "--window", "3:60", "--eps", "1/2"},
      {"block", "tau", "--model", "tsirelson", "--window", "3:14"},
      {"block", "restrict", fixture("average_k6.json"), "--to", "6,7,8,9,10"},
      {"chain", "verify", fixture("chain_s1.json")},
      {"chain", "check-l3", fixture("chain_s1.json"), "--set", "2"},
      {"msep", "run", "--family", fixture("family_s1_3_12.json"), "--alpha", "1", "--window", "3:12",
       "--diagnostic"},
      {"ordinal", "compare", "--a", "w^w", "--b", "w^3*2+1"},
  };
  for (const auto& c : cmds) {
    auto r1 = run(c), r2 = run(c);
    CHECK(r1.code == r2.code);
    CHECK(r1.out == r2.out);
    CHECK_FALSE(r1.out.empty());
  }
  // Thread count does not change results.
  auto one = run({"--budget", "threads=1", "block", "verify", fixture("find0_s1_3_60.json")});
  auto two = run({"--budget", "threads=2", "block", "verify", fixture("find0_s1_3_60.json")});
  CHECK(without_config(one.json()) == without_config(two.json()));
  auto bad1 = run({"--budget", "threads=1", "block", "verify", fixture("singleton_bad.json")});
  auto bad2 = run({"--budget", "threads=3", "block", "verify", fixture("singleton_bad.json")});
  CHECK(without_config(bad1.json()) == without_config(bad2.json()));
}

TEST_CASE("artifact header") {
  auto r = run({"ordinal", "classify", "--alpha", "w*2"});
  auto j = r.json();
  CHECK(j["command"] == "ordinal classify");
  CHECK(j["config"]["args"] == Json::array({"ordinal", "classify", "--alpha", "w*2"}));
  CHECK(j["kind"] == "limit");
  CHECK(r.out.back() == '\n');
}

TEST_CASE("atomic output file") {
  fs::path dir = fs::temp_directory_path() / "awb_cli_test";
  fs::create_directories(dir);
  fs::path target = dir / "out.json";
  fs::remove(target);
  auto r = run({"--out", target.string(), "schreier", "member", "--alpha", "2", "--set", "3,4,5"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(fs::exists(target));
  CHECK_FALSE(fs::exists(dir / "out.json.tmp"));
  CHECK(load(target.string())["member"] == true);

  // Failures leave an existing file alone.
  r = run({"--out", target.string(), "schreier", "member", "--alpha", "2"});
  CHECK(r.code == cli::kUsage);
  CHECK(load(target.string())["member"] == true);

  r = run({"--out", (dir / "missing" / "x.json").string(), "ordinal", "classify", "--alpha", "1"});
  CHECK(r.code == cli::kResource);
  fs::remove_all(dir);
}

TEST_CASE("stored artifacts round-trip") {
  for (const char* f : {"average_k6.json", "singleton_bad.json", "find0_s1_3_60.json", "assembled_s2.json"}) {
    CAPTURE(f);
    auto c = cert_from_json(load(fixture(f)));
    Json j = to_json(c);
    CHECK(to_json(cert_from_json(j)) == j);
  }
  for (const char* f : {"chain_s1.json", "chain_s2.json"}) {
    CAPTURE(f);
    auto cs = chain_search_from_json(load(fixture(f)));
    Json j = to_json(cs);
    CHECK(to_json(chain_search_from_json(j)) == j);
    Json c = to_json(cs.cert);
    CHECK(to_json(chain_from_json(c)) == c);
  }
  auto fam = family_from_json(load(fixture("family_s1_3_12.json")));
  CHECK(fam.members.size() == 134);
  Json j = to_json(fam);
  CHECK(to_json(family_from_json(j)) == j);

  // Malformed inputs are parse errors.
  CHECK_THROWS_AS(cert_from_json(parse_json("{\"type\":\"alpha_eps\"}")), ParseError);
  CHECK_THROWS_AS(parse_json("{"), ParseError);
  Json bad = load(fixture("average_k6.json"));
  bad["u"] = "6:x";
  CHECK_THROWS_AS(cert_from_json(bad), ParseError);
  bad = load(fixture("average_k6.json"));
  bad["model"]["kind"] = "banach";
  CHECK_THROWS_AS(cert_from_json(bad), ParseError);
}

TEST_CASE("stored certificates still verify") {
  CHECK(run({"block", "verify", fixture("find0_s1_3_60.json")}).code == 0);
  CHECK(run({"block", "verify", fixture("assembled_s2.json")}).code == 0);
  CHECK(run({"chain", "verify", fixture("chain_s1.json")}).code == 0);
  CHECK(run({"chain", "check-l4", fixture("chain_s2.json")}).code == 0);
  CHECK(run({"block", "restrict", fixture("average_k6.json"), "--to", "6,8,10"}).code == cli::kUsage);
  CHECK(run({"chain", "check-l3", fixture("chain_s1.json"), "--set", "3,4"}).code == cli::kUsage);
  auto r = run({"chain", "assemble", fixture("chain_s1.json"), "--eps", "9/10"});
  CHECK(r.code == cli::kMathFail);
  CHECK(r.json()["verdict"]["result"] == "1");
}

}  // TEST_SUITE
