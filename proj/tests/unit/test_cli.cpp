#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "imitodyn/commands.hpp"
#include "imitodyn/config.hpp"

using namespace imitodyn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  std::ostringstream log, err;
  Sandbox() {
    dir = fs::temp_directory_path() / ("imitodyn_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  fs::path file(const std::string& name, const std::string& text) {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
  CommandOptions opts(const fs::path& cfg, const std::string& out) {
    CommandOptions o;
    o.config = cfg;
    o.out = dir / out;
    o.log = &log;
    o.err = &err;
    return o;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTwoPhase = R"({
  "game": {"type": "builtin", "name": "example4"},
  "rule": {"type": "arctan", "K": 1},
  "topology": {"type": "complete", "n": 2500},
  "initial": {"x": [0.001, 0.999]},
  "sim": {"lambda": 1, "horizon": 20},
  "ensemble": {"runs": 3, "base_seed": 2017}
})";

} // namespace

TEST_CASE("config parsing") {
  auto cfg = parse_config(kTwoPhase, "two_phase.json");
  CHECK(cfg.game->id() == "example4");
  CHECK(cfg.runs == 3);
  CHECK(cfg.topology.nodes() == 2500);
  CHECK(cfg.initial_type(2500).n() == 2500);

  SUBCASE("errors carry a line number") {
    std::string bad = R"({
  "game": {"type": "builtin", "name": "example4"},
  "rule": {"type": "arctan", "K": -1},
  "topology": {"type": "complete", "n": 10},
  "initial": {"x": [0.5, 0.5]}
})";
    try {
      parse_config(bad, "bad.json");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("unknown keys rejected") {
    std::string s = kTwoPhase;
    s.insert(s.find("\"ensemble\""), "\"typo\": 1,\n  ");
    CHECK_THROWS_AS(parse_config(s, "x"), ConfigError);
  }
  SUBCASE("m mismatch between game and initial condition") {
    std::string s = kTwoPhase;
    s.replace(s.find("[0.001, 0.999]"), 14, "[0.2, 0.3, 0.5]");
    CHECK_THROWS_AS(parse_config(s, "x"), ConfigError);
  }
  SUBCASE("n mismatch between topology and counts") {
    std::string s = kTwoPhase;
    s.replace(s.find("\"x\": [0.001, 0.999]"), 19, "\"counts\": [5, 5]");
    CHECK_THROWS_AS(parse_config(s, "x"), ConfigError);
  }
  SUBCASE("off-simplex initial shares") {
    std::string s = kTwoPhase;
    s.replace(s.find("[0.001, 0.999]"), 14, "[0.5, 0.6]");
    CHECK_THROWS_AS(parse_config(s, "x"), ConfigError);
  }
  SUBCASE("replicator bounds derived from the game") {
    std::string s = kTwoPhase;
    s.replace(s.find("{\"type\": \"arctan\", \"K\": 1}"), 26, "{\"type\": \"replicator\", \"eps_margin\": 0.01}");
    auto c = parse_config(s, "x");
    CHECK(c.rule->id() == "replicator");
  }
}

TEST_CASE("simulate writes per-run CSVs and a summary, reproducibly") {
  Sandbox sb;
  auto cfg = sb.file("two_phase.json", kTwoPhase);
  REQUIRE(cmd_simulate(sb.opts(cfg, "a")) == 0);
  REQUIRE(cmd_simulate(sb.opts(cfg, "b")) == 0);
  std::size_t files = 0;
  for (auto& e : fs::directory_iterator(sb.dir / "a")) {
    (void)e;
    ++files;
  }
  CHECK(files == 4);
  for (const char* f : {"run_000.csv", "run_001.csv", "run_002.csv", "summary.json"})
    CHECK(slurp(sb.dir / "a" / f) == slurp(sb.dir / "b" / f));
  auto csv = slurp(sb.dir / "a" / "run_000.csv");
  CHECK(csv.rfind("t,x_0,x_1\n0,", 0) == 0);
  auto summary = json::parse(slurp(sb.dir / "a" / "summary.json"));
  REQUIRE(summary["per_run"].size() == 3);
  for (const char* k : {"seed", "n", "absorbed_at", "absorbing_action", "final_state", "event_count"})
    CHECK(summary["per_run"][0].contains(k));

  auto o = sb.opts(cfg, "c");
  o.seed = 5;
  REQUIRE(cmd_simulate(o) == 0);
  CHECK(slurp(sb.dir / "a" / "run_000.csv") != slurp(sb.dir / "c" / "run_000.csv"));
  o.runs = 1;
  o.out = sb.dir / "d";
  REQUIRE(cmd_simulate(o) == 0);
  CHECK(fs::exists(sb.dir / "d" / "run_000.csv"));
  CHECK_FALSE(fs::exists(sb.dir / "d" / "run_001.csv"));
}

TEST_CASE("malformed config exits 2 without output") {
  Sandbox sb;
  auto cfg = sb.file("bad.json", "{\n  \"game\": {\"type\": \"builtin\",\n");
  CHECK(cmd_simulate(sb.opts(cfg, "out")) == 2);
  CHECK_FALSE(fs::exists(sb.dir / "out"));
  CHECK(sb.err.str().find("bad.json:") != std::string::npos);
  CHECK(sb.err.str().find("error:") != std::string::npos);
  CHECK(cmd_simulate(sb.opts(sb.dir / "missing.json", "out")) == 2);
}

TEST_CASE("ode subcommand") {
  Sandbox sb;
  std::string s = kTwoPhase;
  s.replace(s.find("[0.001, 0.999]"), 14, "[0.3, 0.7]");
  REQUIRE(cmd_ode(sb.opts(sb.file("c.json", s), "o")) == 0);
  auto lim = json::parse(slurp(sb.dir / "o" / "limit.json"));
  CHECK(lim["converged"] == true);
  CHECK(std::abs(lim["point"][0].get<double>() - 0.75) < 1e-6);
  CHECK(slurp(sb.dir / "o" / "ode.csv").rfind("t,x_0,x_1\n", 0) == 0);

  std::string v = kTwoPhase;
  v.replace(v.find("[0.001, 0.999]"), 14, "[1, 0]");
  REQUIRE(cmd_ode(sb.opts(sb.file("v.json", v), "v")) == 0);
  std::istringstream rows(slurp(sb.dir / "v" / "ode.csv"));
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) CHECK(line.substr(line.find(',')) == ",1,0");

  std::string off = kTwoPhase;
  off.replace(off.find("[0.001, 0.999]"), 14, "[0.3, 0.71]");
  CHECK(cmd_ode(sb.opts(sb.file("off.json", off), "x")) == 2);
}

TEST_CASE("landscape subcommand") {
  Sandbox sb;
  REQUIRE(cmd_landscape(sb.opts(sb.file("c.json", kTwoPhase), "l")) == 0);
  auto j = json::parse(slurp(sb.dir / "l" / "landscape.json"));
  REQUIRE(j["critical_points"].size() == 4);
  CHECK(j["critical_points"][0]["class"] == "local_min");
  CHECK(j["critical_points"][1]["class"] == "saddle_or_degenerate");
  CHECK(j["critical_points"][2]["class"] == "local_max");
  CHECK(j["critical_points"][3]["class"] == "local_min");
  CHECK(j["ess"].size() == 1);

  std::string nopot = kTwoPhase;
  nopot.replace(nopot.find("{\"type\": \"builtin\", \"name\": \"example4\"}"), 39,
                "{\"type\": \"matrix\", \"A\": [[0, 1], [0, 0]]}");
  CHECK(cmd_landscape(sb.opts(sb.file("n.json", nopot), "n")) == 2);
  CHECK(sb.err.str().find("landscape requires a potential") != std::string::npos);

  std::string concave = kTwoPhase;
  concave.replace(concave.find("{\"type\": \"builtin\", \"name\": \"example4\"}"), 39,
                  "{\"type\": \"congestion\", \"polynomials\": [[0, -1], [0, -1], [0, -1]]}");
  concave.replace(concave.find("[0.001, 0.999]"), 14, "[0.2, 0.3, 0.5]");
  REQUIRE(cmd_landscape(sb.opts(sb.file("k.json", concave), "k")) == 0);
  auto k = json::parse(slurp(sb.dir / "k" / "landscape.json"));
  CHECK(k["ess"].size() == 1);
}

TEST_CASE("metastability subcommand") {
  Sandbox sb;
  std::string s = R"({
  "game": {"type": "builtin", "name": "example4"},
  "rule": {"type": "arctan", "K": 1},
  "topology": {"type": "complete", "n": 100},
  "initial": {"x": [0.3, 0.7]},
  "sim": {"horizon": 100, "record_stride": 0.5},
  "ensemble": {"runs": 4, "base_seed": 1},
  "analysis": {"n_sweep": [100, 200]}
})";
  REQUIRE(cmd_metastability(sb.opts(sb.file("m.json", s), "m")) == 0);
  auto j = json::parse(slurp(sb.dir / "m" / "metastability.json"));
  CHECK(j["sweep"].size() == 2);
  CHECK(j["trend"]["single_size"] == false);
  for (const char* k : {"critical_points", "per_run", "aggregates", "warnings"}) CHECK(j["sweep"][0].contains(k));

  std::string single = s;
  single.replace(single.find("\"n_sweep\": [100, 200]"), 21, "\"gammas\": [0.05]");
  REQUIRE(cmd_metastability(sb.opts(sb.file("s.json", single), "s")) == 0);
  auto js = json::parse(slurp(sb.dir / "s" / "metastability.json"));
  CHECK(js["trend"]["single_size"] == true);

  std::string pure = s;
  pure.replace(pure.find("[0.3, 0.7]"), 10, "[0.0, 1.0]");
  CHECK(cmd_metastability(sb.opts(sb.file("p.json", pure), "p")) == 2);
  CHECK_FALSE(fs::exists(sb.dir / "p"));
}

TEST_CASE("compare subcommand") {
  Sandbox sb;
  std::string s = R"({
  "game": {"type": "builtin", "name": "example4"},
  "rule": {"type": "arctan", "K": 1},
  "topology": {"type": "complete", "n": 500},
  "initial": {"x": [0.3, 0.7]},
  "sim": {"horizon": 10},
  "ensemble": {"runs": 3, "base_seed": 4},
  "analysis": {"kurtz_T": 10, "n_sweep": [500, 5000]}
})";
  REQUIRE(cmd_compare(sb.opts(sb.file("c.json", s), "c")) == 0);
  auto j = json::parse(slurp(sb.dir / "c" / "compare.json"));
  CHECK(j["deviation_vs_n"].size() == 2);
  auto csv = slurp(sb.dir / "c" / "compare.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  std::string far = s;
  far.replace(far.find("\"kurtz_T\": 10"), 13, "\"kurtz_T\": 99");
  CHECK(cmd_compare(sb.opts(sb.file("f.json", far), "f")) == 2);
}
