#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skewdim/commands.hpp"
#include "skewdim/config.hpp"
#include "skewdim/errors.hpp"
#include "skewdim/report.hpp"

using namespace skewdim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("skewdim_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

int run(const std::string& cmd, const std::string& config, const fs::path& out, OutputFormat f = OutputFormat::Default) {
  std::ostringstream log, err;
  CommandOptions o;
  o.out = out;
  o.format = f;
  return run_command(cmd, parse_config(config), o, log, err);
}

const char* kSrw = R"({"system": {"fixture": "f2_srw"}, "boundary_points": [{"head": "", "cycle": "e1"}],
  "exponent": {"n_max": 16}, "series": {"p": [1.0], "n": 8}, "measure": {"p": 0.6, "depth": 2, "samples": 3},
  "cover": {"p": [0.8, 1.5], "n": 12}})";

}  // namespace

TEST_CASE("parse errors carry a location") {
  std::string e = error_of("{\"system\": {\"fixture\": \"f2_srw\"},\n  \"seed\": }");
  CHECK(e.find("config:2:") != std::string::npos);
  CHECK(error_of(R"({"exponent": {"n_maxx": 3}})").find("exponent.n_maxx") != std::string::npos);
  CHECK(error_of(R"({"system": {"fixture": "f2_srw"}, "caps": {"max_states": 0}})").find("caps.max_states") !=
        std::string::npos);
  CHECK(error_of(R"({"system": {"fixture": "nope"}})").find("system.fixture") != std::string::npos);
  CHECK(error_of(R"({"system": {"file": "missing.json"}})").find("system.file") != std::string::npos);
  CHECK(error_of(R"({"system": {"alphabet": ["x", "y"], "potential": {"depth": 2, "entries": [["x y", 1]]}}})")
            .find("system") != std::string::npos);
  CHECK(error_of(R"({"projection": {"rank": 2, "images": {}}})").find("projection") != std::string::npos);
}

TEST_CASE("inline system and file references") {
  fs::path dir = scratch("inline");
  std::ofstream(dir / "sys.json") << R"({"alphabet": ["x", "X", "y", "Y"],
    "incidence": {"mode": "forbid", "pairs": [["x", "X"], ["X", "x"], ["y", "Y"], ["Y", "y"]]},
    "potential": {"constant": 1.0}})";
  std::ofstream(dir / "run.json") << R"({"system": {"file": "sys.json"},
    "projection": {"rank": 2, "images": {"x": "e1", "X": "E1", "y": "e2", "Y": "E2"}}})";
  RunConfig c = load_config(dir / "run.json");
  REQUIRE(c.system);
  CHECK(c.system->size() == 4);
  CHECK_FALSE(c.system->allowed(0, 1));
  CHECK(c.projection->rank() == 2);

  std::ofstream(dir / "bad.json") << "{\n\n  \"seed\": [1,\n}";
  try {
    load_config(dir / "bad.json");
    FAIL("expected a parse error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find((dir / "bad.json").string() + ":") != std::string::npos);
  }
}

TEST_CASE("config hash ignores output location and threads but not the seed") {
  RunConfig a = parse_config(R"({"system": {"fixture": "f2_srw"}, "output_dir": "x", "threads": 2})");
  RunConfig b = parse_config(R"({"system": {"fixture": "f2_srw"}, "output_dir": "y"})");
  RunConfig c = parse_config(R"({"system": {"fixture": "f2_srw"}, "seed": 9})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 64);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv cells round-trip doubles and quote separators") {
  CsvTable t({"x", "label"});
  const double v = 0.1 + 0.2;
  t.row().add(v).add(std::string("a,b"));
  std::string s = t.render({"unit", "00", 1});
  CHECK(s.rfind("# tool: skewdim ", 0) == 0);
  CHECK(s.find("# config_sha256: 00\n") != std::string::npos);
  CHECK(s.find("\"a,b\"") != std::string::npos);
  CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
  CsvTable bad({"x"});
  bad.row().add(1).add(2);
  CHECK_THROWS(bad.render({"unit", "00", 1}));
}

TEST_CASE("subcommands write headed artifacts") {
  fs::path out = scratch("commands");
  CHECK(run("validate", kSrw, out) == kExitOk);
  CHECK(run("series", kSrw, out) == kExitOk);
  CHECK(run("exponent", kSrw, out) == kExitOk);
  CHECK(run("measure", kSrw, out) == kExitOk);
  CHECK(run("cover", kSrw, out) == kExitOk);
  for (const char* f : {"validate.json", "exponent.json", "measure.json"}) {
    auto j = nlohmann::json::parse(slurp(out / f));
    CHECK(j["header"]["tool"] == "skewdim");
    CHECK(j["header"]["config_sha256"].get<std::string>().size() == 64);
    CHECK(j["header"]["version"] == tool_version());
  }
  for (const char* f : {"series.csv", "cover.csv"}) CHECK(slurp(out / f).rfind("# tool: skewdim", 0) == 0);
  auto series = slurp(out / "series.csv");
  CHECK(series.find("target,p,m,a_m,partial_sum\n") != std::string::npos);
  // Level 2 of the identity fiber at p = 1: 4 e^{-2}.
  CHECK(series.find("1,1,2," + format_real(4 * std::exp(-2.0))) != std::string::npos);

  auto exp = nlohmann::json::parse(slurp(out / "exponent.json"));
  CHECK(std::abs(exp["data"][0]["estimate"].get<double>() - 0.5 * std::log(12.0)) < 0.15);

  CHECK(run("exponent", kSrw, out, OutputFormat::Csv) == kExitOk);
  CHECK(fs::exists(out / "exponent.csv"));
}

TEST_CASE("exit codes") {
  fs::path out = scratch("exit");
  // Too short to populate the fitting window.
  CHECK(run("exponent", R"({"system": {"fixture": "f2_srw"}, "exponent": {"n_max": 2}})", out) == kExitInconclusive);
  CHECK(run("measure", R"({"system": {"fixture": "f2_srw"}})", out) == kExitError);  // no boundary point
  CHECK(run("schottky", R"({"system": {"fixture": "f2_srw"}})", out) == kExitError);
  CHECK(run("nonsense", R"({})", out) == kExitError);
  // Escape above the exponent cannot clear its threshold.
  CHECK(run("measure", R"({"system": {"fixture": "f2_srw"}, "boundary_points": [{"head": "", "cycle": "e1"}],
                          "measure": {"p": 1.6}, "caps": {"length_cap": 10}})",
            out) == kExitInconclusive);
}

TEST_CASE("artifacts are deterministic") {
  fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string cfg = std::string(kSrw).insert(1, "\"seed\": 42, ");
  REQUIRE(run("measure", cfg, a) == kExitOk);
  REQUIRE(run("measure", cfg, b) == kExitOk);
  CHECK(sha256_hex(slurp(a / "measure.json")) == sha256_hex(slurp(b / "measure.json")));
  fs::path c = scratch("det_c");
  REQUIRE(run("measure", std::string(kSrw).insert(1, "\"seed\": 43, "), c) == kExitOk);
  CHECK(slurp(a / "measure.json") != slurp(c / "measure.json"));
}

#ifdef SKEWDIM_CLI_PATH
TEST_CASE("command line front end") {
  fs::path dir = scratch("binary");
  const std::string bin = SKEWDIM_CLI_PATH;
  auto sh = [&](const std::string& args) {
    int rc = std::system((args + " >" + (dir / "stdout.txt").string() + " 2>" + (dir / "stderr.txt").string()).c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  std::ofstream(dir / "broken.json") << "{\"system\": {\"fixture\": \"f2_srw\"}, \"exponent\": {\"n_max\": \"x\"}}";
  CHECK(sh(bin + " exponent --config " + (dir / "broken.json").string()) == 1);
  CHECK(slurp(dir / "stderr.txt").find("exponent.n_max") != std::string::npos);
  CHECK(sh(bin + " series") == 1);  // no config
  CHECK(sh(bin + " --format xml validate") == 1);

  std::ofstream(dir / "ok.json") << kSrw;
  CHECK(sh("SKEWDIM_OUT=" + (dir / "env_out").string() + " SKEWDIM_SEED=5 " + bin + " series --config " +
           (dir / "ok.json").string()) == 0);
  CHECK(slurp(dir / "env_out" / "series.csv").find("# seed: 5\n") != std::string::npos);
  CHECK(sh(bin + " series --format json --seed 6 --out " + (dir / "flag_out").string() + " --config " +
           (dir / "ok.json").string()) == 0);
  CHECK(slurp(dir / "flag_out" / "series.json").find("\"seed\": 6") != std::string::npos);
}
#endif

TEST_CASE("shipped example configs load") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(SKEWDIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    RunConfig cfg = load_config(entry.path());
    CHECK((cfg.system.has_value() || cfg.schottky.has_value()));
    if (cfg.system) CHECK(cfg.projection.has_value());
    ++seen;
  }
  CHECK(seen == 4);
}
