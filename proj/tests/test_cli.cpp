#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fubini/cli.hpp"
#include "fubini/experiments.hpp"
#include "json.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string log;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fubini_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  Run r;
  r.code = fubini::cli::run(static_cast<int>(argv.size()), argv.data(), out, log);
  r.out = out.str();
  r.log = log.str();
  return r;
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"--experiment", "no-such-thing"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--experiment", "theta-sum", "--tolerance", "nonsense.key=1"}).code == 2);
  CHECK(run({"--experiment", "theta-sum", "--tolerance", "theta.plain"}).code == 2);
  CHECK(run({"--experiment", "theta-sum", "--format", "xml"}).code == 2);
  CHECK(run({"--experiment", "theta-sum", "--t-min", "1e-6"}).code == 2);
  CHECK(run({"--experiment", "hard-example", "--theta", "1/x"}).code == 2);
  CHECK(run({"--bogus-flag"}).code == 2);
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--experiment") != std::string::npos);
}

TEST_CASE("theta-sum csv report") {
  const auto r = run({"--experiment", "theta-sum", "--t-min", "1e-3", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,value,tail_bound\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : r.out) lines += ch == '\n';
  CHECK(lines == 17);
  CHECK(r.log.find("PASS") != std::string::npos);
  CHECK(r.log.find("FAIL") == std::string::npos);
}

TEST_CASE("lattice-count json report") {
  const auto r = run({"--experiment", "lattice-count", "--p", "2", "--max-n", "100"});
  CHECK(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["experiment"] == "lattice-count");
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() == 1);
  CHECK(j["config"]["max_n"] == 100);
}

TEST_CASE("a failed check exits with 1") {
  const auto r = run({"--experiment", "theta-sum", "--tolerance", "theta.abs=1e-9"});
  CHECK(r.code == 1);
  CHECK(r.log.find("FAIL") != std::string::npos);
}

TEST_CASE("unwritable output exits with 1") {
  CHECK(run({"--experiment", "theta-sum", "--output", "/nonexistent-dir/out.json"}).code == 1);
}

TEST_CASE("flags override the config file") {
  const auto cfg = temp_path("fubini_cli_config.json");
  {
    std::ofstream f(cfg);
    f << R"({"experiment": "lattice-count", "p": 3, "max_n": 50, "tolerance": {"lattice.residual": 1e-9}})";
  }
  const auto from_file = run({"--config", cfg});
  CHECK(from_file.code == 1);
  const auto j = nlohmann::ordered_json::parse(from_file.out);
  CHECK(j["config"]["p"] == 3);
  const auto overridden = run({"--config", cfg, "--tolerance", "lattice.residual=4", "--max-n", "60"});
  CHECK(overridden.code == 0);
  const auto k = nlohmann::ordered_json::parse(overridden.out);
  CHECK(k["config"]["max_n"] == 60);
  CHECK(k["config"]["p"] == 3);

  {
    std::ofstream f(cfg);
    f << R"({"experiment": "lattice-count", "unknown": 1})";
  }
  CHECK(run({"--config", cfg}).code == 2);
  CHECK(run({"--config", temp_path("fubini_missing_config.json")}).code == 2);
  std::filesystem::remove(cfg);
}

TEST_CASE("reports written to different files are identical") {
  const auto a = temp_path("fubini_cli_a.json");
  const auto b = temp_path("fubini_cli_b.json");
  CHECK(run({"--experiment", "lattice-count", "--output", a}).code == 0);
  CHECK(run({"--experiment", "lattice-count", "--output", b}).code == 0);
  CHECK(!slurp(a).empty());
  CHECK(slurp(a) == slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("config json round trip") {
  fubini::experiments::ExperimentConfig c;
  c.experiment = "hard-example";
  c.theta = fubini::sequences::RationalAngle(1, 7);
  c.max_m_exp = 13;
  c.mode = "direct";
  c.tolerances["hard.remainder"] = 8;
  const auto back = fubini::experiments::ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
}
