#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nlohmann/json.hpp"

#include "contactlab/errors.hpp"
#include "contactlab/experiments.hpp"

using namespace contactlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TmpDir {
  fs::path path;
  explicit TmpDir(const char* name) : path(fs::path(".experiment-tmp") / name) {
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path.parent_path()); }
};

}  // namespace

TEST_CASE("a survival run reproduces the single site closed form end to end") {
  ExperimentConfig cfg;
  cfg.experiment = "survival";
  cfg.group = "C1";
  cfg.kernel = "none";
  cfg.delta = 1.0;
  cfg.horizon = 1.0;
  cfg.escape_threshold = 1000;
  cfg.replicas = 20000;
  cfg.seed = 7;
  TmpDir dir("survival");
  std::ostringstream log;
  int code = run_experiment(cfg, dir.path.string(), log);
  CHECK(code == kExitSuccess);
  CHECK(log.str().find("survival") != std::string::npos);

  json summary = json::parse(slurp(dir.path / "summary.json"));
  CHECK(summary["tool"] == "contactlab");
  CHECK(summary["version"] == kToolVersion);
  CHECK(summary["experiment"] == "survival");
  CHECK(summary["config"].is_object());
  CHECK(summary["timing_seconds"].is_number());
  double rho = summary["results"]["rho_hat"].get<double>();
  double exact = std::exp(-1.0);
  double se = std::sqrt(exact * (1 - exact) / 20000.0);
  CHECK(std::fabs(rho - exact) < 4.0 * se);

  std::string csv = slurp(dir.path / "survival.csv");
  CHECK(csv.rfind("# contactlab csv v1", 0) == 0);
  CHECK(csv.find("rho_hat") != std::string::npos);
}

TEST_CASE("identical configurations produce identical artifact bytes") {
  ExperimentConfig cfg;
  cfg.experiment = "survival";
  cfg.group = "Z";
  cfg.kernel = "nn(1)";
  cfg.delta = 1.0;
  cfg.horizon = 2.0;
  cfg.escape_threshold = 100;
  cfg.replicas = 3000;
  cfg.seed = 31337;
  TmpDir dir("determinism");
  std::ostringstream log;
  fs::path a = dir.path / "a", b = dir.path / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  REQUIRE(run_experiment(cfg, a.string(), log) == kExitSuccess);
  cfg.threads = 3;  // thread count must not leak into artifacts
  REQUIRE(run_experiment(cfg, b.string(), log) == kExitSuccess);
  CHECK(slurp(a / "survival.csv") == slurp(b / "survival.csv"));
}

TEST_CASE("the exact oracle self checks pass on a finite group") {
  ExperimentConfig cfg;
  cfg.experiment = "oracle-check";
  cfg.group = "C3";
  cfg.kernel = "nn(1)";
  cfg.delta = 0.9;
  cfg.grid = {0.5, 1.5};
  cfg.site_cap = 8;
  TmpDir dir("oracle");
  std::ostringstream log;
  int code = run_experiment(cfg, dir.path.string(), log);
  CHECK(code == kExitSuccess);
  std::string csv = slurp(dir.path / "oracle.csv");
  CHECK(csv.find("generator_row_sums") != std::string::npos);
  CHECK(csv.find("uniformization_vs_expm") != std::string::npos);
}

TEST_CASE("a ball profile run reports the classification") {
  ExperimentConfig cfg;
  cfg.experiment = "ball-profile";
  cfg.group = "F2";
  cfg.max_radius = 7;
  TmpDir dir("ball");
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, dir.path.string(), log) == kExitSuccess);
  json summary = json::parse(slurp(dir.path / "summary.json"));
  CHECK(summary["results"]["classification"] == "exponential-like");
  CHECK(summary["results"]["complete"] == true);
}

TEST_CASE("unknown experiments and bad groups are configuration errors") {
  std::ostringstream log;
  TmpDir dir("errors");
  ExperimentConfig cfg;
  cfg.experiment = "teleport";
  CHECK_THROWS_AS(run_experiment(cfg, dir.path.string(), log), ConfigError);
  cfg = ExperimentConfig{};
  cfg.experiment = "simulate";
  cfg.group = "Q8";
  CHECK_THROWS_AS(run_experiment(cfg, dir.path.string(), log), ConfigError);
  cfg = ExperimentConfig{};
  cfg.experiment = "oracle-check";  // needs a finite group
  cfg.group = "Z";
  CHECK_THROWS_AS(run_experiment(cfg, dir.path.string(), log), ConfigError);
}

TEST_CASE("the simulate experiment writes one row per grid time") {
  ExperimentConfig cfg;
  cfg.experiment = "simulate";
  cfg.group = "Z";
  cfg.kernel = "nn(1)";
  cfg.delta = 1.0;
  cfg.grid = {0.5, 1.0, 1.5};
  cfg.replicas = 500;
  cfg.seed = 3;
  TmpDir dir("simulate");
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, dir.path.string(), log) == kExitSuccess);
  std::string csv = slurp(dir.path / "simulate.csv");
  int rows = 0;
  std::istringstream lines(csv);
  for (std::string line; std::getline(lines, line);)
    if (!line.empty() && line[0] != '#' && line.rfind("time", 0) != 0) ++rows;
  CHECK(rows == 3);
}
