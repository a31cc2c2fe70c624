// command line front end: each subcommand maps onto one experiment runner

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "contactlab/config.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/experiments.hpp"

namespace {

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"simulate", "run replicas and report final state statistics"},
      {"growth-rate", "fit the exponential rate of the mean infected count"},
      {"survival", "estimate the survival probability with an escape rule"},
      {"delta-c", "bracket the critical recovery rate by bisection"},
      {"duality-check", "compare avoidance probabilities against the reversed process"},
      {"martingale-check", "mean drift of the compensated observable"},
      {"domination", "probability that the state covers a translated pattern"},
      {"campbell", "size biased recentered law and its window statistics"},
      {"branching-check", "branching coupling: dominance, means and the split bound"},
      {"ball-profile", "ball growth profile of the group"},
      {"rw-decay", "generator walk overlap decay on recentered samples"},
      {"oracle-check", "internal consistency checks of the exact finite chain"},
      {"accept", "run the built in validation suite"},
  };
  return d;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw contactlab::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// values parse as JSON when they can (numbers, booleans, arrays) and fall
// back to strings, so --set delta=0.5 and --set group=Z both work
nlohmann::json coerce_value(const std::string& text) {
  nlohmann::json v = nlohmann::json::parse(text, nullptr, false);
  if (!v.is_discarded()) return v;
  return nlohmann::json(text);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace contactlab;

  CLI::App app{"contact process laboratory on countable groups"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<std::string> sets;
  bool full = false;

  app.add_option("--config", config_path, "JSON experiment description");
  auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker thread count");
  app.add_option("--out-dir", out_dir, "directory for CSV and summary artifacts");
  app.add_option("--set", sets,
                 "override any config field as key=value (repeatable)");

  for (const std::string& name : known_experiments()) {
    CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
    sub->fallthrough();
    if (name == "accept")
      sub->add_flag("--full", full, "include the long full tier studies");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitConfig;
  }

  try {
    std::vector<CLI::App*> chosen = app.get_subcommands();
    if (chosen.empty()) {
      std::cout << app.help();
      return kExitSuccess;
    }

    nlohmann::json overrides = nlohmann::json::object();
    overrides["experiment"] = chosen[0]->get_name();
    if (seed_opt->count() > 0) overrides["seed"] = seed;
    if (threads_opt->count() > 0) overrides["threads"] = threads;
    if (full) overrides["tier"] = "full";
    for (const std::string& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
      overrides[kv.substr(0, eq)] = coerce_value(kv.substr(eq + 1));
    }

    std::string file_text = config_path.empty() ? "{}" : read_text_file(config_path);
    ExperimentConfig cfg = parse_experiment_config(file_text, overrides.dump());

    std::filesystem::create_directories(out_dir);
    return run_experiment(cfg, out_dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
