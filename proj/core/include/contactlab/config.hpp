#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace contactlab {

// Flat experiment description. Every key has a default; strict parsing
// rejects unknown keys so config files cannot drift silently. CLI flags are
// merged as overrides before parsing.
struct ExperimentConfig {
  std::string experiment = "simulate";
  std::string group = "Z";
  std::string kernel = "nn(1)";
  double delta = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string initial = "e";  // ';'-separated element literals
  std::size_t replicas = 10'000;
  std::size_t max_infected = 1'000'000;

  double horizon = 1.0;
  std::vector<double> grid;  // observation times

  std::size_t escape_threshold = 1000;
  std::string method = "regression";
  std::size_t burn_in = 1;

  std::string dual_initial = "e";
  std::string functional = "cardinality";
  std::string pattern = "e";

  double time_param = 1.0;
  bool exponential_time = false;
  std::string window = "";  // ';'-separated element literals, empty = default
  std::vector<double> compare_times;
  double invariant_horizon = 20.0;
  std::size_t invariant_replicas = 2000;

  int depth = 8;  // bisection depth

  int probe_radius = 2;
  std::size_t population_cap = 1'000'000;
  double split_h = 0.0;  // 0 disables the split bound report

  int max_radius = 20;
  double threshold = 0.1;

  std::size_t m_max = 20;
  std::size_t walks = 32;
  std::size_t fit_lo = 4;
  std::size_t fit_hi = 16;

  std::size_t site_cap = 4;
  std::string tier = "fast";
};

// Strict parse of a JSON object; unknown keys and wrong types raise
// ConfigError naming the field. Both arguments may be empty ("{}").
ExperimentConfig parse_experiment_config(const std::string& file_text,
                                         const std::string& override_text);

// canonical single-line echo of the non-default fields, stable across runs
// and thread counts (threads are deliberately excluded)
std::string config_echo(const ExperimentConfig& cfg);

std::vector<std::string> known_experiments();

}  // namespace contactlab
