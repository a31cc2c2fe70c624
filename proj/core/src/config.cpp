#include "contactlab/config.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  if (text.empty()) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

template <class T>
void read_field(const json& obj, const char* key, T& into) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    into = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& file_text,
                                         const std::string& override_text) {
  json merged = parse_json(file_text, "config file");
  if (!merged.is_object()) throw ConfigError("config root must be a JSON object");
  json overrides = parse_json(override_text, "config overrides");
  for (auto it = overrides.begin(); it != overrides.end(); ++it)
    merged[it.key()] = it.value();

  static const std::vector<std::string> keys = {
      "experiment",     "group",
      "kernel",         "delta",
      "seed",           "threads",
      "initial",        "replicas",
      "max_infected",   "horizon",
      "grid",           "escape_threshold",
      "method",         "burn_in",
      "dual_initial",   "functional",
      "pattern",        "time_param",
      "exponential_time", "window",
      "compare_times",  "invariant_horizon",
      "invariant_replicas", "depth",
      "probe_radius",   "population_cap",
      "split_h",        "max_radius",
      "threshold",      "m_max",
      "walks",          "fit_lo",
      "fit_hi",         "site_cap",
      "tier"};
  for (auto it = merged.begin(); it != merged.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw ConfigError("unknown config field '" + it.key() + "'");

  ExperimentConfig cfg;
  read_field(merged, "experiment", cfg.experiment);
  read_field(merged, "group", cfg.group);
  read_field(merged, "kernel", cfg.kernel);
  read_field(merged, "delta", cfg.delta);
  read_field(merged, "seed", cfg.seed);
  read_field(merged, "threads", cfg.threads);
  read_field(merged, "initial", cfg.initial);
  read_field(merged, "replicas", cfg.replicas);
  read_field(merged, "max_infected", cfg.max_infected);
  read_field(merged, "horizon", cfg.horizon);
  read_field(merged, "grid", cfg.grid);
  read_field(merged, "escape_threshold", cfg.escape_threshold);
  read_field(merged, "method", cfg.method);
  read_field(merged, "burn_in", cfg.burn_in);
  read_field(merged, "dual_initial", cfg.dual_initial);
  read_field(merged, "functional", cfg.functional);
  read_field(merged, "pattern", cfg.pattern);
  read_field(merged, "time_param", cfg.time_param);
  read_field(merged, "exponential_time", cfg.exponential_time);
  read_field(merged, "window", cfg.window);
  read_field(merged, "compare_times", cfg.compare_times);
  read_field(merged, "invariant_horizon", cfg.invariant_horizon);
  read_field(merged, "invariant_replicas", cfg.invariant_replicas);
  read_field(merged, "depth", cfg.depth);
  read_field(merged, "probe_radius", cfg.probe_radius);
  read_field(merged, "population_cap", cfg.population_cap);
  read_field(merged, "split_h", cfg.split_h);
  read_field(merged, "max_radius", cfg.max_radius);
  read_field(merged, "threshold", cfg.threshold);
  read_field(merged, "m_max", cfg.m_max);
  read_field(merged, "walks", cfg.walks);
  read_field(merged, "fit_lo", cfg.fit_lo);
  read_field(merged, "fit_hi", cfg.fit_hi);
  read_field(merged, "site_cap", cfg.site_cap);
  read_field(merged, "tier", cfg.tier);

  if (cfg.replicas == 0) throw ConfigError("config field 'replicas' must be at least 1");
  const auto names = known_experiments();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  return cfg;
}

std::string config_echo(const ExperimentConfig& cfg) {
  // canonical ordered key list; threads excluded so reports stay byte
  // identical across worker counts
  json echo;
  echo["experiment"] = cfg.experiment;
  echo["group"] = cfg.group;
  echo["kernel"] = cfg.kernel;
  echo["delta"] = fmt_double(cfg.delta);
  echo["seed"] = cfg.seed;
  echo["initial"] = cfg.initial;
  echo["replicas"] = cfg.replicas;
  echo["max_infected"] = cfg.max_infected;
  echo["horizon"] = fmt_double(cfg.horizon);
  json grid = json::array();
  for (double g : cfg.grid) grid.push_back(fmt_double(g));
  echo["grid"] = grid;
  echo["escape_threshold"] = cfg.escape_threshold;
  echo["method"] = cfg.method;
  echo["burn_in"] = cfg.burn_in;
  echo["dual_initial"] = cfg.dual_initial;
  echo["functional"] = cfg.functional;
  echo["pattern"] = cfg.pattern;
  echo["time_param"] = fmt_double(cfg.time_param);
  echo["exponential_time"] = cfg.exponential_time;
  echo["window"] = cfg.window;
  json cmp = json::array();
  for (double g : cfg.compare_times) cmp.push_back(fmt_double(g));
  echo["compare_times"] = cmp;
  echo["invariant_horizon"] = fmt_double(cfg.invariant_horizon);
  echo["invariant_replicas"] = cfg.invariant_replicas;
  echo["depth"] = cfg.depth;
  echo["probe_radius"] = cfg.probe_radius;
  echo["population_cap"] = cfg.population_cap;
  echo["split_h"] = fmt_double(cfg.split_h);
  echo["max_radius"] = cfg.max_radius;
  echo["threshold"] = fmt_double(cfg.threshold);
  echo["m_max"] = cfg.m_max;
  echo["walks"] = cfg.walks;
  echo["fit_lo"] = cfg.fit_lo;
  echo["fit_hi"] = cfg.fit_hi;
  echo["site_cap"] = cfg.site_cap;
  echo["tier"] = cfg.tier;
  return echo.dump();
}

std::vector<std::string> known_experiments() {
  return {"simulate",       "growth-rate", "survival",        "delta-c",
          "duality-check",  "martingale-check", "domination", "campbell",
          "branching-check", "ball-profile", "rw-decay",      "oracle-check",
          "accept"};
}

}  // namespace contactlab
