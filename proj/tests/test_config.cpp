#include "doctest.h"

#include <string>

#include "contactlab/config.hpp"
#include "contactlab/errors.hpp"

using namespace contactlab;

namespace {

bool mentions(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty inputs give the default experiment") {
  ExperimentConfig cfg = parse_experiment_config("{}", "{}");
  CHECK(cfg.experiment == "simulate");
  CHECK(cfg.group == "Z");
  CHECK(cfg.kernel == "nn(1)");
  CHECK(cfg.delta == doctest::Approx(1.0));
  CHECK(cfg.replicas == 10'000);
  CHECK(cfg.threads == 1);
}

TEST_CASE("overrides win over the file") {
  ExperimentConfig cfg = parse_experiment_config(
      R"({"experiment":"survival","delta":0.5,"replicas":100})",
      R"({"delta":2.0,"seed":77})");
  CHECK(cfg.experiment == "survival");
  CHECK(cfg.delta == doctest::Approx(2.0));
  CHECK(cfg.replicas == 100);
  CHECK(cfg.seed == 77);
}

TEST_CASE("unknown fields are rejected by name") {
  try {
    parse_experiment_config(R"({"grup":"Z"})", "{}");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "grup"));
  }
}

TEST_CASE("type mismatches are rejected by field name") {
  try {
    parse_experiment_config(R"({"delta":"fast"})", "{}");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "delta"));
  }
  CHECK_THROWS_AS(parse_experiment_config(R"({"grid":3})", "{}"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"replicas":[1]})", "{}"), ConfigError);
}

TEST_CASE("malformed JSON and non-object roots are rejected") {
  CHECK_THROWS_AS(parse_experiment_config("{", "{}"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[1,2]", "{}"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("{}", "{nope"), ConfigError);
}

TEST_CASE("replica counts below one are rejected") {
  CHECK_THROWS_AS(parse_experiment_config(R"({"replicas":0})", "{}"), ConfigError);
}

TEST_CASE("unknown experiments are rejected by name") {
  try {
    parse_experiment_config(R"({"experiment":"teleport"})", "{}");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "teleport"));
  }
}

TEST_CASE("every advertised experiment name parses") {
  for (const std::string& name : known_experiments()) {
    ExperimentConfig cfg =
        parse_experiment_config("{}", R"({"experiment":")" + name + R"("})");
    CHECK(cfg.experiment == name);
  }
}

TEST_CASE("config echo is canonical and ignores the thread count") {
  ExperimentConfig a = parse_experiment_config(R"({"seed":5,"threads":1})", "{}");
  ExperimentConfig b = parse_experiment_config(R"({"seed":5,"threads":8})", "{}");
  CHECK(config_echo(a) == config_echo(b));
  ExperimentConfig c = parse_experiment_config(R"({"seed":6})", "{}");
  CHECK(config_echo(a) != config_echo(c));
}
