#pragma once

#include <iosfwd>
#include <string>

#include "contactlab/config.hpp"

namespace contactlab {

inline constexpr const char* kToolVersion = "0.1.0";

// process exit codes shared by the CLI and the acceptance runner
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAcceptance = 3;
inline constexpr int kExitCap = 4;

// Runs the configured experiment, writes CSV artifacts plus summary.json into
// out_dir and one-line progress to log. Returns an exit code; configuration
// and resource errors propagate as exceptions for the caller to map.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::ostream& log);

}  // namespace contactlab
