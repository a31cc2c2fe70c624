#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contactlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string tier;  // "fast" or "full"
  bool pass = false;
  std::string detail;  // semicolon separated facts; kept comma free for CSV
  double seconds = 0.0;
};

// Built-in validation suite with pinned parameters and tolerances. The fast
// tier covers the oracle, duality, moment, growth-bound, distributional and
// determinism checks; `full` adds the monotonicity, sign-pattern and overlap
// decay studies. One line per criterion streams to log as it finishes.
std::vector<CriterionResult> run_acceptance(bool full, unsigned threads,
                                            std::ostream& log);

}  // namespace contactlab
