// standalone validation suite runner: one pass/fail line per criterion,
// exit code 3 when anything fails

#include <cstring>
#include <iostream>
#include <string>

#include "contactlab/acceptance.hpp"
#include "contactlab/experiments.hpp"

int main(int argc, char** argv) {
  bool full = false;
  unsigned threads = 1;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--full") {
      full = true;
    } else if (arg == "--threads" && i + 1 < argc) {
      threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else {
      std::cerr << "usage: " << argv[0] << " [--full] [--threads N]\n";
      return contactlab::kExitConfig;
    }
  }
  auto results = contactlab::run_acceptance(full, threads, std::cout);
  for (const auto& r : results)
    if (!r.pass) return contactlab::kExitAcceptance;
  return contactlab::kExitSuccess;
}
