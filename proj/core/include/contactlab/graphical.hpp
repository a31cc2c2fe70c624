#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contactlab/configuration.hpp"
#include "contactlab/rate_kernel.hpp"
#include "contactlab/rng.hpp"

namespace contactlab {

// Poisson marks attached to one site over the window horizon: recovery times
// and outgoing infection arrows (time, kernel entry index), each sorted.
struct SiteEvents {
  std::vector<double> recoveries;
  std::vector<std::pair<double, std::uint32_t>> arrows;
};

struct SpaceTimePoint {
  GroupElement site;
  double time;
};

// Graphical representation over [0, horizon]. Site processes are realized
// lazily; every site draws from its own substream keyed by (seed, replica,
// site hash), so realizations do not depend on query order and a window can
// be traversed forwards and backwards over the same randomness.
class GraphicalWindow {
 public:
  GraphicalWindow(ProcessParams params, double horizon, std::uint64_t seed,
                  std::uint64_t replica);

  const ProcessParams& params() const { return params_; }
  double horizon() const { return horizon_; }
  std::size_t realized_sites() const { return cache_.size(); }

  const SiteEvents& events_for(const GroupElement& site);

 private:
  ProcessParams params_;
  double horizon_;
  std::uint64_t seed_;
  std::uint64_t replica_;
  std::unordered_map<GroupElement, SiteEvents, ElementHash> cache_;
};

// state at t1 of the process started from `initial` at t0 <= t1, read off the
// window by walking arrows upward in time and stopping at recovery marks
Configuration window_forward(GraphicalWindow& window, const Configuration& initial,
                             double t0, double t1);

// sites at time t0 from which some open path reaches target x {t1}
Configuration window_dual(GraphicalWindow& window, const Configuration& target,
                          double t1, double t0);

bool path_exists(GraphicalWindow& window, const SpaceTimePoint& from,
                 const SpaceTimePoint& to);

}  // namespace contactlab
