#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "contactlab/configuration.hpp"
#include "contactlab/rate_kernel.hpp"
#include "contactlab/rng.hpp"

namespace contactlab {

struct SimCaps {
  std::size_t max_infected = 1'000'000;
};

enum class StopReason { horizon, extinct, capped, stopped };

struct SimResult {
  StopReason reason;
  double time;
  Configuration state;
};

// Minimal observer; custom observers implement the same two members.
struct NullObserver {
  // the configuration equalled `state` on [t0, t1)
  void segment(double, double, const Configuration&) {}
  // checked after every state change; returning true ends the run
  bool stop(double, const Configuration&) { return false; }
};

// Event driven simulation of the infection/recovery dynamics. Every infected
// site carries rate total_rate + delta, so event times are exponential with
// rate |state| * (total_rate + delta); one uniform selects the site and a
// second selects recovery versus an infection offset. Infection attempts onto
// occupied sites consume an event without changing state, which keeps the law
// exact. Cost is O(1) per event.
template <class Observer>
SimResult run_contact_process(const ProcessParams& pp, Configuration initial,
                              double horizon, Rng& rng, Observer&& observe,
                              const SimCaps& caps = {}) {
  const Group& group = pp.kernel.group();
  const double unit = pp.kernel.total_rate() + pp.delta;
  Configuration cur = std::move(initial);
  double t = 0.0;
  if (unit <= 0.0) {  // frozen dynamics
    observe.segment(t, horizon, cur);
    return {StopReason::horizon, horizon, std::move(cur)};
  }
  while (true) {
    if (cur.empty()) {
      observe.segment(t, horizon, cur);
      return {StopReason::extinct, t, std::move(cur)};
    }
    double dt = rng.exponential(unit * static_cast<double>(cur.size()));
    double t_next = t + dt;
    if (t_next >= horizon) {
      observe.segment(t, horizon, cur);
      return {StopReason::horizon, horizon, std::move(cur)};
    }
    observe.segment(t, t_next, cur);
    t = t_next;
    std::size_t idx = rng.uniform_index(cur.size());
    double u = rng.uniform() * unit;
    if (u < pp.delta) {
      GroupElement site = cur.at(idx);
      cur.erase(site);
    } else {
      GroupElement target = group.compose(cur.at(idx), pp.kernel.offset_at(u - pp.delta));
      cur.insert(target);
    }
    if (cur.size() > caps.max_infected) return {StopReason::capped, t, std::move(cur)};
    if (observe.stop(t, cur)) return {StopReason::stopped, t, std::move(cur)};
  }
}

// state at the horizon (or at extinction/cap)
SimResult simulate_forward(const ProcessParams& pp, const Configuration& initial,
                           double horizon, Rng& rng, const SimCaps& caps = {});

struct TrajectoryResult {
  std::vector<std::uint32_t> sizes;  // |state| at each grid time
  StopReason reason = StopReason::horizon;
  double end_time = 0.0;
};

// sizes sampled on a sorted time grid; after a cap the last configuration is
// frozen into the remaining grid slots and the reason records the truncation
TrajectoryResult simulate_sizes(const ProcessParams& pp, const Configuration& initial,
                                const std::vector<double>& grid, Rng& rng,
                                const SimCaps& caps = {});

// run until extinction, escape above the threshold, or the horizon
SimResult simulate_escape(const ProcessParams& pp, const Configuration& initial,
                          double horizon, std::size_t escape_threshold, Rng& rng,
                          const SimCaps& caps = {});

}  // namespace contactlab
