#include "contactlab/simulator.hpp"

#include <algorithm>

namespace contactlab {

SimResult simulate_forward(const ProcessParams& pp, const Configuration& initial,
                           double horizon, Rng& rng, const SimCaps& caps) {
  NullObserver obs;
  return run_contact_process(pp, initial, horizon, rng, obs, caps);
}

namespace {

struct GridObserver {
  const std::vector<double>* grid;
  std::vector<std::uint32_t>* sizes;
  std::size_t next = 0;

  void segment(double, double t1, const Configuration& state) {
    while (next < grid->size() && (*grid)[next] < t1) {
      (*sizes)[next] = static_cast<std::uint32_t>(state.size());
      ++next;
    }
  }
  bool stop(double, const Configuration&) { return false; }
};

}  // namespace

TrajectoryResult simulate_sizes(const ProcessParams& pp, const Configuration& initial,
                                const std::vector<double>& grid, Rng& rng,
                                const SimCaps& caps) {
  TrajectoryResult out;
  out.sizes.assign(grid.size(), 0);
  double horizon = grid.empty() ? 0.0 : grid.back();
  GridObserver obs{&grid, &out.sizes};
  SimResult res = run_contact_process(pp, initial, horizon, rng, obs, caps);
  for (std::size_t i = obs.next; i < grid.size(); ++i)
    out.sizes[i] = static_cast<std::uint32_t>(res.state.size());
  out.reason = res.reason;
  out.end_time = res.time;
  return out;
}

namespace {

struct EscapeObserver {
  std::size_t threshold;
  void segment(double, double, const Configuration&) {}
  bool stop(double, const Configuration& state) { return state.size() >= threshold; }
};

}  // namespace

SimResult simulate_escape(const ProcessParams& pp, const Configuration& initial,
                          double horizon, std::size_t escape_threshold, Rng& rng,
                          const SimCaps& caps) {
  EscapeObserver obs{escape_threshold};
  return run_contact_process(pp, initial, horizon, rng, obs, caps);
}

}  // namespace contactlab
