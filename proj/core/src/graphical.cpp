#include "contactlab/graphical.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "contactlab/errors.hpp"

namespace contactlab {

GraphicalWindow::GraphicalWindow(ProcessParams params, double horizon,
                                 std::uint64_t seed, std::uint64_t replica)
    : params_(std::move(params)), horizon_(horizon), seed_(seed), replica_(replica) {
  if (!(horizon_ >= 0.0)) throw ConfigError("window horizon must be nonnegative");
}

const SiteEvents& GraphicalWindow::events_for(const GroupElement& site) {
  auto it = cache_.find(site);
  if (it != cache_.end()) return it->second;
  // distinct sites share a stream only on a 64 bit hash collision
  Rng rng(mix_seed(seed_, kStreamWindowSite, replica_, ElementHash{}(site)));
  SiteEvents ev;
  long n_rec = rng.poisson(params_.delta * horizon_);
  ev.recoveries.reserve(static_cast<std::size_t>(n_rec));
  for (long i = 0; i < n_rec; ++i) ev.recoveries.push_back(rng.uniform() * horizon_);
  std::sort(ev.recoveries.begin(), ev.recoveries.end());
  const auto& entries = params_.kernel.entries();
  for (std::uint32_t k = 0; k < entries.size(); ++k) {
    long n_arr = rng.poisson(entries[k].rate * horizon_);
    for (long i = 0; i < n_arr; ++i) ev.arrows.push_back({rng.uniform() * horizon_, k});
  }
  std::sort(ev.arrows.begin(), ev.arrows.end());
  return cache_.emplace(site, std::move(ev)).first->second;
}

namespace {

struct Event {
  double time;
  std::uint64_t seq;  // deterministic tie break
  GroupElement site;
  std::int32_t arrow_entry;  // -1 for recovery marks
};

struct ForwardOrder {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;  // min heap
    return a.seq > b.seq;
  }
};

struct BackwardOrder {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time < b.time;  // max heap
    return a.seq < b.seq;
  }
};

}  // namespace

Configuration window_forward(GraphicalWindow& window, const Configuration& initial,
                             double t0, double t1) {
  if (!(0.0 <= t0 && t0 <= t1 && t1 <= window.horizon()))
    throw ConfigError("window_forward times outside the window");
  const Group& group = window.params().kernel.group();
  const auto& entries = window.params().kernel.entries();

  std::priority_queue<Event, std::vector<Event>, ForwardOrder> queue;
  std::unordered_set<GroupElement, ElementHash> realized;
  std::uint64_t seq = 0;

  auto realize = [&](const GroupElement& site, double after) {
    if (!realized.insert(site).second) return;
    const SiteEvents& ev = window.events_for(site);
    for (double r : ev.recoveries)
      if (r > after && r <= t1) queue.push({r, seq++, site, -1});
    for (const auto& [time, entry] : ev.arrows)
      if (time > after && time <= t1)
        queue.push({time, seq++, site, static_cast<std::int32_t>(entry)});
  };

  Configuration cur = initial;
  for (const auto& site : initial.items()) realize(site, t0);

  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    if (ev.arrow_entry < 0) {
      cur.erase(ev.site);
    } else if (cur.contains(ev.site)) {
      GroupElement target =
          group.compose(ev.site, entries[static_cast<std::size_t>(ev.arrow_entry)].offset);
      if (cur.insert(target)) realize(target, ev.time);
    }
  }
  return cur;
}

Configuration window_dual(GraphicalWindow& window, const Configuration& target,
                          double t1, double t0) {
  if (!(0.0 <= t0 && t0 <= t1 && t1 <= window.horizon()))
    throw ConfigError("window_dual times outside the window");
  const Group& group = window.params().kernel.group();
  const auto& entries = window.params().kernel.entries();

  std::priority_queue<Event, std::vector<Event>, BackwardOrder> queue;
  std::unordered_set<GroupElement, ElementHash> realized;
  std::uint64_t seq = 0;

  auto realize = [&](const GroupElement& site, double before) {
    if (!realized.insert(site).second) return;
    const SiteEvents& ev = window.events_for(site);
    for (double r : ev.recoveries)
      if (r > t0 && r < before) queue.push({r, seq++, site, -1});
    for (const auto& [time, entry] : ev.arrows)
      if (time > t0 && time < before)
        queue.push({time, seq++, site, static_cast<std::int32_t>(entry)});
  };

  // joining the dual set at time s requires the site's own marks below s and
  // the arrows of every potential infector, which are sites shifted by the
  // inverses of the kernel offsets
  Configuration cur;
  auto join = [&](const GroupElement& site, double s) {
    if (!cur.insert(site)) return;
    realize(site, s);
    for (const auto& e : entries) realize(group.compose(site, group.inverse(e.offset)), s);
  };

  for (const auto& site : target.items()) join(site, t1);

  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    if (ev.arrow_entry < 0) {
      cur.erase(ev.site);
    } else {
      GroupElement arrow_target =
          group.compose(ev.site, entries[static_cast<std::size_t>(ev.arrow_entry)].offset);
      if (cur.contains(arrow_target)) join(ev.site, ev.time);
    }
  }
  return cur;
}

bool path_exists(GraphicalWindow& window, const SpaceTimePoint& from,
                 const SpaceTimePoint& to) {
  Configuration start;
  start.insert(from.site);
  return window_forward(window, start, from.time, to.time).contains(to.site);
}

}  // namespace contactlab
