#include "contactlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "contactlab/errors.hpp"
#include "contactlab/parallel.hpp"

namespace contactlab {

namespace {

struct Particle {
  GroupElement pos;
  bool leader;  // distinguished particle backing an infected site
};

}  // namespace

BranchingResult simulate_branching_coupled(const ProcessParams& pp,
                                           const Configuration& initial, double horizon,
                                           Rng& rng, std::size_t population_cap) {
  const Group& group = pp.kernel.group();
  const double unit = pp.kernel.total_rate() + pp.delta;

  std::vector<Particle> parts;
  Configuration contact;
  std::unordered_map<GroupElement, std::size_t, ElementHash> leader_at;
  for (const auto& site : initial.items()) {
    if (contact.contains(site)) continue;
    contact.insert(site);
    leader_at.emplace(site, parts.size());
    parts.push_back({site, true});
  }

  BranchingResult out;
  double t = 0.0;
  while (!parts.empty() && unit > 0.0) {
    double dt = rng.exponential(unit * static_cast<double>(parts.size()));
    if (t + dt >= horizon) break;
    t += dt;
    std::size_t k = rng.uniform_index(parts.size());
    double u = rng.uniform() * unit;
    if (u < pp.delta) {
      if (parts[k].leader) {
        contact.erase(parts[k].pos);
        leader_at.erase(parts[k].pos);
      }
      parts[k] = parts.back();
      parts.pop_back();
      if (k < parts.size() && parts[k].leader) leader_at[parts[k].pos] = k;
    } else {
      GroupElement child = group.compose(parts[k].pos, pp.kernel.offset_at(u - pp.delta));
      bool lead = parts[k].leader && !contact.contains(child);
      if (lead) {
        contact.insert(child);
        leader_at.emplace(child, parts.size());
      }
      parts.push_back({std::move(child), lead});
      if (parts.size() > population_cap) {
        out.capped = true;
        break;
      }
    }
  }
  out.time = out.capped ? t : horizon;
  out.population = static_cast<std::int64_t>(parts.size());

  std::map<GroupElement, std::int64_t> tally;
  for (const auto& p : parts) ++tally[p.pos];
  out.counts.assign(tally.begin(), tally.end());
  out.dominated = true;
  for (const auto& site : contact.items())
    if (!tally.count(site)) out.dominated = false;
  out.contact = std::move(contact);
  return out;
}

BranchingStats estimate_branching(const ProcessParams& pp, const Configuration& initial,
                                  double horizon, const std::vector<GroupElement>& probes,
                                  std::size_t replicas, std::uint64_t seed,
                                  unsigned threads, std::size_t population_cap) {
  std::vector<std::vector<double>> probe_counts(probes.size(),
                                                std::vector<double>(replicas, 0.0));
  std::vector<double> population(replicas, 0.0);
  std::vector<std::uint8_t> violated(replicas, 0), capped(replicas, 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    BranchingResult res =
        simulate_branching_coupled(pp, initial, horizon, rng, population_cap);
    population[r] = static_cast<double>(res.population);
    violated[r] = res.dominated ? 0 : 1;
    capped[r] = res.capped ? 1 : 0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      auto it = std::lower_bound(
          res.counts.begin(), res.counts.end(), probes[i],
          [](const auto& entry, const GroupElement& g) { return entry.first < g; });
      if (it != res.counts.end() && it->first == probes[i])
        probe_counts[i][r] = static_cast<double>(it->second);
    }
  });
  BranchingStats out;
  out.probes = probes;
  out.replicas = replicas;
  out.population = mean_with_se(population);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    EstimateWithError e = mean_with_se(probe_counts[i]);
    out.mean.push_back(e.value);
    out.se.push_back(e.se);
  }
  for (std::size_t r = 0; r < replicas; ++r) {
    out.dominance_violations += violated[r];
    out.capped += capped[r];
  }
  return out;
}

WalkPath simulate_rate_walk(const RateKernel& kernel, double horizon, Rng& rng) {
  const Group& group = kernel.group();
  WalkPath path;
  path.positions.push_back(group.identity());
  path.times.push_back(0.0);
  if (kernel.total_rate() <= 0.0) return path;
  double t = 0.0;
  while (true) {
    t += rng.exponential(kernel.total_rate());
    if (t >= horizon) return path;
    path.positions.push_back(group.compose(path.positions.back(), kernel.sample_offset(rng)));
    path.times.push_back(t);
  }
}

WalkStats estimate_walk(const RateKernel& kernel, double horizon,
                        const std::vector<GroupElement>& probes, double tail_radius,
                        std::size_t replicas, std::uint64_t seed, unsigned threads) {
  const Group& group = kernel.group();
  std::vector<std::vector<double>> hits(probes.size(), std::vector<double>(replicas, 0.0));
  std::vector<double> tail(replicas, 0.0), jumps(replicas, 0.0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    WalkPath path = simulate_rate_walk(kernel, horizon, rng);
    const GroupElement& end = path.positions.back();
    jumps[r] = static_cast<double>(path.positions.size() - 1);
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (end == probes[i]) hits[i][r] = 1.0;
    if (tail_radius >= 0.0 &&
        static_cast<double>(group.word_norm(end)) > tail_radius)
      tail[r] = 1.0;
  });
  WalkStats out;
  out.probes = probes;
  out.replicas = replicas;
  out.tail_radius = tail_radius;
  out.jumps = mean_with_se(jumps);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    EstimateWithError e = mean_with_se(hits[i]);
    out.prob.push_back(e.value);
    out.se.push_back(e.se);
  }
  EstimateWithError te = mean_with_se(tail);
  out.tail_prob = te.value;
  out.tail_se = te.se;
  return out;
}

SplitBound split_bound_check(const ProcessParams& pp, const Configuration& initial,
                             double horizon, double h, std::size_t replicas,
                             std::uint64_t seed, unsigned threads, const SimCaps& caps) {
  if (!(h > 0.0)) throw ConfigError("split bound requires h > 0");
  SplitBound out;
  out.horizon = horizon;
  out.h = h;
  out.ball_radius = static_cast<int>(std::floor(h * horizon));
  out.ball_size =
      static_cast<double>(pp.kernel.group().ball(out.ball_radius).size());

  std::vector<double> sizes(replicas, 0.0);
  std::vector<std::uint8_t> capped(replicas, 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    SimResult res = simulate_forward(pp, initial, horizon, rng, caps);
    sizes[r] = static_cast<double>(res.state.size());
    capped[r] = res.reason == StopReason::capped ? 1 : 0;
  });
  EstimateWithError lhs = mean_with_se(sizes);
  out.lhs_mean = lhs.value;
  out.lhs_se = lhs.se;
  for (std::size_t r = 0; r < replicas; ++r) out.capped += capped[r];

  // tail weight summed over walks recentered at each initial site
  const Group& group = pp.kernel.group();
  const double ht = h * horizon;
  std::vector<double> tail(replicas, 0.0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, 0x77616cULL, r));
    WalkPath path = simulate_rate_walk(pp.kernel, horizon, rng);
    for (const auto& x : initial.items()) {
      GroupElement end = group.compose(x, path.positions.back());
      if (static_cast<double>(group.word_norm(end)) > ht) tail[r] += 1.0;
    }
  });
  EstimateWithError te = mean_with_se(tail);
  out.tail_prob = te.value;
  out.tail_se = te.se;
  out.growth_factor = std::exp((pp.kernel.total_rate() - pp.delta) * horizon);
  out.rhs = out.ball_size + out.tail_prob * out.growth_factor;
  double combined =
      std::sqrt(out.lhs_se * out.lhs_se +
                out.tail_se * out.growth_factor * out.tail_se * out.growth_factor);
  out.slack = out.rhs + 3.0 * combined - out.lhs_mean;
  out.holds = out.slack >= 0.0;
  return out;
}

const char* to_string(GrowthClass c) {
  return c == GrowthClass::exponential_like ? "exponential-like" : "polynomial-like";
}

BallProfile ball_growth_profile(const Group& group, int max_radius, double threshold,
                                std::size_t cap) {
  if (max_radius < 0) throw ConfigError("ball profile radius must be nonnegative");
  BallProfile out;
  out.threshold = threshold;
  bool saturated = false;
  for (int n = 0; n <= max_radius; ++n) {
    std::size_t count = 0;
    try {
      count = group.ball(n, cap).size();
    } catch (const CapExceeded&) {
      out.complete = false;
      break;
    }
    out.radii.push_back(n);
    out.counts.push_back(count);
    out.rate.push_back(n == 0 ? 0.0
                              : std::log(static_cast<double>(count) /
                                         static_cast<double>(out.counts[n - 1])));
    if (group.is_finite() && count == group.order()) {
      saturated = true;  // the whole group is enumerated; growth has stopped
      break;
    }
  }
  std::size_t k = out.radii.size();
  if (!saturated && k >= 3) {
    bool exponential = true;
    for (std::size_t i = k - 3; i < k; ++i)
      if (out.rate[i] <= threshold) exponential = false;
    out.classification =
        exponential ? GrowthClass::exponential_like : GrowthClass::polynomial_like;
  }
  return out;
}

OverlapDecay rw_overlap_decay(const Group& group, const std::vector<OverlapSample>& samples,
                              std::size_t m_max, std::size_t walks_per_sample,
                              std::size_t fit_lo, std::size_t fit_hi, std::uint64_t seed,
                              unsigned threads) {
  if (samples.empty()) throw DataError("overlap decay needs a nonempty ensemble");
  if (walks_per_sample == 0) throw ConfigError("walks per sample must be positive");
  if (fit_hi > m_max || fit_lo >= fit_hi) throw ConfigError("bad overlap fit window");

  // symmetric uniform step set from the group generators
  std::vector<GroupElement> steps;
  for (const auto& g : group.generators()) {
    GroupElement inv = group.inverse(g);
    if (std::find(steps.begin(), steps.end(), g) == steps.end()) steps.push_back(g);
    if (std::find(steps.begin(), steps.end(), inv) == steps.end()) steps.push_back(inv);
  }
  if (steps.empty()) throw ConfigError("group has no generators to walk on");

  const std::size_t S = samples.size();
  // per-sample mean hit series, averaged afterwards in index order
  std::vector<std::vector<double>> series(S);
  parallel_replicas(S, threads, [&](std::size_t s) {
    Rng rng(mix_seed(seed, kStreamReplica, s));
    const Configuration& state = samples[s].state;
    std::vector<double> acc(m_max + 1, 0.0);
    for (std::size_t w = 0; w < walks_per_sample; ++w) {
      GroupElement pos = samples[s].typical;
      acc[0] += state.contains(pos) ? 1.0 : 0.0;
      for (std::size_t m = 1; m <= m_max; ++m) {
        pos = group.compose(pos, steps[rng.uniform_index(steps.size())]);
        acc[m] += state.contains(pos) ? 1.0 : 0.0;
      }
    }
    for (auto& a : acc) a /= static_cast<double>(walks_per_sample);
    series[s] = std::move(acc);
  });

  OverlapDecay out;
  out.samples = S;
  out.walks_per_sample = walks_per_sample;
  out.fit_lo = fit_lo;
  out.fit_hi = fit_hi;
  out.p.resize(m_max + 1);
  out.se.resize(m_max + 1);
  std::vector<double> column(S);
  for (std::size_t m = 0; m <= m_max; ++m) {
    for (std::size_t s = 0; s < S; ++s) column[s] = series[s][m];
    EstimateWithError e = mean_with_se(column);
    out.p[m] = e.value;
    out.se[m] = e.se;
  }

  auto fit_theta = [&](const std::vector<double>& p,
                       const std::vector<double>& se) -> double {
    std::vector<double> xs, ys, sig;
    for (std::size_t m = fit_lo; m <= fit_hi; ++m) {
      if (!(p[m] > 0.0)) continue;
      xs.push_back(static_cast<double>(m));
      ys.push_back(std::log(p[m]));
      sig.push_back(std::max(se[m] / p[m], 1e-9));
    }
    if (xs.size() < 2) throw DataError("overlap series too short or too sparse to fit");
    return std::exp(weighted_line_fit(xs, ys, sig).slope);
  };
  out.theta_hat = fit_theta(out.p, out.se);

  // the series entries share samples, so the fit error comes from refitting
  // disjoint sample batches rather than from the per-point errors
  const std::size_t batches = std::min<std::size_t>(10, S / 2);
  if (batches >= 2) {
    std::vector<double> thetas;
    for (std::size_t b = 0; b < batches; ++b) {
      std::vector<double> bp(m_max + 1, 0.0), bse(m_max + 1, 1.0);
      std::size_t members = 0;
      for (std::size_t s = b; s < S; s += batches) ++members;
      if (members == 0) continue;
      for (std::size_t m = 0; m <= m_max; ++m) {
        for (std::size_t s = b; s < S; s += batches) bp[m] += series[s][m];
        bp[m] /= static_cast<double>(members);
      }
      try {
        thetas.push_back(fit_theta(bp, bse));
      } catch (const DataError&) {
        // sparse batch; skip it
      }
    }
    if (thetas.size() >= 2) out.theta_se = mean_with_se(thetas).se;
  }
  if (out.theta_se <= 0.0) {
    // fall back to the independent-point error when batching is impossible
    std::vector<double> xs, ys, sig;
    for (std::size_t m = fit_lo; m <= fit_hi; ++m) {
      if (!(out.p[m] > 0.0)) continue;
      xs.push_back(static_cast<double>(m));
      ys.push_back(std::log(out.p[m]));
      sig.push_back(std::max(out.se[m] / out.p[m], 1e-9));
    }
    LineFit fit = weighted_line_fit(xs, ys, sig);
    out.theta_se = out.theta_hat * fit.slope_se;
  }
  return out;
}

}  // namespace contactlab
