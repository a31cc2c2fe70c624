#include "contactlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "contactlab/errors.hpp"
#include "contactlab/parallel.hpp"

namespace contactlab {

namespace {

EstimateWithError reduce_mean(const std::vector<double>& per_replica) {
  return mean_with_se(per_replica);
}

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

}  // namespace

GridEstimate estimate_pi(const ProcessParams& pp, const Configuration& initial,
                         const std::vector<double>& grid, std::size_t replicas,
                         std::uint64_t seed, unsigned threads, const SimCaps& caps) {
  if (grid.empty()) throw ConfigError("time grid must not be empty");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 0.0)
    throw ConfigError("time grid must be sorted and nonnegative");
  const std::size_t g = grid.size();
  std::vector<std::uint32_t> sizes(replicas * g, 0);
  std::vector<std::uint8_t> capped(replicas, 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    TrajectoryResult traj = simulate_sizes(pp, initial, grid, rng, caps);
    std::copy(traj.sizes.begin(), traj.sizes.end(), sizes.begin() + r * g);
    capped[r] = traj.reason == StopReason::capped ? 1 : 0;
  });
  GridEstimate out;
  out.times = grid;
  out.mean.resize(g);
  out.se.resize(g);
  out.counts.total = replicas;
  for (std::size_t r = 0; r < replicas; ++r) {
    out.counts.capped += capped[r];
    out.counts.extinct += sizes[r * g + (g - 1)] == 0 ? 1 : 0;
  }
  std::vector<double> column(replicas);
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t r = 0; r < replicas; ++r) column[r] = sizes[r * g + j];
    EstimateWithError e = reduce_mean(column);
    out.mean[j] = e.value;
    out.se[j] = e.se;
  }
  return out;
}

GrowthMethod parse_growth_method(const std::string& name) {
  if (name == "regression") return GrowthMethod::regression;
  if (name == "subadditive") return GrowthMethod::subadditive;
  throw ConfigError("unknown growth method '" + name + "'");
}

GrowthRateEstimate estimate_growth_rate(const GridEstimate& grid, GrowthMethod method,
                                        std::size_t tail_from) {
  GrowthRateEstimate out;
  out.method = method;
  out.tail_from = tail_from;
  out.counts = grid.counts;
  if (tail_from >= grid.times.size() || grid.times.size() - tail_from < 2)
    throw ConfigError("growth rate fit needs at least two grid points after burn in");
  for (std::size_t j = tail_from; j < grid.times.size(); ++j) {
    if (!(grid.mean[j] > 0.0))
      throw DataError("no surviving replicas at t=" + format_time(grid.times[j]) +
                      "; extend replicas or shorten the grid");
    if (!(grid.times[j] > 0.0))
      throw ConfigError("growth rate fit needs strictly positive times");
    out.fit_times.push_back(grid.times[j]);
    out.log_pi.push_back(std::log(grid.mean[j]));
    out.log_pi_se.push_back(std::max(grid.se[j] / grid.mean[j], 1e-12));
  }
  if (method == GrowthMethod::regression) {
    LineFit fit = weighted_line_fit(out.fit_times, out.log_pi, out.log_pi_se);
    out.r_hat = fit.slope;
    // inflate the interval when a line fits the tail poorly, so finite-time
    // curvature widens the half width instead of hiding behind tiny errors
    double scale = 1.0;
    if (fit.n > 2) scale = std::max(1.0, std::sqrt(fit.chi2 / (fit.n - 2)));
    out.half_width = fit.slope_se * scale;
    out.intercept = fit.intercept;
  } else {
    std::size_t best = 0;
    for (std::size_t j = 0; j < out.fit_times.size(); ++j)
      if (out.log_pi[j] / out.fit_times[j] < out.log_pi[best] / out.fit_times[best])
        best = j;
    out.r_hat = out.log_pi[best] / out.fit_times[best];
    out.half_width = out.log_pi_se[best] / out.fit_times[best];
  }
  return out;
}

SurvivalEstimate estimate_survival(const ProcessParams& pp, const Configuration& initial,
                                   double horizon, std::size_t escape_threshold,
                                   std::size_t replicas, std::uint64_t seed,
                                   unsigned threads, const SimCaps& caps) {
  // 0 extinct, 1 escaped, 2 alive at horizon, 3 capped
  std::vector<std::uint8_t> outcome(replicas, 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    SimResult res = simulate_escape(pp, initial, horizon, escape_threshold, rng, caps);
    switch (res.reason) {
      case StopReason::extinct: outcome[r] = 0; break;
      case StopReason::stopped: outcome[r] = 1; break;
      case StopReason::horizon: outcome[r] = res.state.empty() ? 0 : 2; break;
      case StopReason::capped: outcome[r] = 3; break;
    }
  });
  SurvivalEstimate out;
  out.replicas = replicas;
  out.horizon = horizon;
  out.escape_threshold = escape_threshold;
  for (std::uint8_t o : outcome) {
    if (o == 0) ++out.extinct;
    if (o == 1) ++out.escaped;
    if (o == 2) ++out.alive_at_horizon;
    if (o == 3) ++out.capped;
  }
  // capped replicas grew past the size cap, count them as survivors
  std::size_t survivors = out.escaped + out.alive_at_horizon + out.capped;
  EstimateWithError e = binomial_estimate(survivors, replicas);
  out.rho_hat = e.value;
  out.se = e.se;
  return out;
}

DeltaCEstimate estimate_delta_c(const RateKernel& kernel, const Configuration& initial,
                                double horizon, std::size_t escape_threshold,
                                std::size_t replicas, int depth, std::uint64_t seed,
                                unsigned threads, const SimCaps& caps) {
  DeltaCEstimate out;
  double total = kernel.total_rate();
  out.lower = 0.0;
  out.upper = total;
  if (total <= 0.0) return out;  // no infections, threshold is zero

  std::uint64_t probe_counter = 0;
  auto probe = [&](double delta, std::size_t n) {
    ProcessParams pp(kernel, delta);
    SurvivalEstimate s = estimate_survival(pp, initial, horizon, escape_threshold, n,
                                           mix_seed(seed, 0x6463ULL, probe_counter++),
                                           threads, caps);
    out.trace.push_back({delta, s.rho_hat, s.se, n});
    return s;
  };

  // decided survival: clearly positive by two standard errors, or clearly dead
  auto classify = [&](double delta) {
    std::size_t n = replicas;
    for (int attempt = 0; attempt < 3; ++attempt) {
      SurvivalEstimate s = probe(delta, n);
      if (s.rho_hat - 2.0 * s.se > 0.0) return 1;
      if (s.rho_hat == 0.0) return -1;
      n *= 2;  // ambiguous, retry with a larger budget
    }
    return 0;
  };

  int top = classify(out.upper);
  if (top == 1) {
    // survival persists at the total rate bound; report the unresolved bracket
    out.conclusive = false;
    return out;
  }
  for (int d = 0; d < depth; ++d) {
    double mid = 0.5 * (out.lower + out.upper);
    int c = classify(mid);
    if (c == 1) {
      out.lower = mid;
    } else if (c == -1) {
      out.upper = mid;
    } else {
      out.conclusive = false;
      break;
    }
  }
  return out;
}

Functional parse_functional(const std::string& name) {
  if (name == "cardinality") return Functional::cardinality;
  if (name == "nonempty") return Functional::nonempty;
  throw ConfigError("unknown functional '" + name + "' (use cardinality or nonempty)");
}

double observable_value(Functional f, const Configuration& state) {
  switch (f) {
    case Functional::cardinality: return static_cast<double>(state.size());
    case Functional::nonempty: return state.empty() ? 0.0 : 1.0;
  }
  return 0.0;
}

double generator_value(const ProcessParams& pp, Functional f, const Configuration& state) {
  switch (f) {
    case Functional::cardinality: {
      // infections onto empty sites raise the count, recoveries lower it
      const Group& group = pp.kernel.group();
      double flux = 0.0;
      for (const auto& site : state.items())
        for (const auto& e : pp.kernel.entries())
          if (!state.contains(group.compose(site, e.offset))) flux += e.rate;
      return flux - pp.delta * static_cast<double>(state.size());
    }
    case Functional::nonempty:
      // only the last recovery changes the indicator
      return state.size() == 1 ? -pp.delta : 0.0;
  }
  return 0.0;
}

namespace {

struct DriftObserver {
  const ProcessParams* pp;
  Functional f;
  double integral = 0.0;
  void segment(double t0, double t1, const Configuration& state) {
    integral += generator_value(*pp, f, state) * (t1 - t0);
  }
  bool stop(double, const Configuration&) { return false; }
};

}  // namespace

MartingaleCheck check_martingale_drift(const ProcessParams& pp, const Configuration& initial,
                                       double horizon, Functional f, std::size_t replicas,
                                       std::uint64_t seed, unsigned threads,
                                       const SimCaps& caps) {
  std::vector<double> residual(replicas, 0.0);
  std::vector<std::uint8_t> capped(replicas, 0);
  double f0 = observable_value(f, initial);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    DriftObserver obs{&pp, f};
    SimResult res = run_contact_process(pp, initial, horizon, rng, obs, caps);
    capped[r] = res.reason == StopReason::capped ? 1 : 0;
    residual[r] = observable_value(f, res.state) - f0 - obs.integral;
  });
  MartingaleCheck out;
  out.horizon = horizon;
  out.functional = f;
  std::vector<double> kept;
  kept.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    if (capped[r])
      ++out.capped;
    else
      kept.push_back(residual[r]);
  }
  out.residual = reduce_mean(kept);
  return out;
}

DominationEstimate estimate_domination(const ProcessParams& pp, const Configuration& initial,
                                       const std::vector<GroupElement>& pattern, double t,
                                       std::size_t replicas, std::uint64_t seed,
                                       unsigned threads, const SimCaps& caps) {
  if (pattern.empty()) throw ConfigError("domination pattern must not be empty");
  const Group& group = pp.kernel.group();
  GroupElement anchor_inv = group.inverse(pattern.front());
  // 0 extinct, 1 alive without a translate, 2 alive with one, 3 capped
  std::vector<std::uint8_t> outcome(replicas, 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    SimResult res = simulate_forward(pp, initial, t, rng, caps);
    if (res.reason == StopReason::capped) {
      outcome[r] = 3;
      return;
    }
    if (res.state.empty()) {
      outcome[r] = 0;
      return;
    }
    // a translate g*pattern fits inside the state only if g maps the anchor
    // onto an occupied site, so scanning the state covers all candidates
    bool found = false;
    for (const auto& x : res.state.items()) {
      GroupElement g = group.compose(x, anchor_inv);
      bool all = true;
      for (const auto& b : pattern)
        if (!res.state.contains(group.compose(g, b))) {
          all = false;
          break;
        }
      if (all) {
        found = true;
        break;
      }
    }
    outcome[r] = found ? 2 : 1;
  });
  DominationEstimate out;
  out.replicas = replicas;
  std::size_t hits = 0;
  for (std::uint8_t o : outcome) {
    if (o == 3) ++out.capped;
    if (o == 1 || o == 2) ++out.alive;
    if (o == 2) ++hits;
  }
  EstimateWithError e = binomial_estimate(hits, out.alive);
  out.p_hat = e.value;
  out.se = e.se;
  return out;
}

std::vector<EstimateWithError> estimate_avoidance(const ProcessParams& pp,
                                                  const Configuration& initial,
                                                  const std::vector<Configuration>& probes,
                                                  double t, std::size_t replicas,
                                                  std::uint64_t seed, unsigned threads,
                                                  const SimCaps& caps) {
  std::vector<std::uint32_t> miss(replicas * probes.size(), 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    SimResult res = simulate_forward(pp, initial, t, rng, caps);
    for (std::size_t k = 0; k < probes.size(); ++k)
      miss[r * probes.size() + k] = res.state.intersects(probes[k]) ? 0 : 1;
  });
  std::vector<EstimateWithError> out;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < replicas; ++r) hits += miss[r * probes.size() + k];
    out.push_back(binomial_estimate(hits, replicas));
  }
  return out;
}

std::vector<EstimateWithError> estimate_rising_moments(const ProcessParams& pp,
                                                       const Configuration& initial,
                                                       double t, const std::vector<int>& ks,
                                                       std::size_t replicas,
                                                       std::uint64_t seed, unsigned threads,
                                                       const SimCaps& caps) {
  std::vector<std::uint32_t> sizes(replicas, 0);
  std::vector<double> grid{t};
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    TrajectoryResult traj = simulate_sizes(pp, initial, grid, rng, caps);
    sizes[r] = traj.sizes[0];
  });
  std::vector<EstimateWithError> out;
  std::vector<double> values(replicas);
  for (int k : ks) {
    for (std::size_t r = 0; r < replicas; ++r) {
      double z = sizes[r];
      double prod = 1.0;
      for (int i = 0; i < k; ++i) prod *= z + i;
      values[r] = prod;
    }
    out.push_back(reduce_mean(values));
  }
  return out;
}

}  // namespace contactlab
