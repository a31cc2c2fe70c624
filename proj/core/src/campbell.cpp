#include "contactlab/campbell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "contactlab/errors.hpp"
#include "contactlab/mobius.hpp"
#include "contactlab/parallel.hpp"

namespace contactlab {

CampbellEnsemble sample_campbell(const ProcessParams& pp, const Configuration& initial,
                                 double time_param, bool exponential_time,
                                 std::size_t replicas, std::uint64_t seed,
                                 unsigned threads, const SimCaps& caps) {
  if (!(time_param > 0.0)) throw ConfigError("campbell time parameter must be positive");
  std::vector<WeightedConfig> states(replicas);
  std::vector<std::uint8_t> capped(replicas, 0);
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    double horizon = time_param;
    if (exponential_time) horizon = rng.exponential(1.0 / time_param);
    SimResult res = simulate_forward(pp, initial, horizon, rng, caps);
    capped[r] = res.reason == StopReason::capped ? 1 : 0;
    states[r].weight = static_cast<double>(res.state.size());
    states[r].state = std::move(res.state);
  });
  CampbellEnsemble out;
  out.replicas = replicas;
  out.time_param = time_param;
  out.exponential_time = exponential_time;
  for (std::size_t r = 0; r < replicas; ++r) {
    out.capped += capped[r];
    if (states[r].weight <= 0.0) {
      ++out.extinct;
      continue;
    }
    out.weight_sum += states[r].weight;
    out.samples.push_back(std::move(states[r]));
  }
  return out;
}

RecenteredSample recenter_at_typical(const Group& group, const WeightedConfig& sample,
                                     Rng& rng) {
  if (sample.state.empty()) throw DataError("cannot recenter an empty configuration");
  const GroupElement& site = sample.state.at(rng.uniform_index(sample.state.size()));
  GroupElement inv = group.inverse(site);
  RecenteredSample out;
  out.origin_site = site;
  out.weight = sample.weight;
  for (const auto& x : sample.state.items()) out.state.insert(group.compose(inv, x));
  return out;
}

std::vector<std::size_t> resample_indices(const std::vector<double>& weights,
                                          std::size_t n, Rng& rng) {
  std::vector<double> cumulative;
  cumulative.reserve(weights.size());
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DataError("resampling weights must be nonnegative");
    total += w;
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw DataError("resampling needs positive total weight");
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx >= weights.size()) idx = weights.size() - 1;
    out.push_back(idx);
  }
  return out;
}

std::vector<double> campbell_window_pattern(const Group& group,
                                            const CampbellEnsemble& ensemble,
                                            const std::vector<GroupElement>& window) {
  if (window.empty() || window.size() > 16) throw ConfigError("window size out of range");
  std::vector<double> mass(std::size_t{1} << window.size(), 0.0);
  double total = 0.0;
  for (const auto& sample : ensemble.samples) {
    // average over every choice of the typical site: each site contributes
    // weight one to the pattern seen from it
    for (const auto& site : sample.state.items()) {
      std::size_t pattern = 0;
      for (std::size_t b = 0; b < window.size(); ++b)
        if (sample.state.contains(group.compose(site, window[b])))
          pattern |= std::size_t{1} << b;
      mass[pattern] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0)
    for (auto& m : mass) m /= total;
  return mass;
}

InvariantWindowEstimate invariant_window_distribution(
    const ProcessParams& pp, const std::vector<GroupElement>& window, double horizon,
    std::size_t escape_threshold, std::size_t replicas, std::uint64_t seed,
    unsigned threads, double negative_tol, const SimCaps& caps) {
  if (window.empty()) throw ConfigError("window must not be empty");
  if (window.size() > 5) throw ConfigError("invariant window limited to 5 sites");
  for (std::size_t i = 0; i < window.size(); ++i)
    for (std::size_t j = i + 1; j < window.size(); ++j)
      if (window[i] == window[j]) throw ConfigError("window sites must be distinct");

  InvariantWindowEstimate out;
  out.window = window;
  const std::size_t m = std::size_t{1} << window.size();
  ProcessParams dual = pp.reversed();

  // avoidance probability of each subset from the survival of the reversed
  // process started there
  std::vector<double> avoid(m, 1.0), avoid_var(m, 0.0);
  out.subset_survival.resize(m);
  for (std::size_t mask = 1; mask < m; ++mask) {
    Configuration start;
    for (std::size_t b = 0; b < window.size(); ++b)
      if (mask & (std::size_t{1} << b)) start.insert(window[b]);
    SurvivalEstimate s =
        estimate_survival(dual, start, horizon, escape_threshold, replicas,
                          mix_seed(seed, 0x696e76ULL, mask), threads, caps);
    out.subset_survival[mask] = s;
    avoid[mask] = 1.0 - s.rho_hat;
    avoid_var[mask] = s.se * s.se;
  }
  for (std::size_t b = 0; b < window.size(); ++b) {
    const SurvivalEstimate& s = out.subset_survival[std::size_t{1} << b];
    if (s.rho_hat - 2.0 * s.se > 0.0) out.dual_survives = true;
  }

  // pattern(S) = sum over U subset of S of (-1)^{|S|-|U|} avoid(complement U)
  std::vector<double> pattern(m), var(m, 0.0);
  for (std::size_t u = 0; u < m; ++u) pattern[u] = avoid[(m - 1) ^ u];
  subset_mobius(pattern);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t u = s;; u = (u - 1) & s) {
      var[s] += avoid_var[(m - 1) ^ u];
      if (u == 0) break;
    }

  double clip = 0.0, sum = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    if (pattern[s] < 0.0) {
      if (pattern[s] < -negative_tol) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", pattern[s]);
        throw DataError(std::string("inconsistent inputs: pattern mass ") + buf +
                        " below -tolerance");
      }
      clip += -pattern[s];
      pattern[s] = 0.0;
    }
    sum += pattern[s];
  }
  if (!(sum > 0.0)) throw DataError("window pattern distribution vanished");
  for (auto& p : pattern) p /= sum;
  out.pattern = std::move(pattern);
  out.clip_mass = clip;
  out.pattern_se.resize(m);
  for (std::size_t s = 0; s < m; ++s) out.pattern_se[s] = std::sqrt(var[s]);
  return out;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("total variation needs equal supports");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return 0.5 * acc;
}

CampbellTrend campbell_vs_invariant(const ProcessParams& pp, const Configuration& initial,
                                    const std::vector<GroupElement>& window,
                                    const std::vector<double>& time_params,
                                    bool exponential_time, std::size_t replicas,
                                    double invariant_horizon,
                                    std::size_t escape_threshold,
                                    std::size_t invariant_replicas, std::uint64_t seed,
                                    unsigned threads, const SimCaps& caps) {
  const Group& group = pp.kernel.group();
  // the comparison conditions on the identity, so make it part of the window
  std::vector<GroupElement> full_window = window;
  GroupElement id = group.identity();
  if (std::find(full_window.begin(), full_window.end(), id) == full_window.end())
    full_window.insert(full_window.begin(), id);

  CampbellTrend out;
  out.target = invariant_window_distribution(pp, full_window, invariant_horizon,
                                             escape_threshold, invariant_replicas,
                                             mix_seed(seed, 0x746172ULL), threads,
                                             1e-2, caps);
  if (!out.target.dual_survives)
    throw DataError(
        "reversed process dies out; the upper invariant law is trivial and the "
        "comparison is refused");

  // condition the window law on the identity being infected
  std::size_t id_bit = 0;
  for (std::size_t b = 0; b < full_window.size(); ++b)
    if (full_window[b] == id) id_bit = std::size_t{1} << b;
  std::vector<double> target = out.target.pattern;
  double cond = 0.0;
  for (std::size_t s = 0; s < target.size(); ++s) {
    if (!(s & id_bit)) target[s] = 0.0;
    cond += target[s];
  }
  if (!(cond > 0.0)) throw DataError("conditioning mass vanished");
  for (auto& p : target) p /= cond;

  const std::size_t batches = 10;
  for (std::size_t i = 0; i < time_params.size(); ++i) {
    CampbellEnsemble ens =
        sample_campbell(pp, initial, time_params[i], exponential_time, replicas,
                        mix_seed(seed, 0x747076ULL, i), threads, caps);
    std::vector<double> pattern = campbell_window_pattern(group, ens, full_window);
    out.time_params.push_back(time_params[i]);
    out.tv.push_back(total_variation(pattern, target));
    // batch the samples for a dispersion estimate of the distance itself
    std::vector<double> batch_tv;
    for (std::size_t b = 0; b < batches; ++b) {
      CampbellEnsemble part;
      for (std::size_t k = b; k < ens.samples.size(); k += batches)
        part.samples.push_back(ens.samples[k]);
      if (part.samples.empty()) continue;
      batch_tv.push_back(total_variation(campbell_window_pattern(group, part, full_window),
                                         target));
    }
    EstimateWithError e = mean_with_se(batch_tv);
    out.tv_se.push_back(e.se);
  }
  return out;
}

CampbellOracle campbell_oracle(const ExactProcess& oracle, double t) {
  const std::size_t m = oracle.n_states();
  const std::size_t n = oracle.n_sites();
  CampbellOracle out;
  out.recentered.assign(m, 0.0);
  out.conditioned.assign(m, 0.0);

  // identity is site 0 in ball order
  std::vector<double> p = oracle.distribution(oracle.state_of([&] {
                                                Configuration c;
                                                c.insert(oracle.sites()[0]);
                                                return c;
                                              }()),
                                              t);
  double mean_size = 0.0;
  for (std::size_t s = 0; s < m; ++s) mean_size += p[s] * ExactProcess::state_size(s);
  out.mean_size = mean_size;
  for (std::size_t s = 0; s < m; ++s) {
    if (p[s] <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (s & (std::size_t{1} << i)) out.recentered[oracle.recenter_state(s, i)] += p[s];
  }
  for (auto& v : out.recentered) v /= mean_size;

  // law summed over all starting sites, conditioned on the identity infected
  std::vector<double> mu(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Configuration c;
    c.insert(oracle.sites()[j]);
    std::vector<double> pj = oracle.distribution(oracle.state_of(c), t);
    for (std::size_t s = 0; s < m; ++s) mu[s] += pj[s];
  }
  double mass = 0.0;
  for (std::size_t s = 0; s < m; ++s)
    if (s & 1) mass += mu[s];
  for (std::size_t s = 0; s < m; ++s) out.conditioned[s] = (s & 1) ? mu[s] / mass : 0.0;

  for (std::size_t s = 0; s < m; ++s)
    out.max_residual =
        std::max(out.max_residual, std::fabs(out.recentered[s] - out.conditioned[s]));
  return out;
}

}  // namespace contactlab
