#pragma once

#include <cstdint>
#include <vector>

#include "contactlab/configuration.hpp"
#include "contactlab/estimators.hpp"
#include "contactlab/exact_ctmc.hpp"
#include "contactlab/rate_kernel.hpp"

namespace contactlab {

struct WeightedConfig {
  Configuration state;
  double weight;  // number of infected sites; extinct replicas carry weight 0
};

struct CampbellEnsemble {
  std::vector<WeightedConfig> samples;  // surviving replicas only
  std::size_t replicas = 0;
  std::size_t extinct = 0;
  std::size_t capped = 0;
  double weight_sum = 0.0;
  double time_param = 0.0;
  bool exponential_time = false;
};

// Self normalized importance sample of the size biased law: each replica is
// weighted by its number of infected sites. With exponential_time the state is
// read at an independent exponential time with the given mean, otherwise at
// the fixed time.
CampbellEnsemble sample_campbell(const ProcessParams& pp, const Configuration& initial,
                                 double time_param, bool exponential_time,
                                 std::size_t replicas, std::uint64_t seed,
                                 unsigned threads, const SimCaps& caps = {});

struct RecenteredSample {
  Configuration state;  // shifted so the chosen site sits at the identity
  GroupElement origin_site;
  double weight;
};

// picks the typical site uniformly from the configuration and translates it
// to the identity
RecenteredSample recenter_at_typical(const Group& group, const WeightedConfig& sample,
                                     Rng& rng);

// generic size biased resampling of arbitrary weighted items
std::vector<std::size_t> resample_indices(const std::vector<double>& weights,
                                          std::size_t n, Rng& rng);

// Weighted empirical law of the recentered configuration restricted to the
// window, averaged over every choice of the typical site. Index = bitmask
// over window positions.
std::vector<double> campbell_window_pattern(const Group& group,
                                            const CampbellEnsemble& ensemble,
                                            const std::vector<GroupElement>& window);

struct InvariantWindowEstimate {
  std::vector<GroupElement> window;
  std::vector<double> pattern;     // probabilities by window bitmask
  std::vector<double> pattern_se;  // propagated from the subset survival errors
  double clip_mass = 0.0;          // negative mass removed before renormalizing
  std::vector<SurvivalEstimate> subset_survival;  // indexed by nonempty bitmask
  bool dual_survives = false;
};

// Window marginal of the upper invariant law: survival of the reversed
// process from every subset gives the avoidance probabilities, and inclusion
// exclusion over the subset lattice recovers the pattern distribution.
// Windows are capped at 5 sites. Negative patterns beyond negative_tol raise
// DataError; smaller ones are clipped, renormalized and reported.
InvariantWindowEstimate invariant_window_distribution(
    const ProcessParams& pp, const std::vector<GroupElement>& window, double horizon,
    std::size_t escape_threshold, std::size_t replicas, std::uint64_t seed,
    unsigned threads, double negative_tol = 1e-2, const SimCaps& caps = {});

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

struct CampbellTrend {
  std::vector<double> time_params;
  std::vector<double> tv;
  std::vector<double> tv_se;  // batch based
  InvariantWindowEstimate target;
};

// Distance between the recentered Campbell law at exponential times and the
// conditioned invariant window law, for a sequence of time scales. Refuses to
// run when the reversed process dies out, since the target law is then trivial.
CampbellTrend campbell_vs_invariant(const ProcessParams& pp, const Configuration& initial,
                                    const std::vector<GroupElement>& window,
                                    const std::vector<double>& time_params,
                                    bool exponential_time, std::size_t replicas,
                                    double invariant_horizon,
                                    std::size_t escape_threshold,
                                    std::size_t invariant_replicas, std::uint64_t seed,
                                    unsigned threads, const SimCaps& caps = {});

// Exact finite group identity: the recentered size biased law of the process
// from the identity equals the law summed over all starting sites conditioned
// on covering the identity. Both sides by uniformization.
struct CampbellOracle {
  std::vector<double> recentered;   // by state, zero off states containing e
  std::vector<double> conditioned;  // same support
  double mean_size = 0.0;
  double max_residual = 0.0;
};

CampbellOracle campbell_oracle(const ExactProcess& oracle, double t);

}  // namespace contactlab
