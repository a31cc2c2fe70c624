#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "contactlab/configuration.hpp"
#include "contactlab/estimate.hpp"
#include "contactlab/rate_kernel.hpp"
#include "contactlab/simulator.hpp"

namespace contactlab {

// Branching process with birth kernel a and death rate delta, coupled to the
// infection dynamics so that every infected site carries at least one
// particle. Each infection event consumes one branching birth; births from
// non-distinguished particles and births onto already infected sites grow the
// branching population only.
struct BranchingResult {
  std::vector<std::pair<GroupElement, std::int64_t>> counts;  // sorted by site
  std::int64_t population = 0;
  Configuration contact;  // the coupled infection state at the end time
  bool dominated = true;  // recomputed from the raw particle list, not assumed
  bool capped = false;
  double time = 0.0;
};

BranchingResult simulate_branching_coupled(const ProcessParams& pp,
                                           const Configuration& initial, double horizon,
                                           Rng& rng,
                                           std::size_t population_cap = 1'000'000);

struct BranchingStats {
  std::vector<GroupElement> probes;
  std::vector<double> mean;  // particles at each probe site
  std::vector<double> se;
  EstimateWithError population;
  std::size_t dominance_violations = 0;
  std::size_t capped = 0;
  std::size_t replicas = 0;
};

BranchingStats estimate_branching(const ProcessParams& pp, const Configuration& initial,
                                  double horizon, const std::vector<GroupElement>& probes,
                                  std::size_t replicas, std::uint64_t seed,
                                  unsigned threads,
                                  std::size_t population_cap = 1'000'000);

// Continuous time walk: jumps at rate |a|, offsets proportional to a(0, .),
// started at the identity.
struct WalkPath {
  std::vector<GroupElement> positions;  // positions[0] = identity
  std::vector<double> times;            // times[0] = 0, then the jump times
};

WalkPath simulate_rate_walk(const RateKernel& kernel, double horizon, Rng& rng);

struct WalkStats {
  std::vector<GroupElement> probes;
  std::vector<double> prob;  // endpoint law at each probe site
  std::vector<double> se;
  double tail_radius = 0.0;  // word norm threshold for the tail estimate
  double tail_prob = 0.0;    // P[norm(endpoint) > tail_radius]
  double tail_se = 0.0;
  EstimateWithError jumps;
  std::size_t replicas = 0;
};

WalkStats estimate_walk(const RateKernel& kernel, double horizon,
                        const std::vector<GroupElement>& probes, double tail_radius,
                        std::size_t replicas, std::uint64_t seed, unsigned threads);

// Numeric form of the large deviation split: the expected number of infected
// sites is at most the ball of radius h*t plus the walk tail beyond h*t
// scaled by the branching population mean.
struct SplitBound {
  double horizon = 0.0;
  double h = 0.0;
  double lhs_mean = 0.0;  // E |eta_t|
  double lhs_se = 0.0;
  int ball_radius = 0;  // floor(h t)
  double ball_size = 0.0;
  double tail_prob = 0.0;
  double tail_se = 0.0;
  double growth_factor = 0.0;  // e^{(|a| - delta) t}
  double rhs = 0.0;
  double slack = 0.0;  // rhs + 3 combined SE - lhs
  bool holds = false;
  std::size_t capped = 0;
};

SplitBound split_bound_check(const ProcessParams& pp, const Configuration& initial,
                             double horizon, double h, std::size_t replicas,
                             std::uint64_t seed, unsigned threads,
                             const SimCaps& caps = {});

enum class GrowthClass { polynomial_like, exponential_like };

const char* to_string(GrowthClass c);

// Exact ball sizes by radius plus a finite radius growth classification:
// exponential-like when the marginal rate log(|ball(n)| / |ball(n-1)|) sits
// above the threshold for the last three radii. Saturated profiles (finite
// groups fully enumerated) are polynomial-like. The threshold and radius are
// tool conventions; the distinction is asymptotic.
struct BallProfile {
  std::vector<int> radii;
  std::vector<std::size_t> counts;
  std::vector<double> rate;  // log count ratio between consecutive radii
  GrowthClass classification = GrowthClass::polynomial_like;
  bool complete = true;  // false when the enumeration cap truncated the profile
  double threshold = 0.1;
};

BallProfile ball_growth_profile(const Group& group, int max_radius,
                                double threshold = 0.1,
                                std::size_t cap = Group::kDefaultBallCap);

// Overlap decay of the uniform generator walk with weighted cluster samples:
// for each (state, typical site) pair the walk starts at the typical site and
// the series records how often step m still sits inside the state. Geometric
// decay rate fitted over [fit_lo, fit_hi].
struct OverlapSample {
  Configuration state;
  GroupElement typical;
};

struct OverlapDecay {
  std::vector<double> p;   // index m = 0..m_max
  std::vector<double> se;  // between-sample (cluster) errors
  double theta_hat = 0.0;
  double theta_se = 0.0;
  std::size_t fit_lo = 0;
  std::size_t fit_hi = 0;
  std::size_t samples = 0;
  std::size_t walks_per_sample = 0;
};

OverlapDecay rw_overlap_decay(const Group& group, const std::vector<OverlapSample>& samples,
                              std::size_t m_max, std::size_t walks_per_sample,
                              std::size_t fit_lo, std::size_t fit_hi, std::uint64_t seed,
                              unsigned threads);

}  // namespace contactlab
