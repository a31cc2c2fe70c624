#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contactlab/configuration.hpp"
#include "contactlab/estimate.hpp"
#include "contactlab/rate_kernel.hpp"
#include "contactlab/simulator.hpp"

namespace contactlab {

struct ReplicaCounts {
  std::size_t total = 0;
  std::size_t extinct = 0;
  std::size_t capped = 0;  // replicas that hit the size cap; results carry their bias
};

struct GridEstimate {
  std::vector<double> times;
  std::vector<double> mean;  // estimated expected number of infected sites
  std::vector<double> se;
  ReplicaCounts counts;
};

GridEstimate estimate_pi(const ProcessParams& pp, const Configuration& initial,
                         const std::vector<double>& grid, std::size_t replicas,
                         std::uint64_t seed, unsigned threads, const SimCaps& caps = {});

enum class GrowthMethod { regression, subadditive };

GrowthMethod parse_growth_method(const std::string& name);

struct GrowthRateEstimate {
  double r_hat = 0.0;
  double half_width = 0.0;
  double intercept = 0.0;
  GrowthMethod method = GrowthMethod::regression;
  std::size_t tail_from = 1;  // grid entries before this index are burn in
  std::vector<double> fit_times, log_pi, log_pi_se;
  ReplicaCounts counts;
};

// regression: weighted least squares slope of log pi over the grid tail;
// subadditive: smallest log(pi_t)/t over the tail, a noisy upper bound
GrowthRateEstimate estimate_growth_rate(const GridEstimate& grid, GrowthMethod method,
                                        std::size_t tail_from = 1);

struct SurvivalEstimate {
  double rho_hat = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;
  std::size_t extinct = 0;
  std::size_t escaped = 0;           // declared survivors by the escape rule
  std::size_t alive_at_horizon = 0;  // still alive but below the threshold
  std::size_t capped = 0;
  double horizon = 0.0;
  std::size_t escape_threshold = 0;
};

// finite horizon plus escape rule; survivors = escaped + alive at the horizon,
// which overestimates survival at small horizons, so both counts are reported
SurvivalEstimate estimate_survival(const ProcessParams& pp, const Configuration& initial,
                                   double horizon, std::size_t escape_threshold,
                                   std::size_t replicas, std::uint64_t seed,
                                   unsigned threads, const SimCaps& caps = {});

struct DeltaCEstimate {
  double lower = 0.0;
  double upper = 0.0;
  bool conclusive = true;
  struct Probe {
    double delta;
    double rho_hat;
    double se;
    std::size_t replicas;
  };
  std::vector<Probe> trace;
};

// bisection of the survival threshold in delta over [0, |a|]; the predicate is
// "survival estimate exceeds zero by two standard errors"
DeltaCEstimate estimate_delta_c(const RateKernel& kernel, const Configuration& initial,
                                double horizon, std::size_t escape_threshold,
                                std::size_t replicas, int depth, std::uint64_t seed,
                                unsigned threads, const SimCaps& caps = {});

enum class Functional { cardinality, nonempty };

Functional parse_functional(const std::string& name);

// value of the generator applied to the catalogue observable, in closed form
double generator_value(const ProcessParams& pp, Functional f, const Configuration& state);
double observable_value(Functional f, const Configuration& state);

struct MartingaleCheck {
  EstimateWithError residual;  // mean of f(eta_T) - f(eta_0) - integral of Gf
  double horizon = 0.0;
  Functional functional = Functional::cardinality;
  std::size_t capped = 0;
};

// the compensated process is a martingale, so the mean residual is zero up to
// Monte Carlo error; the time integral is accumulated exactly along each path
MartingaleCheck check_martingale_drift(const ProcessParams& pp, const Configuration& initial,
                                       double horizon, Functional f, std::size_t replicas,
                                       std::uint64_t seed, unsigned threads,
                                       const SimCaps& caps = {});

struct DominationEstimate {
  double p_hat = 0.0;  // conditional on survival to the horizon
  double se = 0.0;
  std::size_t alive = 0;
  std::size_t replicas = 0;
  std::size_t capped = 0;
};

// probability that the surviving state contains some left translate of the
// pattern; candidate translates are read off the state itself
DominationEstimate estimate_domination(const ProcessParams& pp, const Configuration& initial,
                                       const std::vector<GroupElement>& pattern, double t,
                                       std::size_t replicas, std::uint64_t seed,
                                       unsigned threads, const SimCaps& caps = {});

// P[state at t misses each probe set] for several probes from one run
std::vector<EstimateWithError> estimate_avoidance(const ProcessParams& pp,
                                                  const Configuration& initial,
                                                  const std::vector<Configuration>& probes,
                                                  double t, std::size_t replicas,
                                                  std::uint64_t seed, unsigned threads,
                                                  const SimCaps& caps = {});

// rising factorial moments of the number of infected sites at time t
std::vector<EstimateWithError> estimate_rising_moments(const ProcessParams& pp,
                                                       const Configuration& initial,
                                                       double t, const std::vector<int>& ks,
                                                       std::size_t replicas,
                                                       std::uint64_t seed, unsigned threads,
                                                       const SimCaps& caps = {});

}  // namespace contactlab
