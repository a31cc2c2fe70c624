#pragma once

#include <cstddef>
#include <vector>

#include "contactlab/configuration.hpp"
#include "contactlab/rate_kernel.hpp"

namespace contactlab {

// Exact continuous time Markov chain for the process on a finite group,
// with one state per subset of sites (bitmask). Transition distributions come
// from uniformization with truncation error below 1e-10; a dense matrix
// exponential is available as an independent cross check.
class ExactProcess {
 public:
  explicit ExactProcess(ProcessParams params, std::size_t site_cap = 4);

  const ProcessParams& params() const { return params_; }
  const std::vector<GroupElement>& sites() const { return sites_; }
  std::size_t n_sites() const { return sites_.size(); }
  std::size_t n_states() const { return std::size_t{1} << sites_.size(); }

  std::size_t state_of(const Configuration& c) const;
  Configuration config_of(std::size_t state) const;
  static int state_size(std::size_t state);

  // row-major generator, rows sum to zero, empty state absorbing
  const std::vector<double>& generator() const { return q_; }
  double rate(std::size_t from, std::size_t to) const;

  // law of the state at time t started from a deterministic state
  std::vector<double> distribution(std::size_t initial, double t) const;
  // mu S_t for an arbitrary initial law (row action)
  std::vector<double> evolve(std::vector<double> mu, double t) const;
  // S_t f for an observable (column action)
  std::vector<double> apply_semigroup(std::vector<double> f, double t) const;
  // G f
  std::vector<double> apply_generator(const std::vector<double>& f) const;

  double expected_infected(std::size_t initial, double t) const;
  // E[ |eta_t| (|eta_t|+1) ... (|eta_t|+k-1) ]
  double expected_rising_factorial(std::size_t initial, double t, int k) const;

  // quadratic variation operator, explicit sum form
  std::vector<double> gamma_explicit(const std::vector<double>& f,
                                     const std::vector<double>& g) const;
  // same object from the defining bracket (G(fg) - (Gf)g - f(Gg)) / 2
  std::vector<double> gamma_bracket(const std::vector<double>& f,
                                    const std::vector<double>& g) const;

  double covariance_under(const std::vector<double>& mu, const std::vector<double>& f,
                          const std::vector<double>& g) const;
  // Cov under mu S_t of (f, g)
  double covariance_lhs(const std::vector<double>& mu, const std::vector<double>& f,
                        const std::vector<double>& g, double t) const;
  // Cov under mu of (S_t f, S_t g) plus twice the integrated gamma term
  double covariance_rhs(const std::vector<double>& mu, const std::vector<double>& f,
                        const std::vector<double>& g, double t,
                        double quad_tol = 1e-8) const;

  // state reached by translating every site by the inverse of site i
  std::size_t recenter_state(std::size_t state, std::size_t site_index) const;

  // dense row-major transition matrix P(t) by scaling and squaring, for cross
  // checking uniformization against an independent implementation
  std::vector<double> expm_reference(double t) const;

  std::vector<double> cardinality_observable() const;
  std::vector<double> nonempty_observable() const;
  std::vector<double> point_mass(std::size_t state) const;

 private:
  std::vector<double> propagate(std::vector<double> v, double t, bool row_action) const;

  ProcessParams params_;
  std::vector<GroupElement> sites_;
  std::vector<double> pair_rate_;   // n x n matrix of a(i, j)
  std::vector<double> q_;           // n_states x n_states generator
  std::vector<std::size_t> recenter_;  // n x n site translation table
  double uniformization_rate_ = 0.0;
};

// closed form upper bound for rising factorial moments started from a set of
// the given size
double rising_factorial_bound(std::size_t initial_size, int k, double t,
                              double total_rate, double delta);

}  // namespace contactlab
