#include "contactlab/exact_ctmc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "contactlab/errors.hpp"
#include "contactlab/estimate.hpp"

namespace contactlab {

ExactProcess::ExactProcess(ProcessParams params, std::size_t site_cap)
    : params_(std::move(params)) {
  const Group& group = params_.kernel.group();
  if (!group.is_finite())
    throw ConfigError("exact oracle requires a finite group");
  std::size_t n = group.order();
  if (n > site_cap)
    throw CapExceeded("group order " + std::to_string(n) + " exceeds oracle site cap " +
                      std::to_string(site_cap));
  if (n > 16) throw CapExceeded("oracle limited to 16 sites");

  sites_ = group.ball(static_cast<int>(n), Group::kDefaultBallCap);
  if (sites_.size() != n) throw ConfigError("site enumeration does not cover the group");

  pair_rate_.assign(n * n, 0.0);
  recenter_.assign(n * n, 0);
  std::vector<std::size_t> site_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    GroupElement inv = group.inverse(sites_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      GroupElement offset = group.compose(inv, sites_[j]);
      pair_rate_[i * n + j] = params_.kernel.rate_of(offset);
      auto it = std::find(sites_.begin(), sites_.end(), offset);
      recenter_[i * n + j] = static_cast<std::size_t>(it - sites_.begin());
    }
  }

  std::size_t m = n_states();
  q_.assign(m * m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    double out = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (s & (std::size_t{1} << j)) {
        q_[s * m + (s ^ (std::size_t{1} << j))] += params_.delta;  // recovery
        out += params_.delta;
      } else {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (s & (std::size_t{1} << i)) w += pair_rate_[i * n + j];
        if (w > 0.0) {
          q_[s * m + (s | (std::size_t{1} << j))] += w;
          out += w;
        }
      }
    }
    q_[s * m + s] = -out;
    uniformization_rate_ = std::max(uniformization_rate_, out);
  }
}

std::size_t ExactProcess::state_of(const Configuration& c) const {
  std::size_t s = 0;
  for (const auto& e : c.items()) {
    auto it = std::find(sites_.begin(), sites_.end(), e);
    if (it == sites_.end()) throw ConfigError("configuration site outside the group");
    s |= std::size_t{1} << (it - sites_.begin());
  }
  return s;
}

Configuration ExactProcess::config_of(std::size_t state) const {
  Configuration c;
  for (std::size_t i = 0; i < sites_.size(); ++i)
    if (state & (std::size_t{1} << i)) c.insert(sites_[i]);
  return c;
}

int ExactProcess::state_size(std::size_t state) {
  return std::popcount(static_cast<unsigned long long>(state));
}

double ExactProcess::rate(std::size_t from, std::size_t to) const {
  return q_[from * n_states() + to];
}

std::vector<double> ExactProcess::propagate(std::vector<double> v, double t,
                                            bool row_action) const {
  if (!(t > 0.0)) return v;
  const double M = uniformization_rate_;
  const std::size_t m = n_states();
  if (M <= 0.0) return v;
  double mt = M * t;
  // split long horizons so Poisson weights stay well scaled
  if (mt > 256.0) {
    double half = t / 2;
    return propagate(propagate(std::move(v), half, row_action), t - half, row_action);
  }
  std::vector<double> term = v;
  std::vector<double> out(m, 0.0);
  std::vector<double> next(m);
  double weight = std::exp(-mt);
  double cumulative = weight;
  for (std::size_t s = 0; s < m; ++s) out[s] = weight * term[s];
  std::size_t k = 0;
  const std::size_t k_max =
      static_cast<std::size_t>(mt + 60.0 * std::sqrt(mt + 1.0) + 200.0);
  while (cumulative < 1.0 - 1e-13 && k < k_max) {
    ++k;
    // term <- term * K or K * term with K = I + Q / M
    if (row_action) {
      for (std::size_t j = 0; j < m; ++j) {
        double acc = term[j];
        for (std::size_t i = 0; i < m; ++i) acc += term[i] * q_[i * m + j] / M;
        next[j] = acc;
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        double acc = term[i];
        const double* row = &q_[i * m];
        for (std::size_t j = 0; j < m; ++j) acc += row[j] * term[j] / M;
        next[i] = acc;
      }
    }
    term.swap(next);
    weight *= mt / static_cast<double>(k);
    cumulative += weight;
    for (std::size_t s = 0; s < m; ++s) out[s] += weight * term[s];
  }
  return out;
}

std::vector<double> ExactProcess::distribution(std::size_t initial, double t) const {
  std::vector<double> p(n_states(), 0.0);
  p[initial] = 1.0;
  return propagate(std::move(p), t, true);
}

std::vector<double> ExactProcess::evolve(std::vector<double> mu, double t) const {
  return propagate(std::move(mu), t, true);
}

std::vector<double> ExactProcess::apply_semigroup(std::vector<double> f, double t) const {
  return propagate(std::move(f), t, false);
}

std::vector<double> ExactProcess::apply_generator(const std::vector<double>& f) const {
  std::size_t m = n_states();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = &q_[i * m];
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += row[j] * f[j];
    out[i] = acc;
  }
  return out;
}

double ExactProcess::expected_infected(std::size_t initial, double t) const {
  std::vector<double> p = distribution(initial, t);
  double acc = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) acc += p[s] * state_size(s);
  return acc;
}

double ExactProcess::expected_rising_factorial(std::size_t initial, double t,
                                               int k) const {
  std::vector<double> p = distribution(initial, t);
  double acc = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    double z = state_size(s);
    double prod = 1.0;
    for (int i = 0; i < k; ++i) prod *= z + i;
    acc += p[s] * prod;
  }
  return acc;
}

std::vector<double> ExactProcess::gamma_explicit(const std::vector<double>& f,
                                                 const std::vector<double>& g) const {
  std::size_t n = sites_.size();
  std::size_t m = n_states();
  std::vector<double> out(m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t bit = std::size_t{1} << j;
      if (s & bit) {
        std::size_t to = s ^ bit;
        acc += params_.delta * (f[to] - f[s]) * (g[to] - g[s]);
      } else {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (s & (std::size_t{1} << i)) w += pair_rate_[i * n + j];
        if (w > 0.0) {
          std::size_t to = s | bit;
          acc += w * (f[to] - f[s]) * (g[to] - g[s]);
        }
      }
    }
    out[s] = 0.5 * acc;
  }
  return out;
}

std::vector<double> ExactProcess::gamma_bracket(const std::vector<double>& f,
                                                const std::vector<double>& g) const {
  std::size_t m = n_states();
  std::vector<double> fg(m);
  for (std::size_t s = 0; s < m; ++s) fg[s] = f[s] * g[s];
  std::vector<double> gfg = apply_generator(fg);
  std::vector<double> gf = apply_generator(f);
  std::vector<double> gg = apply_generator(g);
  std::vector<double> out(m);
  for (std::size_t s = 0; s < m; ++s)
    out[s] = 0.5 * (gfg[s] - gf[s] * g[s] - f[s] * gg[s]);
  return out;
}

double ExactProcess::covariance_under(const std::vector<double>& mu,
                                      const std::vector<double>& f,
                                      const std::vector<double>& g) const {
  double ef = 0, eg = 0, efg = 0;
  for (std::size_t s = 0; s < mu.size(); ++s) {
    ef += mu[s] * f[s];
    eg += mu[s] * g[s];
    efg += mu[s] * f[s] * g[s];
  }
  return efg - ef * eg;
}

double ExactProcess::covariance_lhs(const std::vector<double>& mu,
                                    const std::vector<double>& f,
                                    const std::vector<double>& g, double t) const {
  return covariance_under(evolve(mu, t), f, g);
}

double ExactProcess::covariance_rhs(const std::vector<double>& mu,
                                    const std::vector<double>& f,
                                    const std::vector<double>& g, double t,
                                    double quad_tol) const {
  std::vector<double> ftt = apply_semigroup(f, t);
  std::vector<double> gtt = apply_semigroup(g, t);
  double base = covariance_under(mu, ftt, gtt);
  auto integrand = [&](double s) {
    std::vector<double> fs = apply_semigroup(f, s);
    std::vector<double> gs = apply_semigroup(g, s);
    std::vector<double> gam = gamma_explicit(fs, gs);
    std::vector<double> mus = evolve(mu, t - s);
    double acc = 0.0;
    for (std::size_t i = 0; i < gam.size(); ++i) acc += mus[i] * gam[i];
    return acc;
  };
  return base + 2.0 * integrate_adaptive(integrand, 0.0, t, quad_tol);
}

std::size_t ExactProcess::recenter_state(std::size_t state, std::size_t site_index) const {
  std::size_t n = sites_.size();
  std::size_t out = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (state & (std::size_t{1} << j))
      out |= std::size_t{1} << recenter_[site_index * n + j];
  return out;
}

std::vector<double> ExactProcess::expm_reference(double t) const {
  const auto m = static_cast<Eigen::Index>(n_states());
  Eigen::MatrixXd Q(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      Q(i, j) = q_[static_cast<std::size_t>(i) * n_states() + static_cast<std::size_t>(j)];
  Eigen::MatrixXd P = (Q * t).exp();
  std::vector<double> out(n_states() * n_states());
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      out[static_cast<std::size_t>(i) * n_states() + static_cast<std::size_t>(j)] = P(i, j);
  return out;
}

std::vector<double> ExactProcess::cardinality_observable() const {
  std::vector<double> f(n_states());
  for (std::size_t s = 0; s < f.size(); ++s) f[s] = state_size(s);
  return f;
}

std::vector<double> ExactProcess::nonempty_observable() const {
  std::vector<double> f(n_states(), 1.0);
  f[0] = 0.0;
  return f;
}

std::vector<double> ExactProcess::point_mass(std::size_t state) const {
  std::vector<double> p(n_states(), 0.0);
  p[state] = 1.0;
  return p;
}

double rising_factorial_bound(std::size_t initial_size, int k, double t,
                              double total_rate, double delta) {
  double prod = 1.0;
  for (int i = 0; i < k; ++i) prod *= static_cast<double>(initial_size) + i;
  return prod * std::exp(k * (total_rate + (k - 2) * delta) * t);
}

}  // namespace contactlab
