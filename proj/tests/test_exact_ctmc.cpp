#include "doctest.h"

#include <cmath>
#include <vector>

#include "contactlab/errors.hpp"
#include "contactlab/exact_ctmc.hpp"
#include "contactlab/rng.hpp"

using namespace contactlab;

namespace {

ProcessParams make_pp(const char* group, const char* kernel, double delta) {
  Group g = Group::parse(group);
  return ProcessParams(RateKernel::parse(g, kernel), delta);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("oracle needs a finite group within the site cap") {
  CHECK_THROWS_AS(ExactProcess(make_pp("Z", "nn(1)", 1.0), 8), ConfigError);
  CHECK_THROWS_AS(ExactProcess(make_pp("C5", "nn(1)", 1.0), 4), CapExceeded);
  CHECK_NOTHROW(ExactProcess(make_pp("C5", "nn(1)", 1.0), 8));
}

TEST_CASE("two site generator matches the hand computation") {
  ExactProcess o(make_pp("C2", "nn(1)", 1.0), 4);
  REQUIRE(o.n_sites() == 2);
  REQUIRE(o.n_states() == 4);
  // states by bitmask over sites [e, g]: 0 empty, 1 {e}, 2 {g}, 3 both
  for (std::size_t to = 0; to < 4; ++to) CHECK(o.rate(0, to) == 0.0);  // absorbing
  CHECK(o.rate(1, 0) == doctest::Approx(1.0));   // recovery
  CHECK(o.rate(1, 3) == doctest::Approx(1.0));   // infect the other site
  CHECK(o.rate(1, 2) == 0.0);
  CHECK(o.rate(1, 1) == doctest::Approx(-2.0));
  CHECK(o.rate(3, 1) == doctest::Approx(1.0));
  CHECK(o.rate(3, 2) == doctest::Approx(1.0));
  CHECK(o.rate(3, 0) == 0.0);
  CHECK(o.rate(3, 3) == doctest::Approx(-2.0));
}

TEST_CASE("generator rows sum to zero") {
  for (const char* g : {"C2", "C3", "C4"}) {
    ExactProcess o(make_pp(g, "nn(1)", 0.7), 8);
    const auto& q = o.generator();
    std::size_t m = o.n_states();
    for (std::size_t from = 0; from < m; ++from) {
      double sum = 0.0;
      for (std::size_t to = 0; to < m; ++to) sum += q[from * m + to];
      CHECK(std::fabs(sum) < 1e-12);
    }
  }
}

TEST_CASE("uniformization agrees with the matrix exponential") {
  ExactProcess o(make_pp("C3", "1:2,2:0.5", 1.3), 8);
  for (double t : {0.1, 1.0, 4.0}) {
    std::vector<double> pt = o.expm_reference(t);
    std::size_t m = o.n_states();
    for (std::size_t init = 0; init < m; ++init) {
      std::vector<double> row = o.distribution(init, t);
      double worst = 0.0;
      for (std::size_t s = 0; s < m; ++s)
        worst = std::max(worst, std::fabs(row[s] - pt[init * m + s]));
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("transition laws satisfy the semigroup property") {
  ExactProcess o(make_pp("C3", "nn(1)", 1.0), 8);
  std::size_t init = o.n_states() - 1;
  std::vector<double> two_step = o.evolve(o.distribution(init, 0.7), 1.1);
  std::vector<double> one_step = o.distribution(init, 1.8);
  CHECK(max_abs_diff(two_step, one_step) < 1e-9);
}

TEST_CASE("avoidance probabilities match between forward and reversed chains") {
  ProcessParams pp = make_pp("C3", "1:2,2:0.5", 1.0);
  ExactProcess fwd(pp, 8);
  ExactProcess rev(pp.reversed(), 8);
  const std::size_t m = fwd.n_states();
  const std::size_t full = m - 1;
  auto avoid = [&](const ExactProcess& o, std::size_t from, std::size_t probe,
                   double t) {
    std::vector<double> d = o.distribution(from, t);
    double p = 0.0;
    for (std::size_t s = 0; s < m; ++s)
      if ((s & probe) == 0) p += d[s];
    return p;
  };
  for (double t : {0.4, 1.0, 2.5}) {
    for (std::size_t a = 0; a <= full; ++a)
      for (std::size_t b = 0; b <= full; ++b)
        CHECK(std::fabs(avoid(fwd, a, b, t) - avoid(rev, b, a, t)) < 1e-9);
  }
}

TEST_CASE("quadratic variation operator equals its bracket form") {
  ExactProcess o(make_pp("C3", "nn(1)", 0.8), 8);
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> f(o.n_states()), g(o.n_states());
    for (auto& x : f) x = rng.uniform() * 4.0 - 2.0;
    for (auto& x : g) x = rng.uniform() * 4.0 - 2.0;
    CHECK(max_abs_diff(o.gamma_explicit(f, g), o.gamma_bracket(f, g)) < 1e-12);
  }
}

TEST_CASE("variance evolution matches the closed form on one site") {
  // single site, pure death at rate one: occupancy decays as q = p0 e^{-t}
  ExactProcess o(make_pp("C1", "none", 1.0), 2);
  REQUIRE(o.n_states() == 2);
  std::vector<double> f = o.cardinality_observable();
  std::vector<double> mu = {0.4, 0.6};
  for (double t : {0.3, 1.0, 2.0}) {
    double q = 0.6 * std::exp(-t);
    double analytic = q * (1.0 - q);
    CHECK(std::fabs(o.covariance_lhs(mu, f, f, t) - analytic) < 1e-9);
    CHECK(std::fabs(o.covariance_rhs(mu, f, f, t) - analytic) < 1e-6);
  }
}

TEST_CASE("variance evolution identity holds for mixed observables") {
  for (const char* g : {"C2", "C3"}) {
    ExactProcess o(make_pp(g, "nn(1)", 1.0), 8);
    std::vector<double> card = o.cardinality_observable();
    std::vector<double> ind = o.nonempty_observable();
    std::vector<double> mu(o.n_states(), 1.0 / static_cast<double>(o.n_states()));
    for (double t : {0.5, 1.5}) {
      double lhs = o.covariance_lhs(mu, card, ind, t);
      double rhs = o.covariance_rhs(mu, card, ind, t);
      CHECK(std::fabs(lhs - rhs) < 1e-6);
    }
  }
}

TEST_CASE("rising factorial moments respect the closed form bound") {
  ExactProcess o(make_pp("C3", "nn(1)", 1.0), 8);
  Configuration start;
  start.insert(o.params().kernel.group().identity());
  std::size_t init = o.state_of(start);
  for (int k : {1, 2, 3}) {
    for (double t : {0.5, 1.0, 2.0}) {
      double moment = o.expected_rising_factorial(init, t, k);
      double bound =
          rising_factorial_bound(1, k, t, o.params().kernel.total_rate(), 1.0);
      CHECK(moment <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("mean infected interpolates the cardinality observable") {
  ExactProcess o(make_pp("C3", "nn(1)", 1.0), 8);
  std::vector<double> card = o.cardinality_observable();
  for (std::size_t init : {1u, 5u, 7u}) {
    std::vector<double> d = o.distribution(init, 0.9);
    double direct = 0.0;
    for (std::size_t s = 0; s < d.size(); ++s) direct += d[s] * card[s];
    CHECK(o.expected_infected(init, 0.9) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("recentering translates states by the inverse of the chosen site") {
  ExactProcess o(make_pp("C3", "nn(1)", 1.0), 8);
  const Group& g = o.params().kernel.group();
  for (std::size_t state = 0; state < o.n_states(); ++state) {
    Configuration c = o.config_of(state);
    for (std::size_t i = 0; i < o.n_sites(); ++i) {
      if (!c.contains(o.sites()[i])) continue;
      GroupElement shift = g.inverse(o.sites()[i]);
      Configuration moved;
      for (const auto& e : c.items()) moved.insert(g.compose(shift, e));
      CHECK(o.recenter_state(state, i) == o.state_of(moved));
      // the chosen site lands on the identity, bit zero
      CHECK((o.recenter_state(state, i) & 1u) == 1u);
    }
  }
}

TEST_CASE("state and configuration encodings round trip") {
  ExactProcess o(make_pp("C4", "nn(1)", 1.0), 8);
  for (std::size_t state = 0; state < o.n_states(); ++state) {
    CHECK(o.state_of(o.config_of(state)) == state);
    CHECK(ExactProcess::state_size(state) == __builtin_popcountll(state));
  }
}
