#include "doctest.h"

#include <cmath>
#include <vector>

#include "contactlab/errors.hpp"
#include "contactlab/estimators.hpp"
#include "contactlab/exact_ctmc.hpp"

using namespace contactlab;

namespace {

ProcessParams make_pp(const char* group, const char* kernel, double delta) {
  Group g = Group::parse(group);
  return ProcessParams(RateKernel::parse(g, kernel), delta);
}

Configuration single_site(const Group& g) {
  Configuration c;
  c.insert(g.identity());
  return c;
}

}  // namespace

TEST_CASE("grid means reproduce the exact expected cardinality") {
  ProcessParams pp = make_pp("C3", "nn(1)", 1.0);
  ExactProcess oracle(pp, 8);
  Configuration start = single_site(pp.kernel.group());
  std::vector<double> grid = {0.5, 1.0, 2.0};
  GridEstimate est = estimate_pi(pp, start, grid, 20000, 91, 1);
  REQUIRE(est.times == grid);
  CHECK(est.counts.total == 20000);
  CHECK(est.counts.capped == 0);
  std::size_t init = oracle.state_of(start);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double exact = oracle.expected_infected(init, grid[j]);
    CHECK(std::fabs(est.mean[j] - exact) < 4.0 * est.se[j]);
    CHECK(est.se[j] > 0.0);
  }
}

TEST_CASE("regression growth rate recovers the pure death exponent") {
  ProcessParams pp = make_pp("Z", "none", 1.0);
  Configuration start = single_site(pp.kernel.group());
  std::vector<double> grid;
  for (int i = 1; i <= 8; ++i) grid.push_back(0.25 * i);
  GridEstimate pi = estimate_pi(pp, start, grid, 50000, 17, 1);
  GrowthRateEstimate r = estimate_growth_rate(pi, GrowthMethod::regression, 0);
  CHECK(std::fabs(r.r_hat + 1.0) < 0.03);
  CHECK(std::fabs(r.r_hat + 1.0) < 5.0 * r.half_width + 0.01);
  CHECK(r.fit_times.size() == grid.size());
  CHECK(r.method == GrowthMethod::regression);
}

TEST_CASE("subadditive growth rate gives a noisy upper bound near the exponent") {
  ProcessParams pp = make_pp("Z", "none", 1.0);
  Configuration start = single_site(pp.kernel.group());
  GridEstimate pi = estimate_pi(pp, start, {1.0, 2.0, 3.0}, 50000, 18, 1);
  GrowthRateEstimate r = estimate_growth_rate(pi, GrowthMethod::subadditive, 0);
  CHECK(r.method == GrowthMethod::subadditive);
  CHECK(std::fabs(r.r_hat + 1.0) < 0.1);
}

TEST_CASE("growth rate refuses a grid with an extinct tail") {
  ProcessParams pp = make_pp("Z", "none", 1.0);
  Configuration start = single_site(pp.kernel.group());
  GridEstimate pi = estimate_pi(pp, start, {0.5, 40.0}, 200, 19, 1);
  CHECK_THROWS_AS(estimate_growth_rate(pi, GrowthMethod::regression, 0), DataError);
}

TEST_CASE("pure death survival matches the exponential closed form") {
  ProcessParams pp = make_pp("Z", "none", 1.0);
  Configuration start = single_site(pp.kernel.group());
  SurvivalEstimate s = estimate_survival(pp, start, 2.0, 1000, 20000, 23, 1);
  double exact = std::exp(-2.0);
  CHECK(std::fabs(s.rho_hat - exact) < 4.0 * std::sqrt(exact * (1 - exact) / 20000.0));
  CHECK(s.escaped == 0);  // a dying process never reaches the escape threshold
  CHECK(s.extinct + s.alive_at_horizon == s.replicas);
  CHECK(s.rho_hat ==
        static_cast<double>(s.escaped + s.alive_at_horizon) / static_cast<double>(s.replicas));
}

TEST_CASE("supercritical survivors are mostly declared by escape") {
  ProcessParams pp = make_pp("Z", "nn(2)", 0.5);
  Configuration start = single_site(pp.kernel.group());
  SurvivalEstimate s = estimate_survival(pp, start, 50.0, 100, 1000, 29, 1);
  CHECK(s.rho_hat > 0.5);
  CHECK(s.escaped > 10 * s.alive_at_horizon);
  CHECK(s.extinct + s.escaped + s.alive_at_horizon == s.replicas);
}

TEST_CASE("generator values have the hand computed closed forms") {
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  const Group& g = pp.kernel.group();
  Configuration pair;
  pair.insert(g.identity());
  pair.insert(g.parse_element("1"));
  // two sites, each with one free neighbour at rate 1: growth 2, death 2
  CHECK(generator_value(pp, Functional::cardinality, pair) == doctest::Approx(0.0));
  CHECK(generator_value(pp, Functional::nonempty, pair) == doctest::Approx(0.0));
  Configuration one = single_site(g);
  CHECK(generator_value(pp, Functional::cardinality, one) == doctest::Approx(1.0));
  CHECK(generator_value(pp, Functional::nonempty, one) == doctest::Approx(-1.0));
  CHECK(observable_value(Functional::cardinality, pair) == 2.0);
  CHECK(observable_value(Functional::nonempty, pair) == 1.0);
  CHECK(observable_value(Functional::nonempty, Configuration{}) == 0.0);
}

TEST_CASE("compensated observables have zero drift") {
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  Configuration start = single_site(pp.kernel.group());
  for (Functional f : {Functional::cardinality, Functional::nonempty}) {
    MartingaleCheck mc = check_martingale_drift(pp, start, 1.5, f, 20000, 31, 1);
    CAPTURE(static_cast<int>(f));
    CHECK(std::fabs(mc.residual.value) < 4.0 * mc.residual.se);
    CHECK(mc.residual.n == 20000);
    CHECK(mc.capped == 0);
  }
}

TEST_CASE("avoidance probabilities match exact subset sums") {
  ProcessParams pp = make_pp("C3", "nn(1)", 1.0);
  const Group& g = pp.kernel.group();
  ExactProcess oracle(pp, 8);
  Configuration start = single_site(g);
  Configuration probe_e = single_site(g);
  Configuration probe_eg = single_site(g);
  probe_eg.insert(g.parse_element("1"));
  const double t = 0.8;
  std::vector<EstimateWithError> est =
      estimate_avoidance(pp, start, {probe_e, probe_eg}, t, 20000, 37, 1);
  REQUIRE(est.size() == 2);
  std::vector<double> dist = oracle.distribution(oracle.state_of(start), t);
  for (std::size_t pi = 0; pi < 2; ++pi) {
    std::size_t probe_mask = oracle.state_of(pi == 0 ? probe_e : probe_eg);
    double exact = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s)
      if ((s & probe_mask) == 0) exact += dist[s];
    CHECK(std::fabs(est[pi].value - exact) < 4.0 * est[pi].se + 1e-12);
  }
}

TEST_CASE("rising factorial moments match the oracle") {
  ProcessParams pp = make_pp("C3", "nn(1)", 0.8);
  Configuration start = single_site(pp.kernel.group());
  ExactProcess oracle(pp, 8);
  const double t = 1.0;
  std::vector<EstimateWithError> est =
      estimate_rising_moments(pp, start, t, {1, 2, 3}, 20000, 41, 1);
  REQUIRE(est.size() == 3);
  std::size_t init = oracle.state_of(start);
  for (int k = 1; k <= 3; ++k) {
    double exact = oracle.expected_rising_factorial(init, t, k);
    CHECK(std::fabs(est[k - 1].value - exact) < 4.0 * est[k - 1].se + 1e-12);
  }
}

TEST_CASE("every surviving state dominates the singleton pattern") {
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  const Group& g = pp.kernel.group();
  Configuration start = single_site(g);
  DominationEstimate d = estimate_domination(pp, start, {g.identity()}, 1.0, 2000, 43, 1);
  CHECK(d.alive > 0);
  CHECK(d.p_hat == 1.0);
  CHECK(d.replicas == 2000);
}

TEST_CASE("domination by an adjacent pair is a proper probability") {
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  const Group& g = pp.kernel.group();
  Configuration start = single_site(g);
  std::vector<GroupElement> pattern = {g.identity(), g.parse_element("1")};
  DominationEstimate d = estimate_domination(pp, start, pattern, 0.5, 10000, 47, 1);
  CHECK(d.p_hat > 0.1);
  CHECK(d.p_hat < 0.9);
  CHECK(d.se > 0.0);
  CHECK(d.alive <= d.replicas);
}

TEST_CASE("empty domination pattern is rejected") {
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  Configuration start = single_site(pp.kernel.group());
  CHECK_THROWS_AS(estimate_domination(pp, start, {}, 1.0, 10, 1, 1), ConfigError);
}

TEST_CASE("weighted line fit recovers a known line") {
  std::vector<double> x = {0, 1, 2, 3, 4};
  std::vector<double> y, sig;
  for (double xi : x) {
    y.push_back(2.5 - 0.75 * xi);
    sig.push_back(0.1);
  }
  LineFit fit = weighted_line_fit(x, y, sig);
  CHECK(fit.slope == doctest::Approx(-0.75));
  CHECK(fit.intercept == doctest::Approx(2.5));
  CHECK(fit.chi2 == doctest::Approx(0.0));
  CHECK(fit.n == 5);
}

TEST_CASE("threaded estimates equal single threaded ones") {
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  Configuration start = single_site(pp.kernel.group());
  GridEstimate a = estimate_pi(pp, start, {0.5, 1.0}, 4000, 53, 1);
  GridEstimate b = estimate_pi(pp, start, {0.5, 1.0}, 4000, 53, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
  SurvivalEstimate sa = estimate_survival(pp, start, 2.0, 100, 4000, 59, 1);
  SurvivalEstimate sb = estimate_survival(pp, start, 2.0, 100, 4000, 59, 4);
  CHECK(sa.rho_hat == sb.rho_hat);
  CHECK(sa.extinct == sb.extinct);
}
