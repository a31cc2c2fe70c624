#include "contactlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "contactlab/bounds.hpp"
#include "contactlab/campbell.hpp"
#include "contactlab/config.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/estimators.hpp"
#include "contactlab/exact_ctmc.hpp"
#include "contactlab/experiments.hpp"
#include "contactlab/mobius.hpp"
#include "contactlab/parallel.hpp"
#include "contactlab/report.hpp"

namespace contactlab {

namespace {

// Master seed of the validation suite. The statistical criteria use hard
// 3-sigma style gates, so a fixed seed keeps the suite reproducible; any
// systematic bias would fail them at every seed at these replica counts.
constexpr std::uint64_t kSeed = 0xACCE57;

std::string num(double v) { return fmt_num(v); }

ProcessParams make_pp(const std::string& gspec, const std::string& kspec, double delta) {
  Group group = Group::parse(gspec);
  return ProcessParams(RateKernel::parse(group, kspec), delta);
}

Configuration single_site(const Group& group) {
  Configuration c;
  c.insert(group.identity());
  return c;
}

bool within_growth_bounds(const GrowthRateEstimate& est, const ProcessParams& pp) {
  double lo = -pp.delta, hi = pp.kernel.total_rate() - pp.delta;
  return est.r_hat >= lo - est.half_width && est.r_hat <= hi + est.half_width;
}

// z statistic with exact-null handling: a zero-variance cell passes only on
// exact agreement
double cell_z(double observed, double expected, double se, bool& hard_fail) {
  double diff = std::fabs(observed - expected);
  if (se > 0.0) return diff / se;
  if (diff > 0.0) hard_fail = true;
  return 0.0;
}

// --- criterion 1: transition laws and mean size against the exact chain ----

CriterionResult crit_oracle_transitions(unsigned threads) {
  CriterionResult res{1, "oracle-transitions", "fast", true, "", 0.0};
  const std::size_t n = 100'000;
  double max_z = 0.0;
  std::size_t cells = 0;
  bool hard_fail = false;
  int gi = 0;
  for (const char* gname : {"C2", "C3"}) {
    ProcessParams pp = make_pp(gname, "nn(1)", 1.0);
    ExactProcess oracle(pp, 8);
    const std::size_t m = oracle.n_states();
    int ti = 0;
    for (double t : {0.25, 0.5, 1.0}) {
      for (std::size_t init = 0; init < m; ++init) {
        Configuration start = oracle.config_of(init);
        std::uint64_t seed =
            mix_seed(kSeed, 0x0101, static_cast<std::uint64_t>(gi * 96 + ti * 16) + init);
        std::vector<std::uint8_t> finals(n);
        std::vector<double> sizes(n);
        parallel_replicas(n, threads, [&](std::size_t r) {
          Rng rng(mix_seed(seed, kStreamReplica, r));
          SimResult sr = simulate_forward(pp, start, t, rng);
          finals[r] = static_cast<std::uint8_t>(oracle.state_of(sr.state));
          sizes[r] = static_cast<double>(sr.state.size());
        });
        std::vector<double> exact = oracle.distribution(init, t);
        std::vector<std::size_t> tally(m, 0);
        for (std::uint8_t f : finals) ++tally[f];
        for (std::size_t s = 0; s < m; ++s) {
          ++cells;
          double p = exact[s];
          double phat = static_cast<double>(tally[s]) / static_cast<double>(n);
          double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
          max_z = std::max(max_z, cell_z(phat, p, se, hard_fail));
        }
        ++cells;
        EstimateWithError ms = mean_with_se(sizes);
        max_z = std::max(max_z,
                         cell_z(ms.value, oracle.expected_infected(init, t), ms.se,
                                hard_fail));
      }
      ++ti;
    }
    ++gi;
  }
  res.pass = !hard_fail && max_z <= 3.0;
  res.detail = "cells=" + std::to_string(cells) + ";replicas=" + std::to_string(n) +
               ";max_abs_z=" + num(max_z) + ";gate=3";
  return res;
}

// --- criterion 2: avoidance probabilities match under kernel reversal ------

CriterionResult crit_duality(unsigned threads) {
  CriterionResult res{2, "duality", "fast", true, "", 0.0};
  const std::size_t n = 100'000;
  double max_z = 0.0;
  std::size_t cells = 0;
  struct Case {
    const char* group;
    const char* kernel;
    const char* gen;
  };
  int ci = 0;
  for (const Case& c : {Case{"Z", "1:2,-1:1", "1"}, Case{"F2", "nn(1)", "a"}}) {
    ProcessParams pp = make_pp(c.group, c.kernel, 1.0);
    ProcessParams dual = pp.reversed();
    const Group& group = pp.kernel.group();
    Configuration ce = single_site(group);
    Configuration ceg = ce;
    ceg.insert(group.parse_element(c.gen));
    const std::pair<const Configuration*, const Configuration*> pairs[] = {
        {&ce, &ce}, {&ce, &ceg}, {&ceg, &ce}};
    int pi_idx = 0;
    for (const auto& [a, b] : pairs) {
      int ti = 0;
      for (double t : {0.5, 1.0, 2.0}) {
        std::uint64_t tag = static_cast<std::uint64_t>(ci * 64 + pi_idx * 8 + ti);
        auto fwd = estimate_avoidance(pp, *a, {*b}, t, n, mix_seed(kSeed, 0x0201, tag),
                                      threads);
        auto rev = estimate_avoidance(dual, *b, {*a}, t, n,
                                      mix_seed(kSeed, 0x0202, tag), threads);
        double se = std::sqrt(fwd[0].se * fwd[0].se + rev[0].se * rev[0].se);
        bool hard_fail = false;
        max_z = std::max(max_z, cell_z(fwd[0].value, rev[0].value, se, hard_fail));
        if (hard_fail) res.pass = false;
        ++cells;
        ++ti;
      }
      ++pi_idx;
    }
    ++ci;
  }
  if (max_z > 3.0) res.pass = false;
  res.detail = "cells=" + std::to_string(cells) + ";replicas=" + std::to_string(n) +
               ";max_abs_z=" + num(max_z) + ";gate=3";
  return res;
}

// --- criterion 3: mean size is invariant under kernel reversal -------------

CriterionResult crit_reversal_symmetry(unsigned threads) {
  CriterionResult res{3, "reversal-symmetry", "fast", true, "", 0.0};
  const std::size_t n = 50'000;
  const std::vector<double> grid = {0.5, 1.0, 2.0};
  double max_z = 0.0;
  int ci = 0;
  for (const char* spec : {"1:2,-1:1", "nn(1)"}) {
    ProcessParams pp = make_pp(ci == 0 ? "Z" : "F2", spec, 1.0);
    ProcessParams dual = pp.reversed();
    Configuration init = single_site(pp.kernel.group());
    GridEstimate fwd =
        estimate_pi(pp, init, grid, n, mix_seed(kSeed, 0x0301, ci), threads);
    GridEstimate rev =
        estimate_pi(dual, init, grid, n, mix_seed(kSeed, 0x0302, ci), threads);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double se = std::sqrt(fwd.se[k] * fwd.se[k] + rev.se[k] * rev.se[k]);
      bool hard_fail = false;
      max_z = std::max(max_z, cell_z(fwd.mean[k], rev.mean[k], se, hard_fail));
      if (hard_fail) res.pass = false;
    }
    ++ci;
  }
  if (max_z > 3.0) res.pass = false;
  res.detail = "cells=6;replicas=" + std::to_string(n) + ";max_abs_z=" + num(max_z) +
               ";gate=3";
  return res;
}

// --- criterion 4: rising factorial moments under the closed form bound -----

CriterionResult crit_moment_bound(unsigned threads) {
  CriterionResult res{4, "moment-bound", "fast", true, "", 0.0};
  const std::size_t n = 20'000;
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  Configuration init = single_site(pp.kernel.group());
  const std::vector<int> ks = {1, 2, 3};
  double min_slack = 1e300;
  int ti = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    auto ests = estimate_rising_moments(pp, init, t, ks, n,
                                        mix_seed(kSeed, 0x0401, ti), threads);
    for (std::size_t j = 0; j < ks.size(); ++j) {
      double bound =
          rising_factorial_bound(1, ks[j], t, pp.kernel.total_rate(), pp.delta);
      double slack = bound + 3.0 * ests[j].se - ests[j].value;
      min_slack = std::min(min_slack, slack);
      if (slack < 0.0) res.pass = false;
    }
    ++ti;
  }
  res.detail = "cells=9;replicas=" + std::to_string(n) +
               ";min_slack=" + num(min_slack) + ";gate=bound+3se";
  return res;
}

// --- criterion 5: mean size is submultiplicative over time splits ----------

CriterionResult crit_submultiplicative(unsigned threads) {
  CriterionResult res{5, "submultiplicativity", "fast", true, "", 0.0};
  const std::size_t n = 100'000;
  ProcessParams pp = make_pp("Z", "nn(1)", 1.0);
  Configuration init = single_site(pp.kernel.group());
  GridEstimate pi = estimate_pi(pp, init, {1.0, 2.0, 3.0, 4.0}, n,
                                mix_seed(kSeed, 0x0501), threads);
  // (s, t) index pairs into the grid and the target s + t index
  const int pairs[3][3] = {{0, 0, 1}, {0, 1, 2}, {1, 1, 3}};
  double min_slack = 1e300;
  for (const auto& pr : pairs) {
    double ps = pi.mean[pr[0]], pt = pi.mean[pr[1]], pst = pi.mean[pr[2]];
    double ses = pi.se[pr[0]], set = pi.se[pr[1]], sest = pi.se[pr[2]];
    double prod_se = std::sqrt(ps * ps * set * set + pt * pt * ses * ses);
    double se = std::sqrt(sest * sest + prod_se * prod_se);
    double slack = ps * pt + 3.0 * se - pst;
    min_slack = std::min(min_slack, slack);
    if (slack < 0.0) res.pass = false;
  }
  res.detail = "pairs=3;replicas=" + std::to_string(n) +
               ";min_slack=" + num(min_slack) + ";gate=product+3se";
  return res;
}

// --- criterion 6: fitted rates sit inside the generator bounds -------------

CriterionResult crit_growth_bounds(unsigned threads) {
  CriterionResult res{6, "growth-rate-bounds", "fast", true, "", 0.0};
  // pure death: the mean decays at exactly the recovery rate
  ProcessParams dead = make_pp("Z", "none", 1.0);
  GridEstimate gd = estimate_pi(dead, single_site(dead.kernel.group()),
                                {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0}, 100'000,
                                mix_seed(kSeed, 0x0601), threads);
  GrowthRateEstimate de = estimate_growth_rate(gd, GrowthMethod::regression, 0);
  double death_err = std::fabs(de.r_hat + 1.0);
  if (death_err > 0.02) res.pass = false;

  struct Run {
    const char* group;
    const char* kernel;
    double delta;
    std::vector<double> grid;
  };
  const Run runs[] = {{"Z", "nn(1)", 1.0, {1.0, 2.0, 3.0, 4.0}},
                      {"Z", "nn(0.5)", 1.0, {1.0, 2.0, 3.0}},
                      {"F2", "nn(1)", 1.0, {0.5, 1.0, 1.5}}};
  std::string rs;
  int ri = 0;
  for (const Run& run : runs) {
    ProcessParams pp = make_pp(run.group, run.kernel, run.delta);
    GridEstimate pi = estimate_pi(pp, single_site(pp.kernel.group()), run.grid, 20'000,
                                  mix_seed(kSeed, 0x0602, ri), threads);
    GrowthRateEstimate est = estimate_growth_rate(pi, GrowthMethod::regression, 0);
    if (!within_growth_bounds(est, pp)) res.pass = false;
    rs += std::string(";r") + std::to_string(ri) + "=" + num(est.r_hat) + "+-" +
          num(est.half_width);
    ++ri;
  }
  res.detail = "death_err=" + num(death_err) + ";death_gate=0.02" + rs +
               ";band=[-delta-hw;|a|-delta+hw]";
  return res;
}

// --- criterion 7: fitted rate is nonincreasing and 1-Lipschitz in delta ----

CriterionResult crit_growth_monotone(unsigned threads) {
  CriterionResult res{7, "growth-monotone-lipschitz", "full", true, "", 0.0};
  const std::size_t n = 4000;
  const std::vector<double> grid = {2.0, 4.0, 6.0, 8.0};
  const std::vector<double> deltas = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
  std::vector<GrowthRateEstimate> ests;
  std::string rs;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    ProcessParams pp = make_pp("Z", "nn(1)", deltas[i]);
    GridEstimate pi = estimate_pi(pp, single_site(pp.kernel.group()), grid, n,
                                  mix_seed(kSeed, 0x0701, i), threads);
    GrowthRateEstimate est = estimate_growth_rate(pi, GrowthMethod::regression, 0);
    if (!within_growth_bounds(est, pp)) res.pass = false;
    rs += ";r(" + num(deltas[i]) + ")=" + num(est.r_hat) + "+-" + num(est.half_width);
    ests.push_back(std::move(est));
  }
  double worst_mono = 1e300, worst_lip = 1e300;
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
    double hwc = std::sqrt(ests[i].half_width * ests[i].half_width +
                           ests[i + 1].half_width * ests[i + 1].half_width);
    double step = ests[i + 1].r_hat - ests[i].r_hat;
    double dd = deltas[i + 1] - deltas[i];
    worst_mono = std::min(worst_mono, 2.0 * hwc - step);
    worst_lip = std::min(worst_lip, dd + 2.0 * hwc - std::fabs(step));
    if (step > 2.0 * hwc) res.pass = false;
    if (std::fabs(step) > dd + 2.0 * hwc) res.pass = false;
  }
  res.detail = "replicas=" + std::to_string(n) + ";mono_slack=" + num(worst_mono) +
               ";lip_slack=" + num(worst_lip) + rs;
  return res;
}

// --- criterion 8: rate sign pattern across group geometries ----------------

CriterionResult crit_growth_signs(unsigned threads) {
  CriterionResult res{8, "growth-sign-pattern", "full", true, "", 0.0};
  std::string detail;

  struct ZRun {
    const char* kernel;
    std::vector<double> grid;
    std::size_t replicas;
  };
  // the supercritical run uses a late window: there the mean grows linearly,
  // so the honest fitted slope shrinks like 1/t and the inflated half width
  // must cover it
  const ZRun zruns[] = {{"nn(0.5)", {1.0, 2.0, 3.0}, 20'000},
                        {"nn(1)", {1.0, 2.0, 3.0, 4.0}, 20'000},
                        {"nn(2)", {148.0, 152.0, 156.0, 160.0}, 150}};
  int ri = 0;
  for (const ZRun& run : zruns) {
    ProcessParams pp = make_pp("Z", run.kernel, 1.0);
    GridEstimate pi = estimate_pi(pp, single_site(pp.kernel.group()), run.grid,
                                  run.replicas, mix_seed(kSeed, 0x0801, ri), threads);
    GrowthRateEstimate est = estimate_growth_rate(pi, GrowthMethod::regression, 0);
    if (!within_growth_bounds(est, pp)) res.pass = false;
    if (est.r_hat > 3.0 * est.half_width) res.pass = false;
    detail += std::string(ri ? ";" : "") + "z_" + run.kernel + "=" + num(est.r_hat) +
              "+-" + num(est.half_width);
    ++ri;
  }

  ProcessParams ppf = make_pp("F2", "nn(1)", 0.5);
  Configuration init = single_site(ppf.kernel.group());
  SurvivalEstimate surv = estimate_survival(ppf, init, 8.0, 500, 2000,
                                            mix_seed(kSeed, 0x0802), threads);
  if (!(surv.rho_hat - 3.0 * surv.se > 0.0)) res.pass = false;
  GridEstimate pif = estimate_pi(ppf, init, {0.5, 1.0, 1.5, 2.0}, 2000,
                                 mix_seed(kSeed, 0x0803), threads);
  GrowthRateEstimate estf = estimate_growth_rate(pif, GrowthMethod::regression, 0);
  if (!within_growth_bounds(estf, ppf)) res.pass = false;
  if (!(estf.r_hat - 3.0 * estf.half_width > 0.0)) res.pass = false;
  res.detail = detail + ";f2_rho=" + num(surv.rho_hat) + "+-" + num(surv.se) +
               ";f2_r=" + num(estf.r_hat) + "+-" + num(estf.half_width) + ";gate=3";
  return res;
}

// --- criterion 9: size biased recentered law equals the conditioned law ----

CriterionResult crit_campbell(unsigned threads) {
  CriterionResult res{9, "campbell-law", "fast", true, "", 0.0};
  ProcessParams pp = make_pp("C2", "nn(1)", 1.0);
  ExactProcess oracle(pp, 4);
  const double t = 0.4;
  CampbellOracle co = campbell_oracle(oracle, t);
  if (!(co.max_residual < 1e-9)) res.pass = false;

  const std::size_t n = 1'000'000;
  const std::size_t m = oracle.n_states();
  Configuration start = single_site(pp.kernel.group());
  std::vector<std::uint8_t> finals(n);
  parallel_replicas(n, threads, [&](std::size_t r) {
    Rng rng(mix_seed(kSeed, 0x0901, r));
    SimResult sr = simulate_forward(pp, start, t, rng);
    finals[r] = static_cast<std::uint8_t>(oracle.state_of(sr.state));
  });
  std::vector<double> tally(m, 0.0);
  for (std::uint8_t f : finals) tally[f] += 1.0;
  std::vector<double> pattern(m, 0.0);
  double weight = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t i = 0; i < oracle.n_sites(); ++i)
      if (s & (std::size_t{1} << i)) {
        pattern[oracle.recenter_state(s, i)] += tally[s];
        weight += tally[s];
      }
  }
  if (!(weight > 0.0)) res.pass = false;
  double tv = 0.0;
  for (std::size_t s = 0; s < m; ++s)
    tv += std::fabs(pattern[s] / weight - co.recentered[s]);
  tv *= 0.5;
  if (!(tv < 0.01)) res.pass = false;
  res.detail = "oracle_residual=" + num(co.max_residual) +
               ";oracle_gate=1e-9;tv=" + num(tv) + ";tv_gate=0.01;replicas=" +
               std::to_string(n);
  return res;
}

// --- criterion 10: covariance evolution identity ----------------------------

CriterionResult crit_covariance(unsigned) {
  CriterionResult res{10, "covariance-formula", "fast", true, "", 0.0};
  double worst = 0.0;

  // two-state analytic case: occupancy decays at rate one, so the variance at
  // time t is q(1-q) with q = p0 e^{-t}
  ProcessParams pd = make_pp("C1", "none", 1.0);
  ExactProcess tiny(pd, 1);
  std::vector<double> f = tiny.cardinality_observable();
  std::vector<double> mu = {0.3, 0.7};
  const double t0 = 0.7;
  double q = 0.7 * std::exp(-t0);
  double analytic = q * (1.0 - q);
  worst = std::max(worst, std::fabs(tiny.covariance_lhs(mu, f, f, t0) - analytic));
  worst = std::max(worst, std::fabs(tiny.covariance_rhs(mu, f, f, t0) - analytic));

  for (const char* gname : {"C2", "C3"}) {
    ProcessParams pp = make_pp(gname, "nn(1)", 1.0);
    ExactProcess oracle(pp, 8);
    std::vector<double> card = oracle.cardinality_observable();
    std::vector<double> nonempty = oracle.nonempty_observable();
    std::vector<double> uniform(oracle.n_states(),
                                1.0 / static_cast<double>(oracle.n_states()));
    for (double t : {0.5, 1.0}) {
      double lhs = oracle.covariance_lhs(uniform, card, nonempty, t);
      double rhs = oracle.covariance_rhs(uniform, card, nonempty, t);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  if (!(worst < 1e-6)) res.pass = false;
  res.detail = "max_residual=" + num(worst) + ";gate=1e-6";
  return res;
}

// --- criterion 11: window law round trip through avoidance probabilities ---

CriterionResult crit_mobius(unsigned) {
  CriterionResult res{11, "mobius-inversion", "fast", true, "", 0.0};
  Rng rng(mix_seed(kSeed, 0x0B01));
  const std::size_t m = 8;  // three window sites
  std::vector<double> p(m);
  double total = 0.0;
  for (auto& v : p) {
    v = rng.uniform();
    total += v;
  }
  for (auto& v : p) v /= total;
  std::vector<double> avoid(m, 0.0);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t s = 0; s < m; ++s)
      if (!(s & u)) avoid[u] += p[s];
  std::vector<double> h(m);
  for (std::size_t v = 0; v < m; ++v) h[v] = avoid[(m - 1) ^ v];
  subset_mobius(h);
  double worst = 0.0;
  for (std::size_t s = 0; s < m; ++s) worst = std::max(worst, std::fabs(h[s] - p[s]));
  // and the forward direction: zeta of the law reproduces the subset masses
  std::vector<double> z = p;
  subset_zeta(z);
  for (std::size_t v = 0; v < m; ++v)
    worst = std::max(worst, std::fabs(z[v] - avoid[(m - 1) ^ v]));
  if (!(worst < 1e-12)) res.pass = false;
  res.detail = "max_residual=" + num(worst) + ";gate=1e-12";
  return res;
}

// --- criterion 12: generator walk overlap decay across geometries ----------

OverlapDecay decay_from_ensemble(const ProcessParams& pp, const Configuration& initial,
                                 double t, std::size_t replicas, std::size_t m_max,
                                 std::size_t fit_lo, std::size_t fit_hi,
                                 std::uint64_t seed, unsigned threads) {
  CampbellEnsemble ens =
      sample_campbell(pp, initial, t, false, replicas, seed, threads);
  if (ens.samples.empty()) throw DataError("ensemble died out entirely");
  std::vector<double> weights;
  weights.reserve(ens.samples.size());
  for (const auto& s : ens.samples) weights.push_back(s.weight);
  Rng pick(mix_seed(seed, kStreamScratch));
  std::vector<std::size_t> idx =
      resample_indices(weights, ens.samples.size(), pick);
  std::vector<OverlapSample> samples;
  samples.reserve(idx.size());
  for (std::size_t i : idx) {
    OverlapSample os;
    os.state = ens.samples[i].state;
    os.typical = os.state.at(pick.uniform_index(os.state.size()));
    samples.push_back(std::move(os));
  }
  return rw_overlap_decay(pp.kernel.group(), samples, m_max, 32, fit_lo, fit_hi,
                          mix_seed(seed, 0xDECA), threads);
}

CriterionResult crit_overlap_contrast(unsigned threads) {
  CriterionResult res{12, "amenability-contrast", "full", true, "", 0.0};
  // pilot baselines for these exact parameters: tree theta near 0.80, line
  // theta near 0.99999; drift beyond the gates below is a regression
  ProcessParams ppf = make_pp("F2", "nn(1)", 0.5);
  OverlapDecay df =
      decay_from_ensemble(ppf, single_site(ppf.kernel.group()), 2.0, 600, 20, 4, 16,
                          mix_seed(kSeed, 0x0C01), threads);
  if (!(df.theta_hat < 0.95)) res.pass = false;
  if (!(df.theta_hat + 3.0 * df.theta_se < 1.0)) res.pass = false;

  // the line run starts from a wide ball and fits late walk steps: both choices
  // suppress the cluster edge and short range correlation transients, which
  // otherwise read as spurious decay at this precision
  ProcessParams ppz = make_pp("Z", "nn(4)", 1.0);
  Configuration wide = Configuration::from(ppz.kernel.group().ball(2000));
  OverlapDecay dz = decay_from_ensemble(ppz, wide, 20.0, 100, 1200, 600, 1200,
                                        mix_seed(kSeed, 0x0C02), threads);
  if (!(std::fabs(dz.theta_hat - 1.0) <= 3.0 * dz.theta_se)) res.pass = false;

  res.detail = "tree_theta=" + num(df.theta_hat) + "+-" + num(df.theta_se) +
               ";tree_gate=<0.95_and_3se_below_1;line_theta=" + num(dz.theta_hat) +
               "+-" + num(dz.theta_se) + ";line_gate=within_3se_of_1";
  return res;
}

// --- criterion 13: reports are byte identical across thread counts ---------

CriterionResult crit_determinism(unsigned) {
  CriterionResult res{13, "determinism", "fast", true, "", 0.0};
  namespace fs = std::filesystem;
  fs::path base = fs::path(".acceptance-tmp");
  std::error_code ec;
  fs::remove_all(base, ec);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");
  fs::create_directories(base / "c");

  ExperimentConfig cfg;
  cfg.experiment = "survival";
  cfg.group = "Z";
  cfg.kernel = "nn(1)";
  cfg.delta = 1.0;
  cfg.horizon = 2.0;
  cfg.escape_threshold = 200;
  cfg.replicas = 5000;
  cfg.seed = 424242;

  auto read_file = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  std::ostringstream sink;
  cfg.threads = 1;
  run_experiment(cfg, (base / "a").string(), sink);
  cfg.threads = 4;
  run_experiment(cfg, (base / "b").string(), sink);
  cfg.threads = 1;
  run_experiment(cfg, (base / "c").string(), sink);
  std::string a = read_file(base / "a" / "survival.csv");
  std::string b = read_file(base / "b" / "survival.csv");
  std::string c = read_file(base / "c" / "survival.csv");
  bool threads_equal = !a.empty() && a == b;
  bool reruns_equal = a == c;
  if (!threads_equal || !reruns_equal) res.pass = false;
  fs::remove_all(base, ec);
  res.detail = std::string("bytes=") + std::to_string(a.size()) +
               ";threads_1_vs_4_equal=" + (threads_equal ? "yes" : "no") +
               ";rerun_equal=" + (reruns_equal ? "yes" : "no");
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(bool full, unsigned threads,
                                            std::ostream& log) {
  using Fn = CriterionResult (*)(unsigned);
  struct Item {
    int id;
    const char* name;
    const char* tier;
    Fn fn;
  };
  const Item items[] = {
      {1, "oracle-transitions", "fast", crit_oracle_transitions},
      {2, "duality", "fast", crit_duality},
      {3, "reversal-symmetry", "fast", crit_reversal_symmetry},
      {4, "moment-bound", "fast", crit_moment_bound},
      {5, "submultiplicativity", "fast", crit_submultiplicative},
      {6, "growth-rate-bounds", "fast", crit_growth_bounds},
      {7, "growth-monotone-lipschitz", "full", crit_growth_monotone},
      {8, "growth-sign-pattern", "full", crit_growth_signs},
      {9, "campbell-law", "fast", crit_campbell},
      {10, "covariance-formula", "fast", crit_covariance},
      {11, "mobius-inversion", "fast", crit_mobius},
      {12, "amenability-contrast", "full", crit_overlap_contrast},
      {13, "determinism", "fast", crit_determinism},
  };
  std::vector<CriterionResult> results;
  for (const Item& item : items) {
    if (std::string(item.tier) == "full" && !full) continue;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r{item.id, item.name, item.tier, false, "", 0.0};
    try {
      r = item.fn(threads);
    } catch (const std::exception& e) {
      // a thrown estimator refusal is a criterion failure, not a crash
      r.detail = std::string("error=") + e.what();
    }
    r.id = item.id;
    r.name = item.name;
    r.tier = item.tier;
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << (r.pass ? "PASS" : "FAIL") << " [" << (r.id < 10 ? " " : "") << r.id << "] "
        << r.name << " (" << r.tier << ", " << fmt_num(r.seconds) << " s): " << r.detail
        << "\n";
    results.push_back(std::move(r));
  }
  std::size_t failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  log << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
      << " (" << results.size() << " run)\n";
  return results;
}

}  // namespace contactlab
