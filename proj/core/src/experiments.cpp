#include "contactlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "contactlab/acceptance.hpp"
#include "contactlab/bounds.hpp"
#include "contactlab/campbell.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/estimators.hpp"
#include "contactlab/exact_ctmc.hpp"
#include "contactlab/graphical.hpp"
#include "contactlab/parallel.hpp"
#include "contactlab/report.hpp"

namespace contactlab {

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  for (auto& s : out) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const std::string& s) { return s.empty(); }),
            out.end());
  return out;
}

std::vector<GroupElement> parse_sites(const Group& group, const std::string& text) {
  std::vector<GroupElement> sites;
  for (const auto& token : split_list(text, ';')) {
    GroupElement e = group.parse_element(token);
    if (std::find(sites.begin(), sites.end(), e) == sites.end())
      sites.push_back(std::move(e));
  }
  return sites;
}

struct Setup {
  Group group;
  ProcessParams pp;
  Configuration initial;
  SimCaps caps;
};

Setup make_setup(const ExperimentConfig& cfg) {
  Group group = Group::parse(cfg.group);
  RateKernel kernel = RateKernel::parse(group, cfg.kernel);
  ProcessParams pp(std::move(kernel), cfg.delta);
  std::vector<GroupElement> sites = parse_sites(group, cfg.initial);
  if (sites.empty()) throw ConfigError("config field 'initial' parsed to no sites");
  Configuration initial;
  for (auto& s : sites) initial.insert(std::move(s));
  return {std::move(group), std::move(pp), std::move(initial),
          SimCaps{cfg.max_infected}};
}

std::vector<double> times_or_horizon(const ExperimentConfig& cfg) {
  std::vector<double> grid = cfg.grid.empty() ? std::vector<double>{cfg.horizon}
                                              : cfg.grid;
  std::sort(grid.begin(), grid.end());
  if (grid.front() <= 0.0) throw ConfigError("grid times must be positive");
  return grid;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

json ensemble_meta(const CampbellEnsemble& ens) {
  json meta;
  meta["replicas"] = ens.replicas;
  meta["extinct"] = ens.extinct;
  meta["capped"] = ens.capped;
  meta["weight_sum"] = ens.weight_sum;
  return meta;
}

// endpoint law of the rate walk translated by each initial site: for probe g
// the statistic is the number of initial sites x with x * endpoint = g
struct TranslatedWalk {
  std::vector<double> mean, se;
};

TranslatedWalk walk_translated(const RateKernel& kernel, const Configuration& initial,
                               double horizon, const std::vector<GroupElement>& probes,
                               std::size_t replicas, std::uint64_t seed,
                               unsigned threads) {
  const Group& group = kernel.group();
  std::vector<std::vector<double>> hits(probes.size(), std::vector<double>(replicas, 0.0));
  parallel_replicas(replicas, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, kStreamReplica, r));
    WalkPath path = simulate_rate_walk(kernel, horizon, rng);
    for (const auto& x : initial.items()) {
      GroupElement end = group.compose(x, path.positions.back());
      for (std::size_t i = 0; i < probes.size(); ++i)
        if (end == probes[i]) hits[i][r] += 1.0;
    }
  });
  TranslatedWalk out;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    EstimateWithError e = mean_with_se(hits[i]);
    out.mean.push_back(e.value);
    out.se.push_back(e.se);
  }
  return out;
}

json run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  std::vector<double> grid = times_or_horizon(cfg);
  const std::size_t n = cfg.replicas;
  std::vector<std::vector<std::uint32_t>> sizes(n);
  std::vector<std::uint8_t> capped(n, 0);
  parallel_replicas(n, cfg.threads, [&](std::size_t r) {
    Rng rng(mix_seed(cfg.seed, kStreamReplica, r));
    TrajectoryResult tr = simulate_sizes(s.pp, s.initial, grid, rng, s.caps);
    sizes[r] = std::move(tr.sizes);
    capped[r] = tr.reason == StopReason::capped ? 1 : 0;
  });

  CsvTable csv("simulate", config_echo(cfg));
  csv.columns({"time", "mean_infected", "se", "alive_fraction", "alive_se", "replicas",
               "seed"});
  std::size_t total_capped = 0;
  for (std::size_t r = 0; r < n; ++r) total_capped += capped[r];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> vals(n), alive(n);
    for (std::size_t r = 0; r < n; ++r) {
      vals[r] = static_cast<double>(sizes[r][k]);
      alive[r] = sizes[r][k] > 0 ? 1.0 : 0.0;
    }
    EstimateWithError m = mean_with_se(vals);
    EstimateWithError a = mean_with_se(alive);
    csv.row({fmt_num(grid[k]), fmt_num(m.value), fmt_num(m.se), fmt_num(a.value),
             fmt_num(a.se), fmt_num(n), fmt_num(cfg.seed)});
  }
  csv.write(join_path(out_dir, "simulate.csv"));

  json res;
  res["grid_points"] = grid.size();
  res["capped"] = total_capped;
  return res;
}

json run_growth_rate(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  std::vector<double> grid = times_or_horizon(cfg);
  if (grid.size() < 2) throw ConfigError("growth-rate needs a grid of at least 2 times");
  GridEstimate pi = estimate_pi(s.pp, s.initial, grid, cfg.replicas, cfg.seed,
                                cfg.threads, s.caps);
  GrowthRateEstimate est =
      estimate_growth_rate(pi, parse_growth_method(cfg.method), cfg.burn_in);

  CsvTable csv("growth-rate", config_echo(cfg));
  csv.columns({"time", "mean_infected", "se", "log_mean", "log_se", "in_fit", "replicas",
               "seed"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    bool in_fit = k >= cfg.burn_in && pi.mean[k] > 0.0;
    double lm = pi.mean[k] > 0.0 ? std::log(pi.mean[k]) : 0.0;
    double ls = pi.mean[k] > 0.0 ? pi.se[k] / pi.mean[k] : 0.0;
    csv.row({fmt_num(grid[k]), fmt_num(pi.mean[k]), fmt_num(pi.se[k]), fmt_num(lm),
             fmt_num(ls), in_fit ? "1" : "0", fmt_num(cfg.replicas), fmt_num(cfg.seed)});
  }
  csv.write(join_path(out_dir, "growth.csv"));

  double lo = -cfg.delta, hi = s.pp.kernel.total_rate() - cfg.delta;
  json res;
  res["r_hat"] = est.r_hat;
  res["half_width"] = est.half_width;
  res["intercept"] = est.intercept;
  res["method"] = cfg.method;
  res["bound_lo"] = lo;
  res["bound_hi"] = hi;
  res["within_bounds"] =
      est.r_hat >= lo - est.half_width && est.r_hat <= hi + est.half_width;
  res["extinct"] = pi.counts.extinct;
  res["capped"] = pi.counts.capped;
  return res;
}

json run_survival(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  SurvivalEstimate est =
      estimate_survival(s.pp, s.initial, cfg.horizon, cfg.escape_threshold,
                        cfg.replicas, cfg.seed, cfg.threads, s.caps);
  CsvTable csv("survival", config_echo(cfg));
  csv.columns({"horizon", "escape_threshold", "rho_hat", "se", "replicas", "extinct",
               "escaped", "alive_at_horizon", "capped", "seed"});
  csv.row({fmt_num(est.horizon), fmt_num(est.escape_threshold), fmt_num(est.rho_hat),
           fmt_num(est.se), fmt_num(est.replicas), fmt_num(est.extinct),
           fmt_num(est.escaped), fmt_num(est.alive_at_horizon), fmt_num(est.capped),
           fmt_num(cfg.seed)});
  csv.write(join_path(out_dir, "survival.csv"));
  json res;
  res["rho_hat"] = est.rho_hat;
  res["se"] = est.se;
  res["escaped"] = est.escaped;
  res["alive_at_horizon"] = est.alive_at_horizon;
  res["capped"] = est.capped;
  return res;
}

json run_delta_c(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  DeltaCEstimate est =
      estimate_delta_c(s.pp.kernel, s.initial, cfg.horizon, cfg.escape_threshold,
                       cfg.replicas, cfg.depth, cfg.seed, cfg.threads, s.caps);
  CsvTable csv("delta-c", config_echo(cfg));
  csv.columns({"delta", "rho_hat", "se", "replicas", "seed"});
  for (const auto& p : est.trace)
    csv.row({fmt_num(p.delta), fmt_num(p.rho_hat), fmt_num(p.se), fmt_num(p.replicas),
             fmt_num(cfg.seed)});
  csv.write(join_path(out_dir, "deltac.csv"));
  json res;
  res["lower"] = est.lower;
  res["upper"] = est.upper;
  res["conclusive"] = est.conclusive;
  res["probes"] = est.trace.size();
  return res;
}

json run_duality_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  std::vector<GroupElement> b_sites = parse_sites(s.group, cfg.dual_initial);
  if (b_sites.empty()) throw ConfigError("config field 'dual_initial' parsed to no sites");
  Configuration b_conf;
  for (auto& e : b_sites) b_conf.insert(std::move(e));
  ProcessParams dual = s.pp.reversed();
  std::vector<double> grid = times_or_horizon(cfg);

  CsvTable csv("duality-check", config_echo(cfg));
  csv.columns({"time", "p_forward", "se_forward", "p_dual", "se_dual", "diff",
               "combined_se", "z", "replicas", "seed"});
  json rows = json::array();
  double max_z = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto fwd = estimate_avoidance(s.pp, s.initial, {b_conf}, grid[k], cfg.replicas,
                                  mix_seed(cfg.seed, 0x6677ULL, k), cfg.threads, s.caps);
    auto rev = estimate_avoidance(dual, b_conf, {s.initial}, grid[k], cfg.replicas,
                                  mix_seed(cfg.seed, 0x7766ULL, k), cfg.threads, s.caps);
    double diff = fwd[0].value - rev[0].value;
    double se = std::sqrt(fwd[0].se * fwd[0].se + rev[0].se * rev[0].se);
    double z = se > 0.0 ? diff / se : 0.0;
    max_z = std::max(max_z, std::fabs(z));
    csv.row({fmt_num(grid[k]), fmt_num(fwd[0].value), fmt_num(fwd[0].se),
             fmt_num(rev[0].value), fmt_num(rev[0].se), fmt_num(diff), fmt_num(se),
             fmt_num(z), fmt_num(cfg.replicas), fmt_num(cfg.seed)});
    json row;
    row["time"] = grid[k];
    row["z"] = z;
    rows.push_back(row);
  }
  csv.write(join_path(out_dir, "duality.csv"));
  json res;
  res["rows"] = rows;
  res["max_abs_z"] = max_z;
  return res;
}

json run_martingale_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  Functional f = parse_functional(cfg.functional);
  MartingaleCheck chk = check_martingale_drift(s.pp, s.initial, cfg.horizon, f,
                                               cfg.replicas, cfg.seed, cfg.threads,
                                               s.caps);
  double z = chk.residual.se > 0.0 ? chk.residual.value / chk.residual.se : 0.0;
  CsvTable csv("martingale-check", config_echo(cfg));
  csv.columns({"functional", "horizon", "residual", "se", "z", "replicas", "capped",
               "seed"});
  csv.row({cfg.functional, fmt_num(chk.horizon), fmt_num(chk.residual.value),
           fmt_num(chk.residual.se), fmt_num(z), fmt_num(cfg.replicas),
           fmt_num(chk.capped), fmt_num(cfg.seed)});
  csv.write(join_path(out_dir, "martingale.csv"));
  json res;
  res["residual"] = chk.residual.value;
  res["se"] = chk.residual.se;
  res["z"] = z;
  res["capped"] = chk.capped;
  return res;
}

json run_domination(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  std::vector<GroupElement> pattern = parse_sites(s.group, cfg.pattern);
  if (pattern.empty()) throw ConfigError("config field 'pattern' parsed to no sites");
  DominationEstimate est = estimate_domination(s.pp, s.initial, pattern, cfg.horizon,
                                               cfg.replicas, cfg.seed, cfg.threads,
                                               s.caps);
  CsvTable csv("domination", config_echo(cfg));
  csv.columns({"horizon", "p_hat", "se", "alive", "replicas", "capped", "seed"});
  csv.row({fmt_num(cfg.horizon), fmt_num(est.p_hat), fmt_num(est.se),
           fmt_num(est.alive), fmt_num(est.replicas), fmt_num(est.capped),
           fmt_num(cfg.seed)});
  csv.write(join_path(out_dir, "domination.csv"));
  json res;
  res["p_hat"] = est.p_hat;
  res["se"] = est.se;
  res["alive"] = est.alive;
  return res;
}

json run_campbell(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  std::vector<GroupElement> window;
  if (cfg.window.empty()) {
    window.push_back(s.group.identity());
    for (const auto& g : s.group.generators())
      if (std::find(window.begin(), window.end(), g) == window.end())
        window.push_back(g);
  } else {
    window = parse_sites(s.group, cfg.window);
  }
  if (window.empty() || window.size() > 16)
    throw ConfigError("campbell window must have 1..16 distinct sites");

  CampbellEnsemble ens =
      sample_campbell(s.pp, s.initial, cfg.time_param, cfg.exponential_time,
                      cfg.replicas, cfg.seed, cfg.threads, s.caps);
  std::vector<double> pattern = campbell_window_pattern(s.group, ens, window);

  CsvTable csv("campbell", config_echo(cfg));
  csv.columns({"mask", "probability", "replicas", "seed"});
  for (std::size_t m = 0; m < pattern.size(); ++m)
    csv.row({fmt_num(m), fmt_num(pattern[m]), fmt_num(cfg.replicas), fmt_num(cfg.seed)});
  csv.write(join_path(out_dir, "campbell_pattern.csv"));

  json res;
  res["ensemble"] = ensemble_meta(ens);
  json wnames = json::array();
  for (const auto& w : window) wnames.push_back(s.group.format_element(w));
  res["window"] = wnames;

  if (!cfg.compare_times.empty()) {
    CampbellTrend trend = campbell_vs_invariant(
        s.pp, s.initial, window, cfg.compare_times, cfg.exponential_time, cfg.replicas,
        cfg.invariant_horizon, cfg.escape_threshold, cfg.invariant_replicas,
        mix_seed(cfg.seed, 0x636d70ULL), cfg.threads, s.caps);
    CsvTable tcsv("campbell-trend", config_echo(cfg));
    tcsv.columns({"time_param", "tv", "tv_se", "replicas", "seed"});
    for (std::size_t i = 0; i < trend.time_params.size(); ++i)
      tcsv.row({fmt_num(trend.time_params[i]), fmt_num(trend.tv[i]),
                fmt_num(trend.tv_se[i]), fmt_num(cfg.replicas), fmt_num(cfg.seed)});
    tcsv.write(join_path(out_dir, "campbell_trend.csv"));
    res["trend_clip_mass"] = trend.target.clip_mass;
    res["dual_survives"] = trend.target.dual_survives;
    res["final_tv"] = trend.tv.back();
  }
  return res;
}

json run_branching_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  std::vector<GroupElement> probes = s.group.ball(cfg.probe_radius);
  BranchingStats br =
      estimate_branching(s.pp, s.initial, cfg.horizon, probes, cfg.replicas, cfg.seed,
                         cfg.threads, cfg.population_cap);
  TranslatedWalk walk =
      walk_translated(s.pp.kernel, s.initial, cfg.horizon, probes, cfg.replicas,
                      mix_seed(cfg.seed, 0x77616cULL), cfg.threads);
  const double scale =
      std::exp((s.pp.kernel.total_rate() - cfg.delta) * cfg.horizon);

  CsvTable csv("branching-check", config_echo(cfg));
  csv.columns({"site", "branching_mean", "branching_se", "walk_scaled", "walk_scaled_se",
               "diff", "combined_se", "z", "replicas", "seed"});
  double max_z = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    double w = walk.mean[i] * scale;
    double wse = walk.se[i] * scale;
    double diff = br.mean[i] - w;
    double se = std::sqrt(br.se[i] * br.se[i] + wse * wse);
    double z = se > 0.0 ? diff / se : 0.0;
    max_z = std::max(max_z, std::fabs(z));
    csv.row({s.group.format_element(probes[i]), fmt_num(br.mean[i]), fmt_num(br.se[i]),
             fmt_num(w), fmt_num(wse), fmt_num(diff), fmt_num(se), fmt_num(z),
             fmt_num(cfg.replicas), fmt_num(cfg.seed)});
  }
  csv.write(join_path(out_dir, "branching.csv"));

  json res;
  res["population_mean"] = br.population.value;
  res["population_se"] = br.population.se;
  res["population_expected"] =
      scale * static_cast<double>(s.initial.size());
  res["dominance_violations"] = br.dominance_violations;
  res["capped"] = br.capped;
  res["max_abs_z"] = max_z;
  if (cfg.split_h > 0.0) {
    SplitBound sb = split_bound_check(s.pp, s.initial, cfg.horizon, cfg.split_h,
                                      cfg.replicas, mix_seed(cfg.seed, 0x73706cULL),
                                      cfg.threads, s.caps);
    json sj;
    sj["h"] = sb.h;
    sj["lhs_mean"] = sb.lhs_mean;
    sj["lhs_se"] = sb.lhs_se;
    sj["ball_radius"] = sb.ball_radius;
    sj["ball_size"] = sb.ball_size;
    sj["tail_prob"] = sb.tail_prob;
    sj["tail_se"] = sb.tail_se;
    sj["rhs"] = sb.rhs;
    sj["slack"] = sb.slack;
    sj["holds"] = sb.holds;
    res["split_bound"] = sj;
  }
  return res;
}

json run_ball_profile(const ExperimentConfig& cfg, const std::string& out_dir) {
  Group group = Group::parse(cfg.group);
  BallProfile prof = ball_growth_profile(group, cfg.max_radius, cfg.threshold);
  CsvTable csv("ball-profile", config_echo(cfg));
  csv.columns({"radius", "count", "log_count_ratio"});
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    csv.row({fmt_num(static_cast<std::int64_t>(prof.radii[i])), fmt_num(prof.counts[i]),
             fmt_num(prof.rate[i])});
  csv.write(join_path(out_dir, "ball.csv"));
  json res;
  res["classification"] = to_string(prof.classification);
  res["complete"] = prof.complete;
  res["threshold"] = prof.threshold;
  res["radii"] = prof.radii.size();
  return res;
}

json run_rw_decay(const ExperimentConfig& cfg, const std::string& out_dir) {
  Setup s = make_setup(cfg);
  CampbellEnsemble ens =
      sample_campbell(s.pp, s.initial, cfg.time_param, cfg.exponential_time,
                      cfg.replicas, cfg.seed, cfg.threads, s.caps);
  if (ens.samples.empty()) throw DataError("all replicas died; no clusters to walk on");

  std::vector<double> weights;
  weights.reserve(ens.samples.size());
  for (const auto& w : ens.samples) weights.push_back(w.weight);
  Rng pick(mix_seed(cfg.seed, kStreamScratch));
  std::vector<std::size_t> idx = resample_indices(weights, ens.samples.size(), pick);
  std::vector<OverlapSample> samples;
  samples.reserve(idx.size());
  for (std::size_t i : idx) {
    const Configuration& state = ens.samples[i].state;
    OverlapSample os;
    os.state = state;
    os.typical = state.at(pick.uniform_index(state.size()));
    samples.push_back(std::move(os));
  }

  OverlapDecay decay =
      rw_overlap_decay(s.group, samples, cfg.m_max, cfg.walks, cfg.fit_lo, cfg.fit_hi,
                       mix_seed(cfg.seed, 0x6465ULL), cfg.threads);

  CsvTable csv("rw-decay", config_echo(cfg));
  csv.columns({"m", "p", "se", "samples", "walks", "seed"});
  for (std::size_t m = 0; m < decay.p.size(); ++m)
    csv.row({fmt_num(m), fmt_num(decay.p[m]), fmt_num(decay.se[m]),
             fmt_num(decay.samples), fmt_num(decay.walks_per_sample),
             fmt_num(cfg.seed)});
  csv.write(join_path(out_dir, "rwdecay.csv"));

  json res;
  res["theta_hat"] = decay.theta_hat;
  res["theta_se"] = decay.theta_se;
  res["fit_lo"] = decay.fit_lo;
  res["fit_hi"] = decay.fit_hi;
  res["samples"] = decay.samples;
  res["ensemble"] = ensemble_meta(ens);
  return res;
}

json run_oracle_check(const ExperimentConfig& cfg, const std::string& out_dir,
                      bool& all_pass) {
  Setup s = make_setup(cfg);
  ExactProcess oracle(s.pp, cfg.site_cap);
  ExactProcess dual_oracle(s.pp.reversed(), cfg.site_cap);
  std::vector<double> grid = times_or_horizon(cfg);

  struct Check {
    std::string name;
    double value;
    double tol;
  };
  std::vector<Check> checks;

  double row_sum = 0.0;
  const std::size_t m = oracle.n_states();
  for (std::size_t a = 0; a < m; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < m; ++b) acc += oracle.rate(a, b);
    row_sum = std::max(row_sum, std::fabs(acc));
  }
  checks.push_back({"generator_row_sums", row_sum, 1e-12});

  double expm_diff = 0.0, semigroup = 0.0;
  for (double t : grid) {
    std::vector<double> pt = oracle.expm_reference(t);
    for (std::size_t a = 0; a < m; ++a) {
      std::vector<double> row = oracle.distribution(a, t);
      for (std::size_t b = 0; b < m; ++b)
        expm_diff = std::max(expm_diff, std::fabs(row[b] - pt[a * m + b]));
    }
    // S_{t/2} S_{t/2} = S_t on the cardinality observable
    std::vector<double> f = oracle.cardinality_observable();
    std::vector<double> one = oracle.apply_semigroup(f, t);
    std::vector<double> two =
        oracle.apply_semigroup(oracle.apply_semigroup(f, t / 2), t / 2);
    for (std::size_t a = 0; a < m; ++a)
      semigroup = std::max(semigroup, std::fabs(one[a] - two[a]));
  }
  checks.push_back({"uniformization_vs_expm", expm_diff, 1e-10});
  checks.push_back({"semigroup_property", semigroup, 1e-9});

  // duality against the reversed chain, all singleton pairs
  double dual_diff = 0.0;
  const std::size_t n = oracle.n_sites();
  for (double t : grid)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t a = std::size_t{1} << i, b = std::size_t{1} << j;
        std::vector<double> pa = oracle.distribution(a, t);
        std::vector<double> pb = dual_oracle.distribution(b, t);
        double avoid_f = 0.0, avoid_d = 0.0;
        for (std::size_t sidx = 0; sidx < m; ++sidx) {
          if (!(sidx & b)) avoid_f += pa[sidx];
          if (!(sidx & a)) avoid_d += pb[sidx];
        }
        dual_diff = std::max(dual_diff, std::fabs(avoid_f - avoid_d));
      }
  checks.push_back({"duality_vs_reversed", dual_diff, 1e-9});

  // quadratic variation operator: bracket versus explicit form
  std::vector<double> f = oracle.cardinality_observable();
  std::vector<double> g = oracle.nonempty_observable();
  std::vector<double> ge = oracle.gamma_explicit(f, g);
  std::vector<double> gb = oracle.gamma_bracket(f, g);
  double gamma_diff = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    gamma_diff = std::max(gamma_diff, std::fabs(ge[a] - gb[a]));
  checks.push_back({"gamma_bracket_vs_explicit", gamma_diff, 1e-12});

  std::vector<double> mu(m, 1.0 / static_cast<double>(m));
  double cov_res = 0.0;
  for (double t : grid)
    cov_res = std::max(cov_res, std::fabs(oracle.covariance_lhs(mu, f, g, t) -
                                          oracle.covariance_rhs(mu, f, g, t)));
  checks.push_back({"covariance_identity", cov_res, 1e-6});

  CsvTable csv("oracle-check", config_echo(cfg));
  csv.columns({"check", "value", "tolerance", "pass"});
  json rows = json::array();
  for (const auto& c : checks) {
    bool ok = c.value <= c.tol;
    all_pass = all_pass && ok;
    csv.row({c.name, fmt_num(c.value), fmt_num(c.tol), ok ? "1" : "0"});
    json row;
    row["check"] = c.name;
    row["value"] = c.value;
    row["tolerance"] = c.tol;
    row["pass"] = ok;
    rows.push_back(row);
  }
  csv.write(join_path(out_dir, "oracle.csv"));
  json res;
  res["checks"] = rows;
  res["all_pass"] = all_pass;
  return res;
}

json run_accept(const ExperimentConfig& cfg, const std::string& out_dir,
                std::ostream& log, bool& all_pass) {
  if (cfg.tier != "fast" && cfg.tier != "full")
    throw ConfigError("config field 'tier' must be 'fast' or 'full'");
  std::vector<CriterionResult> results =
      run_acceptance(cfg.tier == "full", cfg.threads, log);
  CsvTable csv("accept", config_echo(cfg));
  csv.columns({"id", "name", "tier", "pass", "detail"});
  json rows = json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    csv.row({fmt_num(static_cast<std::int64_t>(r.id)), r.name, r.tier,
             r.pass ? "1" : "0", r.detail});
    json row;
    row["id"] = r.id;
    row["name"] = r.name;
    row["tier"] = r.tier;
    row["pass"] = r.pass;
    row["detail"] = r.detail;
    row["seconds"] = r.seconds;
    rows.push_back(row);
  }
  csv.write(join_path(out_dir, "acceptance.csv"));
  json res;
  res["criteria"] = rows;
  res["all_pass"] = all_pass;
  return res;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::ostream& log) {
  auto t0 = std::chrono::steady_clock::now();
  bool all_pass = true;
  json results;
  if (cfg.experiment == "simulate") {
    results = run_simulate(cfg, out_dir);
  } else if (cfg.experiment == "growth-rate") {
    results = run_growth_rate(cfg, out_dir);
  } else if (cfg.experiment == "survival") {
    results = run_survival(cfg, out_dir);
  } else if (cfg.experiment == "delta-c") {
    results = run_delta_c(cfg, out_dir);
  } else if (cfg.experiment == "duality-check") {
    results = run_duality_check(cfg, out_dir);
  } else if (cfg.experiment == "martingale-check") {
    results = run_martingale_check(cfg, out_dir);
  } else if (cfg.experiment == "domination") {
    results = run_domination(cfg, out_dir);
  } else if (cfg.experiment == "campbell") {
    results = run_campbell(cfg, out_dir);
  } else if (cfg.experiment == "branching-check") {
    results = run_branching_check(cfg, out_dir);
  } else if (cfg.experiment == "ball-profile") {
    results = run_ball_profile(cfg, out_dir);
  } else if (cfg.experiment == "rw-decay") {
    results = run_rw_decay(cfg, out_dir);
  } else if (cfg.experiment == "oracle-check") {
    results = run_oracle_check(cfg, out_dir, all_pass);
  } else if (cfg.experiment == "accept") {
    results = run_accept(cfg, out_dir, log, all_pass);
  } else {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json summary;
  summary["tool"] = "contactlab";
  summary["version"] = kToolVersion;
  summary["experiment"] = cfg.experiment;
  summary["config"] = json::parse(config_echo(cfg));
  summary["results"] = results;
  // timing is informational and exempt from the determinism contract
  summary["timing_seconds"] = seconds;
  write_text_file(join_path(out_dir, "summary.json"), summary.dump(2) + "\n");

  log << cfg.experiment << ": done in " << fmt_num(seconds) << " s, artifacts in "
      << (out_dir.empty() ? "." : out_dir) << "\n";
  return all_pass ? kExitSuccess : kExitAcceptance;
}

}  // namespace contactlab
