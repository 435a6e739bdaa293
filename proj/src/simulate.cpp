#include "bounded/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "bounded/empirical.hpp"
#include "bounded/errors.hpp"
#include "bounded/inference.hpp"
#include "bounded/parallel.hpp"
#include "bounded/seed.hpp"

namespace bounded {

namespace {

double outcome_m(const DgpConfig& cfg, double u, int t) {
  const double lambda = t == 1 ? cfg.lambda1 : cfg.lambda2;
  switch (cfg.model) {
    case OutcomeModel::Additive: return u + lambda;
    case OutcomeModel::Exp: return std::exp(lambda + cfg.exp_scale * u);
    case OutcomeModel::Cubic: return u + cfg.cubic_coeff * u * u * u + lambda;
  }
  throw InvalidConfig("unknown outcome model");
}

double stratum_trend(const DgpConfig& cfg, Stratum v) {
  switch (v) {
    case Stratum::AO: return 0.0;
    case Stratum::OT: return cfg.trend_ot;
    case Stratum::OC: return cfg.trend_oc;
    case Stratum::NO: return cfg.trend_no;
  }
  return 0.0;
}

struct UnitDraw {
  int g = 0;
  Stratum v = Stratum::AO;
  int s1 = 1;
  int s2_0 = 1, s2_1 = 1;  // potential selections
  double y1_0 = 0.0;       // pre-period outcome (no treatment yet)
  double y2_0 = 0.0, y2_1 = 0.0;
  std::size_t attributed = 0;  // failing source for non-AO strata
};

// One struct drives both samplers so the draw sequence is identical; only
// the stratum-assignment step differs.
class UnitSampler {
 public:
  UnitSampler(const DgpConfig& cfg, std::uint64_t seed, bool threshold)
      : cfg_(cfg), threshold_(threshold), rng_(seed) {
    for (int g = 0; g < 2; ++g) {
      const GroupConfig& gc = cfg.group[g];
      // Block order along the selection unobservable: NO, OC, OT, AO.
      cum_[g][0] = gc.p_no;
      cum_[g][1] = cum_[g][0] + gc.p_oc;
      cum_[g][2] = cum_[g][1] + gc.p_ot;
      cum_[g][3] = 1.0;
      // Step-function thresholds: S2(w) = 1(u >= c_w). Valid intervals as
      // long as at most one of p_oc/p_ot is positive per group.
      c0_[g] = gc.p_no + gc.p_ot;
      c1_[g] = gc.p_no + gc.p_oc;
    }
    for (std::size_t j = 0; j < cfg.directions.size(); ++j)
      (cfg.directions[j] == Direction::Positive ? pos_ : neg_).push_back(j);
    no_pick_ = std::discrete_distribution<std::size_t>(cfg.no_weights.begin(),
                                                       cfg.no_weights.end());
  }

  UnitDraw next() {
    UnitDraw d;
    d.g = std::bernoulli_distribution(cfg_.p_treat)(rng_) ? 1 : 0;
    const double z_u = normal_(rng_);
    const double z_a = normal_(rng_);
    const double eps1 = normal_(rng_);
    const double eps2 = normal_(rng_);

    const double u_unif = norm_cdf(z_u);
    const GroupConfig& gc = cfg_.group[d.g];
    if (threshold_) {
      d.s2_0 = u_unif >= c0_[d.g] ? 1 : 0;
      d.s2_1 = u_unif >= c1_[d.g] ? 1 : 0;
      if (d.s2_0 == 1 && d.s2_1 == 1) d.v = Stratum::AO;
      else if (d.s2_0 == 0 && d.s2_1 == 0) d.v = Stratum::NO;
      else if (d.s2_0 == 1) d.v = Stratum::OC;
      else d.v = Stratum::OT;
    } else {
      if (u_unif < cum_[d.g][0]) d.v = Stratum::NO;
      else if (u_unif < cum_[d.g][1]) d.v = Stratum::OC;
      else if (u_unif < cum_[d.g][2]) d.v = Stratum::OT;
      else d.v = Stratum::AO;
      d.s2_0 = (d.v == Stratum::AO || d.v == Stratum::OC) ? 1 : 0;
      d.s2_1 = (d.v == Stratum::AO || d.v == Stratum::OT) ? 1 : 0;
    }
    d.s1 = u_unif >= gc.s1_missing ? 1 : 0;

    const double rho = cfg_.selection_link;
    const double z_out = rho * z_u + std::sqrt(1.0 - rho * rho) * z_a;
    const double alpha = gc.u_mean + gc.u_sigma * z_out;
    const double u1 = alpha + cfg_.sigma_noise * eps1;
    const double u2 = alpha + cfg_.sigma_noise * eps2;
    d.y1_0 = outcome_m(cfg_, u1, 1);
    d.y2_0 = outcome_m(cfg_, u2, 2) + stratum_trend(cfg_, d.v);
    double tau = cfg_.effect_value;
    if (cfg_.effect == EffectKind::Linear) tau += cfg_.effect_slope * u2;
    d.y2_1 = d.y2_0 + tau;

    if (d.v != Stratum::AO && cfg_.directions.size() > 1) {
      if (d.v == Stratum::NO) {
        d.attributed = no_pick_(rng_);
      } else if (d.v == Stratum::OT) {
        d.attributed = pos_[pick_uniform(pos_.size())];
      } else {
        d.attributed = neg_[pick_uniform(neg_.size())];
      }
    }
    return d;
  }

 private:
  std::size_t pick_uniform(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  const DgpConfig& cfg_;
  bool threshold_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::array<std::array<double, 4>, 2> cum_{};
  std::array<double, 2> c0_{}, c1_{};
  std::discrete_distribution<std::size_t> no_pick_;
  std::vector<std::size_t> pos_, neg_;
};

GeneratedPanel generate_impl(const DgpConfig& cfg, bool threshold) {
  validate_config(cfg);
  if (threshold) {
    if (cfg.directions.size() != 1)
      throw InvalidConfig("threshold sampler supports a single source only");
    for (const auto& gc : cfg.group)
      if (gc.p_oc > 0.0 && gc.p_ot > 0.0)
        throw InvalidConfig("threshold sampler needs one of p_oc/p_ot to be zero");
  }
  const std::size_t J = cfg.directions.size();
  UnitSampler sampler(cfg, cfg.seed, threshold);

  std::vector<UnitRecord> units;
  std::vector<Stratum> strata;
  units.reserve(cfg.n);
  strata.reserve(cfg.n);
  char idbuf[24];
  for (std::size_t i = 0; i < cfg.n; ++i) {
    UnitDraw d = sampler.next();
    UnitRecord u;
    std::snprintf(idbuf, sizeof(idbuf), "u%06zu", i + 1);
    u.id = idbuf;
    u.group = d.g;
    u.s1 = d.s1;
    u.s2 = d.g == 1 ? d.s2_1 : d.s2_0;
    if (u.s1 == 1) u.y1 = d.y1_0;
    if (u.s2 == 1) u.y2 = d.g == 1 ? d.y2_1 : d.y2_0;
    if (J > 1) {
      u.sources_t1.assign(J, 1);
      u.sources_t2.assign(J, 1);
      if (u.s1 == 0) u.sources_t1[d.attributed] = 0;
      if (u.s2 == 0) u.sources_t2[d.attributed] = 0;
    }
    units.push_back(std::move(u));
    strata.push_back(d.v);
  }
  return GeneratedPanel{PanelDataset(std::move(units), J, cfg.directions),
                        std::move(strata)};
}

}  // namespace

void validate_config(const DgpConfig& cfg) {
  if (cfg.n == 0) throw InvalidConfig("n must be positive");
  if (!(cfg.p_treat > 0.0 && cfg.p_treat < 1.0))
    throw InvalidConfig("p_treat must lie in (0,1)");
  if (!(std::fabs(cfg.selection_link) <= 1.0))
    throw InvalidConfig("selection_link must lie in [-1,1]");
  if (!(cfg.sigma_noise >= 0.0)) throw InvalidConfig("sigma_noise must be nonnegative");
  for (double x : {cfg.lambda1, cfg.lambda2, cfg.exp_scale, cfg.cubic_coeff,
                   cfg.trend_ot, cfg.trend_oc, cfg.trend_no, cfg.effect_value,
                   cfg.effect_slope})
    if (!std::isfinite(x)) throw InvalidConfig("non-finite outcome/effect parameter");

  for (int g = 0; g < 2; ++g) {
    const GroupConfig& gc = cfg.group[g];
    const std::string tag = "group" + std::to_string(g) + ": ";
    for (double p : {gc.p_ao, gc.p_no, gc.p_oc, gc.p_ot})
      if (!(p >= 0.0)) throw InvalidConfig(tag + "stratum shares must be nonnegative");
    if (std::fabs(gc.p_ao + gc.p_no + gc.p_oc + gc.p_ot - 1.0) > 1e-9)
      throw InvalidConfig(tag + "stratum shares must sum to 1");
    if (!(gc.u_sigma > 0.0)) throw InvalidConfig(tag + "u_sigma must be positive");
    if (!(gc.s1_missing >= 0.0 && gc.s1_missing <= gc.p_no + 1e-12))
      throw InvalidConfig(tag + "s1_missing must lie in [0, p_no]");
  }

  const std::size_t J = cfg.directions.size();
  if (J == 0) throw InvalidConfig("at least one attrition source required");
  if (cfg.no_weights.size() != J)
    throw InvalidConfig("no_weights must have one entry per source");
  double wsum = 0.0;
  for (double w : cfg.no_weights) {
    if (!(w >= 0.0)) throw InvalidConfig("no_weights must be nonnegative");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > 1e-9) throw InvalidConfig("no_weights must sum to 1");
  bool any_pos = false, any_neg = false;
  for (Direction dir : cfg.directions)
    (dir == Direction::Positive ? any_pos : any_neg) = true;
  for (const auto& gc : cfg.group) {
    if (gc.p_ot > 0.0 && !any_pos)
      throw InvalidConfig("OT mass needs a positive-monotonicity source");
    if (gc.p_oc > 0.0 && !any_neg)
      throw InvalidConfig("OC mass needs a negative-monotonicity source");
  }

  // Numeric monotonicity check of the outcome model in u, both periods.
  for (int t = 1; t <= 2; ++t) {
    double prev = outcome_m(cfg, -8.0, t);
    for (int i = 1; i <= 128; ++i) {
      double u = -8.0 + i * (16.0 / 128.0);
      double cur = outcome_m(cfg, u, t);
      if (!(cur > prev))
        throw InvalidConfig("outcome model must be strictly increasing in u");
      prev = cur;
    }
  }
}

GeneratedPanel generate(const DgpConfig& cfg) { return generate_impl(cfg, false); }

GeneratedPanel generate_threshold(const DgpConfig& cfg) {
  return generate_impl(cfg, true);
}

SimTruth true_values(const DgpConfig& cfg, std::size_t oracle_n) {
  validate_config(cfg);
  if (oracle_n < 100000)
    throw InvalidConfig("oracle_n below 1e5 gives too coarse a truth");
  // Fixed oracle seed: the truth is a property of the data-generating
  // process, not of any particular sample draw.
  DgpConfig oracle_cfg = cfg;
  oracle_cfg.seed = 0x0AC1E5EEDull;
  UnitSampler sampler(oracle_cfg, oracle_cfg.seed, false);

  std::vector<double> y2_1_ao, y2_0_ao;
  double att_sum = 0.0;
  std::size_t n_t_ao = 0, n_t_obs1 = 0, n_c_ao = 0, n_c_obs0 = 0;
  for (std::size_t i = 0; i < oracle_n; ++i) {
    UnitDraw d = sampler.next();
    if (d.g == 1) {
      if (d.s2_1 == 1) ++n_t_obs1;
      if (d.v == Stratum::AO) {
        ++n_t_ao;
        att_sum += d.y2_1 - d.y2_0;
        y2_1_ao.push_back(d.y2_1);
        y2_0_ao.push_back(d.y2_0);
      }
    } else {
      if (d.s2_0 == 1) ++n_c_obs0;
      if (d.v == Stratum::AO) ++n_c_ao;
    }
  }
  if (n_t_ao == 0 || n_c_ao == 0)
    throw InvalidConfig("oracle found no always-observed units");

  SimTruth out;
  out.oracle_n = oracle_n;
  out.att_ao = att_sum / static_cast<double>(n_t_ao);
  out.pi1 = static_cast<double>(n_t_ao) / static_cast<double>(n_t_obs1);
  out.pi0 = static_cast<double>(n_c_ao) / static_cast<double>(n_c_obs0);
  Ecdf f1(std::move(y2_1_ao));
  Ecdf f0(std::move(y2_0_ao));
  out.qtt.reserve(99);
  for (int k = 1; k <= 99; ++k) {
    const double q = k / 100.0;
    out.qtt.push_back({q, f1.quantile(q) - f0.quantile(q)});
  }
  return out;
}

CoverageReport coverage_study(const DgpConfig& cfg, const StudySpec& spec) {
  if (spec.reps < 1) throw InvalidConfig("study needs at least one replication");
  CoverageReport rep;
  rep.truth = true_values(cfg, spec.oracle_n);
  rep.reps = spec.reps;

  const std::size_t R = static_cast<std::size_t>(spec.reps);
  struct Slot {
    double lb = 0, ub = 0, pi0 = 0, pi1 = 0;
    double naive = 0, seldid = 0, ci_width = 0;
    bool bcover = false, cicover = false, clip = false, clamp = false;
    bool failed = true;
  };
  std::vector<Slot> slots(R);

  parallel_for_index(R, [&](std::size_t r) {
    Slot& s = slots[r];
    try {
      DgpConfig draw_cfg = cfg;
      draw_cfg.seed = mix_seed(spec.seed, r);
      GeneratedPanel gp = generate(draw_cfg);
      BoundsResult b = run_pipeline(gp.data, spec.estimator);
      const auto& t = gp.data.tallies();
      const std::size_t n_used =
          static_cast<std::size_t>(t.s2_sum[0] + t.s2_sum[1]);
      BootstrapSigmas sig = bootstrap_sigmas(gp.data, spec.estimator, spec.n_boot,
                                             mix_seed(spec.seed ^ 0xB007ull, r));
      CiInterval ci = confidence_interval(b, sig, n_used, spec.alpha);
      s.lb = b.lb;
      s.ub = b.ub;
      s.pi0 = b.proportions.pi0;
      s.pi1 = b.proportions.pi1;
      s.naive = naive_did(gp.data);
      s.seldid = selection_did(gp.data);
      s.ci_width = ci.hi - ci.lo;
      s.bcover = b.lb <= rep.truth.att_ao && rep.truth.att_ao <= b.ub;
      s.cicover = ci.lo <= rep.truth.att_ao && rep.truth.att_ao <= ci.hi;
      s.clip = b.proportions.pi0_clipped || b.proportions.pi1_clipped;
      s.clamp = b.clamp_events > 0;
      s.failed = false;
    } catch (const Error&) {
      s.failed = true;
    }
  });

  int kept = 0;
  for (const Slot& s : slots)
    if (!s.failed) ++kept;
  rep.reps_failed = spec.reps - kept;
  if (kept == 0) return rep;

  auto mean_of = [&](auto&& get) {
    double sum = 0.0;
    for (const Slot& s : slots)
      if (!s.failed) sum += get(s);
    return sum / kept;
  };
  auto sd_of = [&](auto&& get, double mean) {
    if (kept < 2) return 0.0;
    double ss = 0.0;
    for (const Slot& s : slots)
      if (!s.failed) ss += (get(s) - mean) * (get(s) - mean);
    return std::sqrt(ss / (kept - 1));
  };

  rep.bounds_cover = mean_of([](const Slot& s) { return s.bcover ? 1.0 : 0.0; });
  rep.ci_cover = mean_of([](const Slot& s) { return s.cicover ? 1.0 : 0.0; });
  rep.mean_lb = mean_of([](const Slot& s) { return s.lb; });
  rep.sd_lb = sd_of([](const Slot& s) { return s.lb; }, rep.mean_lb);
  rep.mean_ub = mean_of([](const Slot& s) { return s.ub; });
  rep.sd_ub = sd_of([](const Slot& s) { return s.ub; }, rep.mean_ub);
  rep.mean_pi0 = mean_of([](const Slot& s) { return s.pi0; });
  rep.sd_pi0 = sd_of([](const Slot& s) { return s.pi0; }, rep.mean_pi0);
  rep.mean_pi1 = mean_of([](const Slot& s) { return s.pi1; });
  rep.sd_pi1 = sd_of([](const Slot& s) { return s.pi1; }, rep.mean_pi1);
  rep.mean_naive_did = mean_of([](const Slot& s) { return s.naive; });
  rep.sd_naive_did = sd_of([](const Slot& s) { return s.naive; }, rep.mean_naive_did);
  rep.mean_selection_did = mean_of([](const Slot& s) { return s.seldid; });
  rep.sd_selection_did =
      sd_of([](const Slot& s) { return s.seldid; }, rep.mean_selection_did);
  rep.mean_ci_width = mean_of([](const Slot& s) { return s.ci_width; });
  rep.clip_rate = mean_of([](const Slot& s) { return s.clip ? 1.0 : 0.0; });
  rep.clamp_rate = mean_of([](const Slot& s) { return s.clamp ? 1.0 : 0.0; });
  return rep;
}

// Config text ----------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end != begin + v.size() || v.empty())
    throw InvalidConfig(key + ": bad number '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  unsigned long long x = std::strtoull(begin, &end, 10);
  if (end != begin + v.size() || v.empty())
    throw InvalidConfig(key + ": bad integer '" + v + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

DgpConfig parse_dgp_config_text(const std::string& text) {
  DgpConfig cfg;
  bool sources_set = false;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidConfig("line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section.empty() ? key : section + "." + key;

    if (section == "study") continue;  // parsed separately
    if (section.empty()) {
      if (key == "n") cfg.n = static_cast<std::size_t>(to_u64(value, qual));
      else if (key == "p_treat") cfg.p_treat = to_double(value, qual);
      else if (key == "seed") cfg.seed = to_u64(value, qual);
      else if (key == "selection_link") cfg.selection_link = to_double(value, qual);
      else throw InvalidConfig("unknown key '" + qual + "'");
    } else if (section == "outcome") {
      if (key == "model") {
        if (value == "additive") cfg.model = OutcomeModel::Additive;
        else if (value == "exp") cfg.model = OutcomeModel::Exp;
        else if (value == "cubic") cfg.model = OutcomeModel::Cubic;
        else throw InvalidConfig("outcome.model must be additive, exp or cubic");
      } else if (key == "lambda1") cfg.lambda1 = to_double(value, qual);
      else if (key == "lambda2") cfg.lambda2 = to_double(value, qual);
      else if (key == "sigma_noise") cfg.sigma_noise = to_double(value, qual);
      else if (key == "exp_scale") cfg.exp_scale = to_double(value, qual);
      else if (key == "cubic_coeff") cfg.cubic_coeff = to_double(value, qual);
      else if (key == "trend_ot") cfg.trend_ot = to_double(value, qual);
      else if (key == "trend_oc") cfg.trend_oc = to_double(value, qual);
      else if (key == "trend_no") cfg.trend_no = to_double(value, qual);
      else throw InvalidConfig("unknown key '" + qual + "'");
    } else if (section == "effect") {
      if (key == "kind") {
        if (value == "constant") cfg.effect = EffectKind::Constant;
        else if (value == "linear") cfg.effect = EffectKind::Linear;
        else throw InvalidConfig("effect.kind must be constant or linear");
      } else if (key == "value") cfg.effect_value = to_double(value, qual);
      else if (key == "slope") cfg.effect_slope = to_double(value, qual);
      else throw InvalidConfig("unknown key '" + qual + "'");
    } else if (section == "group0" || section == "group1") {
      GroupConfig& gc = cfg.group[section == "group0" ? 0 : 1];
      if (key == "p_ao") gc.p_ao = to_double(value, qual);
      else if (key == "p_no") gc.p_no = to_double(value, qual);
      else if (key == "p_oc") gc.p_oc = to_double(value, qual);
      else if (key == "p_ot") gc.p_ot = to_double(value, qual);
      else if (key == "u_mean") gc.u_mean = to_double(value, qual);
      else if (key == "u_sigma") gc.u_sigma = to_double(value, qual);
      else if (key == "s1_missing") gc.s1_missing = to_double(value, qual);
      else throw InvalidConfig("unknown key '" + qual + "'");
    } else if (section == "sources") {
      if (key == "directions") {
        cfg.directions.clear();
        for (const auto& item : split_list(value))
          cfg.directions.push_back(direction_from_string(item));
        sources_set = true;
      } else if (key == "no_weights") {
        cfg.no_weights.clear();
        for (const auto& item : split_list(value))
          cfg.no_weights.push_back(to_double(item, qual));
      } else throw InvalidConfig("unknown key '" + qual + "'");
    } else {
      throw InvalidConfig("unknown section '" + section + "'");
    }
  }
  if (sources_set && cfg.no_weights.size() != cfg.directions.size()) {
    if (cfg.no_weights.size() == 1 && cfg.no_weights[0] == 1.0) {
      // Default weights were never overridden; spread them evenly.
      cfg.no_weights.assign(cfg.directions.size(),
                            1.0 / static_cast<double>(cfg.directions.size()));
    }
  }
  validate_config(cfg);
  return cfg;
}

DgpConfig parse_dgp_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dgp_config_text(buf.str());
}

StudySpec parse_study_spec_text(const std::string& text, const DgpConfig& cfg) {
  StudySpec spec;
  if (cfg.directions.size() == 1) {
    spec.estimator.mode = ProportionsMode::Single;
    spec.estimator.single_direction = cfg.directions[0];
  } else {
    spec.estimator.mode = ProportionsMode::Multi;
  }
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    if (section != "study") continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "reps") spec.reps = static_cast<int>(to_u64(value, "study.reps"));
    else if (key == "n_boot") spec.n_boot = static_cast<int>(to_u64(value, "study.n_boot"));
    else if (key == "alpha") spec.alpha = to_double(value, "study.alpha");
    else if (key == "oracle_n") spec.oracle_n = static_cast<std::size_t>(to_u64(value, "study.oracle_n"));
    else if (key == "seed") spec.seed = to_u64(value, "study.seed");
    else if (key == "grid") spec.estimator.grid_size = static_cast<int>(to_u64(value, "study.grid"));
    else if (key == "method") {
      if (value == "did") spec.estimator.method = Method::Did;
      else if (value == "cic") spec.estimator.method = Method::Cic;
      else throw InvalidConfig("study.method must be did or cic");
    } else throw InvalidConfig("unknown key 'study." + key + "'");
  }
  return spec;
}

}  // namespace bounded
