#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bounded/bounds.hpp"
#include "bounded/errors.hpp"
#include "bounded/inference.hpp"
#include "bounded/simulate.hpp"

using namespace bounded;

namespace {

DgpConfig attrition_config() {
  DgpConfig cfg;
  cfg.n = 1200;
  cfg.seed = 7;
  cfg.selection_link = 0.5;
  cfg.lambda2 = 0.3;
  cfg.sigma_noise = 0.8;
  cfg.trend_ot = 0.4;
  cfg.effect_value = 0.3;
  for (auto& g : cfg.group) {
    g.p_ao = 0.8;
    g.p_ot = 0.2;
  }
  return cfg;
}

bool same_unit(const UnitRecord& a, const UnitRecord& b) {
  return a.id == b.id && a.group == b.group && a.s1 == b.s1 && a.s2 == b.s2 &&
         a.y1 == b.y1 && a.y2 == b.y2 && a.sources_t1 == b.sources_t1 &&
         a.sources_t2 == b.sources_t2;
}

}  // namespace

TEST_CASE("generated panels satisfy every dataset invariant") {
  std::vector<DgpConfig> configs;
  configs.push_back(attrition_config());

  DgpConfig multi = attrition_config();
  multi.directions = {Direction::Positive, Direction::Negative};
  multi.no_weights = {0.4, 0.6};
  for (auto& g : multi.group) {
    g.p_ao = 0.7;
    g.p_no = 0.1;
    g.p_oc = 0.1;
    g.p_ot = 0.1;
    g.s1_missing = 0.05;
  }
  configs.push_back(multi);

  DgpConfig expm = attrition_config();
  expm.model = OutcomeModel::Exp;
  expm.exp_scale = 0.4;
  configs.push_back(expm);

  DgpConfig cub = attrition_config();
  cub.model = OutcomeModel::Cubic;
  cub.cubic_coeff = 0.2;
  cub.effect = EffectKind::Linear;
  cub.effect_slope = 0.3;
  configs.push_back(cub);

  for (const auto& cfg : configs) {
    GeneratedPanel p = generate(cfg);
    CHECK(p.data.units().size() == cfg.n);
    CHECK(p.strata.size() == cfg.n);
    CHECK(validate(p.data).empty());
    // observed units carry their stratum's selection pattern
    for (std::size_t i = 0; i < cfg.n; ++i) {
      const auto& u = p.data.units()[i];
      if (p.strata[i] == Stratum::AO) CHECK(u.s2 == 1);
      if (p.strata[i] == Stratum::NO) CHECK(u.s2 == 0);
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  DgpConfig cfg = attrition_config();
  GeneratedPanel a = generate(cfg);
  GeneratedPanel b = generate(cfg);
  REQUIRE(a.data.units().size() == b.data.units().size());
  for (std::size_t i = 0; i < a.data.units().size(); ++i)
    CHECK(same_unit(a.data.units()[i], b.data.units()[i]));

  cfg.seed = 8;
  GeneratedPanel c = generate(cfg);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.data.units().size(); ++i)
    if (!same_unit(a.data.units()[i], c.data.units()[i])) any_difference = true;
  CHECK(any_difference);
}

TEST_CASE("threshold sampler reproduces the label sampler draw for draw") {
  DgpConfig pos = attrition_config();  // single positive source, p_ot > 0
  GeneratedPanel a = generate(pos);
  GeneratedPanel b = generate_threshold(pos);
  REQUIRE(a.data.units().size() == b.data.units().size());
  for (std::size_t i = 0; i < a.data.units().size(); ++i) {
    CHECK(same_unit(a.data.units()[i], b.data.units()[i]));
    CHECK(a.strata[i] == b.strata[i]);
  }

  DgpConfig neg = attrition_config();
  neg.directions = {Direction::Negative};
  for (auto& g : neg.group) {
    g.p_ot = 0.0;
    g.p_oc = 0.15;
    g.p_ao = 0.8;
    g.p_no = 0.05;
  }
  GeneratedPanel c = generate(neg);
  GeneratedPanel d = generate_threshold(neg);
  for (std::size_t i = 0; i < c.data.units().size(); ++i) {
    CHECK(same_unit(c.data.units()[i], d.data.units()[i]));
    CHECK(c.strata[i] == d.strata[i]);
  }

  DgpConfig multi = attrition_config();
  multi.directions = {Direction::Positive, Direction::Positive};
  multi.no_weights = {0.5, 0.5};
  CHECK_THROWS_AS(generate_threshold(multi), InvalidConfig);

  DgpConfig mixed = attrition_config();
  for (auto& g : mixed.group) {
    g.p_ao = 0.7;
    g.p_ot = 0.2;
    g.p_oc = 0.1;
  }
  CHECK_THROWS_AS(generate_threshold(mixed), InvalidConfig);
}

TEST_CASE("configuration validation rejects inconsistent settings") {
  auto expect_invalid = [](DgpConfig cfg) {
    CHECK_THROWS_AS(validate_config(cfg), InvalidConfig);
  };

  DgpConfig shares = attrition_config();
  shares.group[0].p_ao = 0.5;  // shares now sum to 0.7
  expect_invalid(shares);

  DgpConfig missing = attrition_config();
  missing.group[1].s1_missing = 0.2;  // exceeds p_no = 0
  expect_invalid(missing);

  DgpConfig bent = attrition_config();
  bent.model = OutcomeModel::Cubic;
  bent.cubic_coeff = -0.5;  // u - 0.5u^3 is not increasing
  expect_invalid(bent);

  DgpConfig flat = attrition_config();
  flat.model = OutcomeModel::Exp;
  flat.exp_scale = 0.0;  // constant in u
  expect_invalid(flat);

  DgpConfig weights = attrition_config();
  weights.directions = {Direction::Positive, Direction::Negative};
  weights.no_weights = {1.0};  // one weight for two sources
  for (auto& g : weights.group) {
    g.p_ot = 0.1;
    g.p_oc = 0.1;
    g.p_ao = 0.8;
  }
  expect_invalid(weights);

  DgpConfig orphan_ot = attrition_config();
  orphan_ot.directions = {Direction::Negative};  // OT mass, no positive source
  expect_invalid(orphan_ot);

  DgpConfig link = attrition_config();
  link.selection_link = 1.5;
  expect_invalid(link);

  DgpConfig empty = attrition_config();
  empty.n = 0;
  expect_invalid(empty);

  DgpConfig ptreat = attrition_config();
  ptreat.p_treat = 1.0;
  expect_invalid(ptreat);

  CHECK_NOTHROW(validate_config(attrition_config()));
}

TEST_CASE("config text parsing") {
  const std::string text =
      "# simulation settings\n"
      "n = 5000\n"
      "p_treat = 0.4\n"
      "seed = 99\n"
      "selection_link = 0.25   # copula correlation\n"
      "\n"
      "[outcome]\n"
      "model = cubic\n"
      "lambda1 = 0.1\n"
      "lambda2 = 0.6\n"
      "sigma_noise = 0.7\n"
      "cubic_coeff = 0.05\n"
      "trend_ot = 0.4\n"
      "trend_oc = -0.2\n"
      "\n"
      "[effect]\n"
      "kind = linear\n"
      "value = 0.3\n"
      "slope = 0.15\n"
      "\n"
      "[group0]\n"
      "p_ao = 0.75\n"
      "p_no = 0.05\n"
      "p_oc = 0.1\n"
      "p_ot = 0.1\n"
      "u_mean = 0.2\n"
      "s1_missing = 0.02\n"
      "\n"
      "[group1]\n"
      "p_ao = 0.75\n"
      "p_no = 0.05\n"
      "p_oc = 0.1\n"
      "p_ot = 0.1\n"
      "u_sigma = 1.2\n"
      "s1_missing = 0.02\n"
      "\n"
      "[sources]\n"
      "directions = positive, negative\n"
      "\n"
      "[study]\n"
      "reps = 123\n"
      "n_boot = 77\n"
      "alpha = 0.9\n"
      "oracle_n = 200000\n"
      "seed = 5\n"
      "method = cic\n"
      "grid = 49\n";

  DgpConfig cfg = parse_dgp_config_text(text);
  CHECK(cfg.n == 5000);
  CHECK(cfg.p_treat == 0.4);
  CHECK(cfg.seed == 99);
  CHECK(cfg.selection_link == 0.25);
  CHECK(cfg.model == OutcomeModel::Cubic);
  CHECK(cfg.cubic_coeff == 0.05);
  CHECK(cfg.trend_oc == -0.2);
  CHECK(cfg.effect == EffectKind::Linear);
  CHECK(cfg.effect_slope == 0.15);
  CHECK(cfg.group[0].u_mean == 0.2);
  CHECK(cfg.group[1].u_sigma == 1.2);
  CHECK(cfg.group[1].p_oc == 0.1);
  REQUIRE(cfg.directions.size() == 2);
  CHECK(cfg.directions[1] == Direction::Negative);
  // default weights spread evenly across the declared sources
  REQUIRE(cfg.no_weights.size() == 2);
  CHECK(cfg.no_weights[0] == 0.5);

  StudySpec spec = parse_study_spec_text(text, cfg);
  CHECK(spec.reps == 123);
  CHECK(spec.n_boot == 77);
  CHECK(spec.alpha == 0.9);
  CHECK(spec.oracle_n == 200000);
  CHECK(spec.seed == 5);
  CHECK(spec.estimator.method == Method::Cic);
  CHECK(spec.estimator.grid_size == 49);
  CHECK(spec.estimator.mode == ProportionsMode::Multi);

  DgpConfig single = attrition_config();
  single.directions = {Direction::Negative};
  for (auto& g : single.group) {
    g.p_ot = 0.0;
    g.p_oc = 0.2;
  }
  StudySpec sspec = parse_study_spec_text("[study]\nreps = 10\n", single);
  CHECK(sspec.estimator.mode == ProportionsMode::Single);
  CHECK(sspec.estimator.single_direction == Direction::Negative);

  CHECK_THROWS_AS(parse_dgp_config_text("bogus = 1\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_dgp_config_text("[orbit]\nx = 1\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_dgp_config_text("[outcome]\nmodel = quartic\n"),
                  InvalidConfig);
  CHECK_THROWS_AS(parse_dgp_config_text("n : 5\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_study_spec_text("[study]\nbw = 2\n", single),
                  InvalidConfig);
}

TEST_CASE("oracle truths for constant and zero effects") {
  DgpConfig cfg = attrition_config();
  SimTruth t = true_values(cfg, 150000);
  CHECK(t.att_ao == doctest::Approx(0.3).epsilon(1e-12));
  REQUIRE(t.qtt.size() == 99);
  for (const auto& row : t.qtt)
    CHECK(row.value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(t.pi0 == 1.0);  // no OC mass, so the observed control are all AO
  CHECK(std::fabs(t.pi1 - 0.8) < 0.01);
  CHECK(t.oracle_n == 150000);

  DgpConfig null = attrition_config();
  null.effect_value = 0.0;
  SimTruth tn = true_values(null, 150000);
  CHECK(tn.att_ao == 0.0);
  for (const auto& row : tn.qtt) CHECK(row.value == 0.0);

  CHECK_THROWS_AS(true_values(cfg, 50000), InvalidConfig);
}

TEST_CASE("oracle matches the closed form for a linear effect") {
  DgpConfig cfg;
  cfg.n = 100;
  cfg.selection_link = 0.6;
  cfg.sigma_noise = 0.5;
  cfg.effect = EffectKind::Linear;
  cfg.effect_value = 0.2;
  cfg.effect_slope = 0.25;
  for (auto& g : cfg.group) {
    g.p_ao = 0.75;
    g.p_no = 0.1;
    g.p_ot = 0.15;
    g.u_mean = 0.3;
  }

  // Treated AO units are those with U above 1 - p_ao, so the mean of the
  // outcome unobservable is the truncated-normal mean through the copula.
  const double z_star = norm_quantile(1.0 - 0.75);
  const double phi = std::exp(-0.5 * z_star * z_star) / std::sqrt(2.0 * M_PI);
  const double mills = phi / 0.75;
  const double closed =
      0.2 + 0.25 * (0.3 + 1.0 * cfg.selection_link * mills);

  SimTruth t = true_values(cfg, 4000000);
  CHECK(std::fabs(t.att_ao - closed) < 1e-3);
}

TEST_CASE("estimates converge on an always-observed panel") {
  DgpConfig cfg;
  cfg.n = 40000;
  cfg.seed = 31;
  cfg.lambda2 = 0.6;
  cfg.effect_value = 0.5;
  cfg.group[0].u_mean = 0.2;
  cfg.group[1].u_mean = 0.5;

  EstimatorSpec spec;
  spec.method = Method::Did;
  spec.mode = ProportionsMode::Single;
  spec.single_direction = Direction::Positive;

  BoundsResult b = run_pipeline(generate(cfg).data, spec);
  CHECK(b.proportions.pi0 == 1.0);
  CHECK(b.proportions.pi1 == 1.0);
  CHECK(b.ub - b.lb < 1e-12);
  CHECK(std::fabs(b.lb - 0.5) < 0.05);
}

TEST_CASE("coverage study on an attrition design") {
  DgpConfig cfg = attrition_config();
  cfg.n = 400;

  StudySpec spec;
  spec.reps = 40;
  spec.n_boot = 29;
  spec.oracle_n = 150000;
  spec.seed = 2;
  spec.estimator.method = Method::Did;
  spec.estimator.mode = ProportionsMode::Single;
  spec.estimator.single_direction = Direction::Positive;

  CoverageReport rep = coverage_study(cfg, spec);
  CHECK(rep.reps == 40);
  CHECK(rep.reps_failed == 0);
  CHECK(rep.bounds_cover >= 0.85);
  CHECK(rep.ci_cover >= rep.bounds_cover);
  CHECK(std::fabs(rep.mean_pi1 - 0.8) < 0.1);
  CHECK(rep.mean_lb <= rep.mean_ub);
  CHECK(rep.mean_ci_width > 0.0);
  CHECK(rep.sd_naive_did > 0.0);
  CHECK(rep.clip_rate >= 0.0);
  CHECK(rep.clip_rate <= 1.0);

  CoverageReport again = coverage_study(cfg, spec);
  CHECK(rep.bounds_cover == again.bounds_cover);
  CHECK(rep.ci_cover == again.ci_cover);
  CHECK(rep.mean_lb == again.mean_lb);
  CHECK(rep.sd_ub == again.sd_ub);
  CHECK(rep.mean_selection_did == again.mean_selection_did);

  StudySpec bad = spec;
  bad.reps = 0;
  CHECK_THROWS_AS(coverage_study(cfg, bad), InvalidConfig);
}
