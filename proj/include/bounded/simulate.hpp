#pragma once

// Synthetic data with known ground truth. Strata are drawn as labels along a
// uniform selection unobservable U (block order NO, OC, OT, AO), which links
// to the outcome unobservable through a Gaussian copula; the outcome model is
// strictly increasing in the unobservable for each period. A threshold
// sampler that evaluates explicit selection step functions h(u, t) is kept as
// a cross-check and must reproduce the label sampler draw for draw.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bounded/bounds.hpp"
#include "bounded/dataset.hpp"
#include "bounded/strata.hpp"

namespace bounded {

enum class OutcomeModel { Additive, Exp, Cubic };
enum class EffectKind { Constant, Linear };

struct GroupConfig {
  // Stratum shares; must sum to 1.
  double p_ao = 1.0;
  double p_no = 0.0;
  double p_oc = 0.0;
  double p_ot = 0.0;
  // Location and scale of the unit effect alpha in the outcome unobservable.
  double u_mean = 0.0;
  double u_sigma = 1.0;
  // Fraction of units missing in the pre-period; at most p_no, since only
  // never-observed units may lack the baseline.
  double s1_missing = 0.0;
};

struct DgpConfig {
  std::size_t n = 2000;
  double p_treat = 0.5;
  std::uint64_t seed = 0;
  // Copula correlation between the selection and outcome unobservables;
  // nonzero makes selection non-ignorable.
  double selection_link = 0.0;

  OutcomeModel model = OutcomeModel::Additive;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double sigma_noise = 1.0;  // sd of the per-period shock around alpha
  double exp_scale = 1.0;    // exp model: m(u,t) = exp(lambda_t + exp_scale*u)
  double cubic_coeff = 0.0;  // cubic model: m(u,t) = u + cubic_coeff*u^3 + lambda_t
  // Post-period outcome shifts by stratum (AO pinned at zero so the
  // always-observed assumptions stay intact); these bias naive estimators.
  double trend_ot = 0.0;
  double trend_oc = 0.0;
  double trend_no = 0.0;

  EffectKind effect = EffectKind::Constant;
  double effect_value = 0.0;  // constant effect, or intercept when linear
  double effect_slope = 0.0;  // linear: tau(u) = effect_value + effect_slope*u

  std::array<GroupConfig, 2> group;
  // One direction per attrition source; J = directions.size(). Units with a
  // non-AO stratum are attributed to a single compatible source (OT needs a
  // positive source, OC a negative one, NO uses no_weights).
  std::vector<Direction> directions{Direction::Positive};
  std::vector<double> no_weights{1.0};
};

// Throws InvalidConfig on any inconsistency; the outcome model is checked for
// strict monotonicity in u on a numeric grid.
void validate_config(const DgpConfig& cfg);

// Flat key=value text with [section] headers and # comments. Sections:
// [outcome], [effect], [group0], [group1], [sources], plus top-level keys
// n, p_treat, seed, selection_link.
DgpConfig parse_dgp_config(const std::string& path);
DgpConfig parse_dgp_config_text(const std::string& text);

struct GeneratedPanel {
  PanelDataset data;
  std::vector<Stratum> strata;  // realized labels, aligned with data.units()
};

GeneratedPanel generate(const DgpConfig& cfg);

// Cross-check sampler driven by explicit step functions of U; single-source
// configurations only (requires one of p_oc/p_ot to be zero per group).
GeneratedPanel generate_threshold(const DgpConfig& cfg);

struct QttTruthRow {
  double q = 0.0;
  double value = 0.0;
};

struct SimTruth {
  double att_ao = 0.0;
  double pi0 = 1.0;
  double pi1 = 1.0;
  std::vector<QttTruthRow> qtt;  // 99-point interior grid
  std::size_t oracle_n = 0;
};

// Brute-force oracle: materializes both potential outcomes and selections for
// oracle_n fresh draws and reads the estimands off directly.
SimTruth true_values(const DgpConfig& cfg, std::size_t oracle_n = 1000000);

struct StudySpec {
  int reps = 500;
  EstimatorSpec estimator;
  double alpha = 0.95;
  int n_boot = 199;
  std::size_t oracle_n = 1000000;
  std::uint64_t seed = 0;
};

struct CoverageReport {
  SimTruth truth;
  int reps = 0;
  int reps_failed = 0;
  double bounds_cover = 0.0;  // fraction of reps with lb <= truth <= ub
  double ci_cover = 0.0;      // fraction with ci.lo <= truth <= ci.hi
  double mean_lb = 0.0, sd_lb = 0.0;
  double mean_ub = 0.0, sd_ub = 0.0;
  double mean_pi0 = 0.0, sd_pi0 = 0.0;
  double mean_pi1 = 0.0, sd_pi1 = 0.0;
  double mean_naive_did = 0.0, sd_naive_did = 0.0;
  double mean_selection_did = 0.0, sd_selection_did = 0.0;
  double mean_ci_width = 0.0;
  double clip_rate = 0.0;   // reps where a pi was clipped
  double clamp_rate = 0.0;  // reps with quantile clamp events
};

// Repeated draw -> estimate -> CI cycle against the oracle truth.
// Deterministic for a given spec seed under any thread count.
CoverageReport coverage_study(const DgpConfig& cfg, const StudySpec& spec);

// Reads the [study] section of a config (keys: reps, n_boot, alpha, oracle_n,
// seed, method, grid); the proportions mode follows the DGP's source count.
StudySpec parse_study_spec_text(const std::string& text, const DgpConfig& cfg);

}  // namespace bounded
