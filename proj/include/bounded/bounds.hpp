#pragma once

// Partial-identification bounds for treatment effects on the always-observed
// stratum. The DiD path trims the distribution of observed outcome changes by
// the AO share; the changes-in-changes path composes empirical distribution
// functions to bound counterfactual quantiles. Outcome computations use only
// rows with s2 = 1; selection tallies behind the trimming proportions use all
// rows.

#include <cstddef>
#include <vector>

#include "bounded/dataset.hpp"
#include "bounded/strata.hpp"

namespace bounded {

enum class Method { Did, Cic };
enum class Estimand { AttAo, QttAo };

struct QttRow {
  double q = 0.0;
  double lb = 0.0;
  double ub = 0.0;
};

struct BoundsResult {
  double lb = 0.0;
  double ub = 0.0;
  Method method = Method::Did;
  Estimand estimand = Estimand::AttAo;
  StrataProportions proportions;
  std::vector<QttRow> qtt_table;  // filled by the CiC path
  long clamp_events = 0;
};

// Trimming bounds on the average effect: lower bound keeps the bottom-pi1
// mass of treated changes against the top-pi0 mass of control changes, upper
// bound mirrors. Point-identified (lb == ub) when pi0 = pi1 = 1.
BoundsResult did_att_bounds(const PanelDataset& ds, const StrataProportions& p);

struct QttBounds {
  double lb = 0.0;
  double ub = 0.0;
  long clamp_events = 0;
};

// Quantile bounds at a single q in (0, 1) via the counterfactual-distribution
// composition; composed probability arguments clamp to the sample range with
// clamp accounting.
QttBounds cic_qtt_bounds(const PanelDataset& ds, const StrataProportions& p, double q);

// Average-effect bounds as midpoint-grid integrals of the quantile bounds
// over q_k = k / (grid_size + 1), k = 1..grid_size. qtt_table carries the
// full curve.
BoundsResult cic_att_bounds(const PanelDataset& ds, const StrataProportions& p,
                            int grid_size = 99);

// Point-identified benchmarks (no trimming).
double naive_did(const PanelDataset& ds);
double naive_cic(const PanelDataset& ds, int grid_size = 99);

// Difference-in-differences on the selection indicators themselves, computed
// over all rows. source is 1-based; 0 selects the overall indicator.
double selection_did(const PanelDataset& ds, std::size_t source = 0);

// Estimator recipe reused by the bootstrap: how proportions are formed and
// which bound path runs.
enum class ProportionsMode { Single, Multi, Identity };

struct EstimatorSpec {
  Method method = Method::Did;
  ProportionsMode mode = ProportionsMode::Multi;
  Direction single_direction = Direction::Positive;
  int grid_size = 99;
};

StrataProportions estimate_proportions(const PanelDataset& ds, const EstimatorSpec& spec);
BoundsResult run_pipeline(const PanelDataset& ds, const EstimatorSpec& spec);

}  // namespace bounded
