#pragma once

// Principal-stratum machinery: counterfactual selection imputation, trimming
// proportions for the always-observed stratum, and classification of
// potential-selection patterns under per-source monotonicity.
//
// Strata, from the pair (S2(0), S2(1)): (1,1) always-observed AO,
// (0,0) never-observed NO, (1,0) observed-under-control OC,
// (0,1) observed-under-treatment OT.

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bounded/dataset.hpp"

namespace bounded {

enum class Stratum { AO, NO, OC, OT };

std::string to_string(Stratum s);

struct ImputedValue {
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;
  bool clamped = false;
};

// E[S2(other arm) | own arm] = s1_own * s2_other / s1_other, clamped to
// [0, 1]. Throws DivisionByZeroBaseline when s1_other is zero.
ImputedValue impute_counterfactual_selection(double s1_own, double s1_other,
                                             double s2_other);

struct StrataProportions {
  double pi0 = 1.0;  // AO share among observed control units, clipped
  double pi1 = 1.0;  // AO share among observed treated units, clipped
  double pi0_raw = 1.0;
  double pi1_raw = 1.0;
  bool pi0_clipped = false;
  bool pi1_clipped = false;
  // Lemma-1 records, one entry per source: E[S2(0) | G=1] and E[S2(1) | G=0].
  std::vector<ImputedValue> imputed_s2_g1;
  std::vector<ImputedValue> imputed_s2_g0;
};

// Point identification: pi0 = pi1 = 1 (naive estimators).
StrataProportions proportions_identity();

// Single attrition source with known direction. Positive monotonicity pins
// pi0 at exactly 1 and identifies pi1; negative is the mirror image.
StrataProportions proportions_single(const PanelDataset& ds, Direction direction);

// Multiple sources with per-source directions taken from the dataset
// configuration. Collapses to proportions_single when J = 1.
StrataProportions proportions_multi(const PanelDataset& ds);

// Why a potential-selection pattern is impossible under the maintained
// assumptions. Several reasons can hold at once.
struct Exclusion {
  bool mutual_exclusivity = false;
  std::vector<std::size_t> monotonicity_sources;  // 0-based offenders
  bool no_intersection = false;                   // OT and OC mixed across sources
  std::string describe() const;
};

using StratumResult = std::variant<Stratum, Exclusion>;

// Classifies one unit's per-source potential-selection pairs (s^j(0), s^j(1)).
// directions must match pairs in length.
StratumResult classify_stratum(const std::vector<std::pair<int, int>>& pairs,
                               const std::vector<Direction>& directions);

}  // namespace bounded
