#include "bounded/strata.hpp"

#include <algorithm>

#include "bounded/errors.hpp"

namespace bounded {

std::string to_string(Stratum s) {
  switch (s) {
    case Stratum::AO: return "AO";
    case Stratum::NO: return "NO";
    case Stratum::OC: return "OC";
    case Stratum::OT: return "OT";
  }
  return "?";
}

ImputedValue impute_counterfactual_selection(double s1_own, double s1_other,
                                             double s2_other) {
  if (s1_other == 0.0) throw DivisionByZeroBaseline();
  ImputedValue out;
  out.raw = s1_own * s2_other / s1_other;
  out.value = std::clamp(out.raw, 0.0, 1.0);
  out.clamped = out.value != out.raw;
  return out;
}

StrataProportions proportions_identity() { return StrataProportions{}; }

namespace {

void clip_pi(double raw, double* pi, bool* clipped) {
  *pi = std::clamp(raw, 0.0, 1.0);
  *clipped = *pi != raw;
}

void require_positive(double mean, const std::string& name) {
  if (mean <= 0.0) throw DegenerateDenominator(name);
}

}  // namespace

StrataProportions proportions_single(const PanelDataset& ds, Direction direction) {
  const double s1_t = ds.mean_s1(1), s2_t = ds.mean_s2(1);
  const double s1_c = ds.mean_s1(0), s2_c = ds.mean_s2(0);
  require_positive(s1_t, "E[S1|G=1]");
  require_positive(s1_c, "E[S1|G=0]");

  StrataProportions out;
  out.imputed_s2_g1.push_back(impute_counterfactual_selection(s1_t, s1_c, s2_c));
  out.imputed_s2_g0.push_back(impute_counterfactual_selection(s1_c, s1_t, s2_t));
  if (direction == Direction::Positive) {
    // Attrition can only rise with treatment, so every observed control unit
    // is AO; the treated side is trimmed by the imputed counterfactual share.
    require_positive(s2_t, "E[S2|G=1]");
    out.pi0 = out.pi0_raw = 1.0;
    out.pi0_clipped = false;
    out.pi1_raw = (s1_t / s2_t) * (s2_c / s1_c);
    clip_pi(out.pi1_raw, &out.pi1, &out.pi1_clipped);
  } else {
    require_positive(s2_c, "E[S2|G=0]");
    out.pi1 = out.pi1_raw = 1.0;
    out.pi1_clipped = false;
    out.pi0_raw = (s1_c / s2_c) * (s2_t / s1_t);
    clip_pi(out.pi0_raw, &out.pi0, &out.pi0_clipped);
  }
  return out;
}

StrataProportions proportions_multi(const PanelDataset& ds) {
  const std::size_t J = ds.n_sources();
  if (ds.directions().size() != J)
    throw DirectionMissing("dataset has " + std::to_string(J) + " sources, " +
                           std::to_string(ds.directions().size()) + " directions configured");
  const double s2_t = ds.mean_s2(1);
  const double s2_c = ds.mean_s2(0);
  require_positive(s2_t, "E[S2|G=1]");
  require_positive(s2_c, "E[S2|G=0]");

  StrataProportions out;
  // Each source contributes its attrition share to one side: a positive
  // source loses treated AO candidates against the imputed counterfactual and
  // control candidates against observed attrition; a negative source is the
  // mirror image. Raw imputed values feed the sums; clipping happens once at
  // the pi level.
  double deficit1 = 0.0, deficit0 = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    const std::string tag = "^" + std::to_string(j + 1);
    const double s1j_t = ds.mean_source(1, 1, j), s2j_t = ds.mean_source(2, 1, j);
    const double s1j_c = ds.mean_source(1, 0, j), s2j_c = ds.mean_source(2, 0, j);
    if (ds.directions()[j] == Direction::Positive) {
      require_positive(s1j_c, "E[s1" + tag + "|G=0]");
      auto imp = impute_counterfactual_selection(s1j_t, s1j_c, s2j_c);
      out.imputed_s2_g1.push_back(imp);
      out.imputed_s2_g0.push_back(ImputedValue{s2j_c, s2j_c, false});
      deficit1 += 1.0 - imp.raw;
      deficit0 += 1.0 - s2j_c;
    } else {
      require_positive(s1j_t, "E[s1" + tag + "|G=1]");
      auto imp = impute_counterfactual_selection(s1j_c, s1j_t, s2j_t);
      out.imputed_s2_g0.push_back(imp);
      out.imputed_s2_g1.push_back(ImputedValue{s2j_t, s2j_t, false});
      deficit1 += 1.0 - s2j_t;
      deficit0 += 1.0 - imp.raw;
    }
  }
  out.pi1_raw = (1.0 - deficit1) / s2_t;
  out.pi0_raw = (1.0 - deficit0) / s2_c;
  clip_pi(out.pi1_raw, &out.pi1, &out.pi1_clipped);
  clip_pi(out.pi0_raw, &out.pi0, &out.pi0_clipped);
  return out;
}

std::string Exclusion::describe() const {
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += ", ";
    out += part;
  };
  if (mutual_exclusivity) append("mutual-exclusivity");
  for (std::size_t j : monotonicity_sources)
    append("monotonicity (source " + std::to_string(j + 1) + ")");
  if (no_intersection) append("no-intersection");
  return out;
}

StratumResult classify_stratum(const std::vector<std::pair<int, int>>& pairs,
                               const std::vector<Direction>& directions) {
  if (pairs.empty()) throw InvalidConfig("classify_stratum: no sources");
  if (directions.size() != pairs.size())
    throw DirectionMissing("classify_stratum: " + std::to_string(pairs.size()) +
                           " pairs, " + std::to_string(directions.size()) + " directions");
  const std::size_t J = pairs.size();
  Exclusion ex;

  // At most one source may fail in each potential world.
  for (int w = 0; w < 2; ++w) {
    std::size_t sum = 0;
    for (const auto& p : pairs) sum += static_cast<std::size_t>(w == 0 ? p.first : p.second);
    if (sum + 1 < J) ex.mutual_exclusivity = true;
  }

  for (std::size_t j = 0; j < J; ++j) {
    const int s0 = pairs[j].first, s1 = pairs[j].second;
    if (directions[j] == Direction::Positive ? s1 < s0 : s1 > s0)
      ex.monotonicity_sources.push_back(j);
  }

  // A unit cannot be treatment-recovered on one source and treatment-lost on
  // another.
  bool any_ot = false, any_oc = false;
  for (const auto& p : pairs) {
    if (p.first == 0 && p.second == 1) any_ot = true;
    if (p.first == 1 && p.second == 0) any_oc = true;
  }
  if (any_ot && any_oc) ex.no_intersection = true;

  if (ex.mutual_exclusivity || !ex.monotonicity_sources.empty() || ex.no_intersection)
    return ex;

  bool any_no = false;
  for (const auto& p : pairs)
    if (p.first == 0 && p.second == 0) any_no = true;
  if (any_no) return Stratum::NO;
  if (any_ot) return Stratum::OT;
  if (any_oc) return Stratum::OC;
  return Stratum::AO;
}

}  // namespace bounded
