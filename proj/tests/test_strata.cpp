#include <doctest.h>

#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include "bounded/errors.hpp"
#include "bounded/strata.hpp"
#include "helpers.hpp"

using namespace bounded;

namespace {

// Dataset with exact group tallies: counts are per 10 units.
PanelDataset tally_dataset(int s1_t, int s2_t, int s1_c, int s2_c) {
  std::vector<UnitRecord> units;
  for (int i = 0; i < 10; ++i) {
    const int s1 = i < s1_t ? 1 : 0;
    const int s2 = i < s2_t ? 1 : 0;
    units.push_back(testutil::unit("t" + std::to_string(i), 1, s1, s2,
                                   s1 ? std::optional<double>(i) : std::nullopt,
                                   s2 ? std::optional<double>(i + 1.0) : std::nullopt));
  }
  for (int i = 0; i < 10; ++i) {
    const int s1 = i < s1_c ? 1 : 0;
    const int s2 = i < s2_c ? 1 : 0;
    units.push_back(testutil::unit("c" + std::to_string(i), 0, s1, s2,
                                   s1 ? std::optional<double>(i) : std::nullopt,
                                   s2 ? std::optional<double>(i + 0.5) : std::nullopt));
  }
  return PanelDataset(std::move(units), 1);
}

}  // namespace

TEST_CASE("lemma 1 imputation on the table 2 numbers") {
  ImputedValue a = impute_counterfactual_selection(1.0, 0.2, 0.1);
  CHECK(a.value == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_FALSE(a.clamped);
  ImputedValue b = impute_counterfactual_selection(0.2, 1.0, 0.6);
  CHECK(b.value == doctest::Approx(0.12).epsilon(1e-13));
  CHECK_FALSE(b.clamped);
  ImputedValue c = impute_counterfactual_selection(0.5, 0.5, 0.5);
  CHECK(c.value == 0.5);
  CHECK_THROWS_AS(impute_counterfactual_selection(0.5, 0.0, 0.5),
                  DivisionByZeroBaseline);

  ImputedValue big = impute_counterfactual_selection(1.0, 0.5, 0.6);
  CHECK(big.value == 1.0);
  CHECK(big.raw == doctest::Approx(1.2).epsilon(1e-13));
  CHECK(big.clamped);
}

TEST_CASE("prop 3 on table 2: pi1 = 5/6, pi0 pinned at 1") {
  PanelDataset ds = testutil::table2_dataset();
  StrataProportions p = proportions_single(ds, Direction::Positive);
  CHECK(p.pi0 == 1.0);  // exact, not approximate
  CHECK_FALSE(p.pi0_clipped);
  CHECK(p.pi1_raw == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
  CHECK(p.pi1 == p.pi1_raw);
  CHECK_FALSE(p.pi1_clipped);
  REQUIRE(p.imputed_s2_g1.size() == 1);
  CHECK(p.imputed_s2_g1[0].value == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p.imputed_s2_g0[0].value == doctest::Approx(0.12).epsilon(1e-13));
}

TEST_CASE("prop 3 negative direction mirrors") {
  PanelDataset ds = tally_dataset(8, 4, 10, 6);
  StrataProportions p = proportions_single(ds, Direction::Negative);
  CHECK(p.pi1 == 1.0);
  // (E[S1|0]/E[S2|0]) * (E[S2|1]/E[S1|1]) = (1/0.6)*(0.4/0.8)
  CHECK(p.pi0_raw == doctest::Approx((1.0 / 0.6) * (0.4 / 0.8)).epsilon(1e-13));
}

TEST_CASE("no selection means pi0 = pi1 = 1") {
  PanelDataset ds = tally_dataset(10, 10, 10, 10);
  StrataProportions p = proportions_single(ds, Direction::Positive);
  CHECK(p.pi0 == 1.0);
  CHECK(p.pi1 == 1.0);
  CHECK_FALSE(p.pi1_clipped);
}

TEST_CASE("raw ratio above one is clipped with a flag") {
  // E[S1|1]=0.9, E[S2|1]=0.5, E[S1|0]=1, E[S2|0]=0.6 -> raw (0.9/0.5)(0.6/1)=1.08
  PanelDataset ds = tally_dataset(9, 5, 10, 6);
  StrataProportions p = proportions_single(ds, Direction::Positive);
  CHECK(p.pi1_raw == doctest::Approx(1.08).epsilon(1e-13));
  CHECK(p.pi1 == 1.0);
  CHECK(p.pi1_clipped);
}

TEST_CASE("degenerate denominators are named") {
  CHECK_THROWS_AS(proportions_single(tally_dataset(0, 0, 10, 5), Direction::Positive),
                  DegenerateDenominator);
  try {
    proportions_single(tally_dataset(10, 0, 10, 5), Direction::Positive);
    FAIL("expected DegenerateDenominator");
  } catch (const DegenerateDenominator& e) {
    CHECK(e.which() == "E[S2|G=1]");
  }
}

TEST_CASE("remark 5: selection effects share sign; equal baselines equalize them") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double s1_t = u(rng), s1_c = u(rng);
    const double s2_t = s1_t * u(rng), s2_c = s1_c * u(rng);
    const double eff_t =
        s2_t - impute_counterfactual_selection(s1_t, s1_c, s2_c).raw;
    const double eff_c =
        impute_counterfactual_selection(s1_c, s1_t, s2_t).raw - s2_c;
    if (std::fabs(eff_t) > 1e-12 || std::fabs(eff_c) > 1e-12)
      CHECK(std::signbit(eff_t) == std::signbit(eff_c));

    const double eff_t_eq =
        s2_t - impute_counterfactual_selection(s1_t, s1_t, s2_c).raw;
    const double eff_c_eq =
        impute_counterfactual_selection(s1_t, s1_t, s2_t).raw - s2_c;
    CHECK(eff_t_eq == doctest::Approx(eff_c_eq).epsilon(1e-12));
  }
}

TEST_CASE("prop 4 with one positive source reproduces prop 3") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 100; ++rep) {
    PanelDataset ds = testutil::random_dataset(rng);
    StrataProportions single = proportions_single(ds, Direction::Positive);
    StrataProportions multi =
        proportions_multi(ds.with_directions({Direction::Positive}));
    CHECK(std::fabs(multi.pi1_raw - single.pi1_raw) < 1e-12);
    CHECK(std::fabs(multi.pi0_raw - single.pi0_raw) < 1e-12);
    CHECK(std::fabs(multi.pi1 - single.pi1) < 1e-12);
    CHECK(std::fabs(multi.pi0 - single.pi0) < 1e-12);
  }
}

TEST_CASE("prop 4 against a direct evaluation of the display") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 50; ++rep) {
    PanelDataset ds = testutil::random_multi_dataset(
        rng, 2, {Direction::Positive, Direction::Negative});
    StrataProportions p = proportions_multi(ds);

    // Direct evaluation from raw unit loops, no shared code with the library
    // beyond the record type.
    double n[2] = {0, 0};
    double s1j[2][2] = {{0, 0}, {0, 0}}, s2j[2][2] = {{0, 0}, {0, 0}};
    double s2[2] = {0, 0};
    for (const auto& u : ds.units()) {
      const int g = u.group;
      n[g] += 1;
      s2[g] += u.s2;
      for (int j = 0; j < 2; ++j) {
        s1j[g][j] += u.sources_t1[static_cast<std::size_t>(j)];
        s2j[g][j] += u.sources_t2[static_cast<std::size_t>(j)];
      }
    }
    for (int g = 0; g < 2; ++g) {
      s2[g] /= n[g];
      for (int j = 0; j < 2; ++j) {
        s1j[g][j] /= n[g];
        s2j[g][j] /= n[g];
      }
    }
    // source 0 positive, source 1 negative
    const double imp1 = s1j[1][0] * s2j[0][0] / s1j[0][0];  // E[s2^1(0)|G=1]
    const double imp0 = s1j[0][1] * s2j[1][1] / s1j[1][1];  // E[s2^2(1)|G=0]
    const double pi1 = (1.0 - (1.0 - imp1) - (1.0 - s2j[1][1])) / s2[1];
    const double pi0 = (1.0 - (1.0 - s2j[0][0]) - (1.0 - imp0)) / s2[0];
    CHECK(p.pi1_raw == doctest::Approx(pi1).epsilon(1e-12));
    CHECK(p.pi0_raw == doctest::Approx(pi0).epsilon(1e-12));
  }
}

TEST_CASE("prop 4 with every indicator 1 gives pi = 1") {
  std::vector<UnitRecord> units;
  for (int g = 0; g < 2; ++g)
    for (int i = 0; i < 5; ++i) {
      UnitRecord u = testutil::unit("a" + std::to_string(g * 5 + i), g, 1, 1,
                                    1.0 * i, 2.0 * i);
      u.sources_t1 = {1, 1};
      u.sources_t2 = {1, 1};
      units.push_back(std::move(u));
    }
  PanelDataset ds(std::move(units), 2,
                  {Direction::Positive, Direction::Negative});
  StrataProportions p = proportions_multi(ds);
  CHECK(p.pi0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.pi1 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("proportions_multi requires configured directions") {
  std::mt19937_64 rng(34);
  PanelDataset ds = testutil::random_multi_dataset(
      rng, 2, {Direction::Positive, Direction::Negative});
  PanelDataset bare = ds.with_directions({});
  CHECK_THROWS_AS(proportions_multi(bare), DirectionMissing);
}

TEST_CASE("classify_stratum: survivors and exclusions over both world patterns") {
  const std::vector<Direction> dirs{Direction::Positive, Direction::Negative};

  auto stratum = [&](std::pair<int, int> a, std::pair<int, int> b) {
    StratumResult r = classify_stratum({a, b}, dirs);
    REQUIRE(std::holds_alternative<Stratum>(r));
    return std::get<Stratum>(r);
  };
  auto excluded = [&](std::pair<int, int> a, std::pair<int, int> b) {
    StratumResult r = classify_stratum({a, b}, dirs);
    REQUIRE(std::holds_alternative<Exclusion>(r));
    return std::get<Exclusion>(r);
  };

  CHECK(stratum({1, 1}, {1, 1}) == Stratum::AO);
  CHECK(stratum({0, 0}, {1, 1}) == Stratum::NO);
  CHECK(stratum({1, 1}, {0, 0}) == Stratum::NO);
  CHECK(stratum({1, 1}, {1, 0}) == Stratum::OC);
  CHECK(stratum({0, 1}, {1, 1}) == Stratum::OT);

  Exclusion overlap = excluded({0, 1}, {1, 0});
  CHECK(overlap.no_intersection);
  CHECK_FALSE(overlap.mutual_exclusivity);
  CHECK(overlap.monotonicity_sources.empty());
  CHECK(overlap.describe() == "no-intersection");

  Exclusion mono = excluded({1, 0}, {1, 1});
  CHECK(mono.monotonicity_sources == std::vector<std::size_t>{0});
  CHECK(mono.describe() == "monotonicity (source 1)");

  Exclusion me = excluded({0, 0}, {0, 0});
  CHECK(me.mutual_exclusivity);
  CHECK(me.describe() == "mutual-exclusivity");
}

TEST_CASE("classify_stratum single source") {
  const std::vector<Direction> pos{Direction::Positive};
  CHECK(std::get<Stratum>(classify_stratum({{1, 1}}, pos)) == Stratum::AO);
  CHECK(std::get<Stratum>(classify_stratum({{0, 0}}, pos)) == Stratum::NO);
  CHECK(std::get<Stratum>(classify_stratum({{0, 1}}, pos)) == Stratum::OT);
  Exclusion e = std::get<Exclusion>(classify_stratum({{1, 0}}, pos));
  CHECK(e.monotonicity_sources == std::vector<std::size_t>{0});

  const std::vector<Direction> neg{Direction::Negative};
  CHECK(std::get<Stratum>(classify_stratum({{1, 0}}, neg)) == Stratum::OC);
  CHECK(std::get<Exclusion>(classify_stratum({{0, 1}}, neg))
            .monotonicity_sources.size() == 1);
}

TEST_CASE("classify_stratum argument checks") {
  CHECK_THROWS_AS(classify_stratum({}, {}), InvalidConfig);
  CHECK_THROWS_AS(classify_stratum({{1, 1}}, {}), DirectionMissing);
}

TEST_CASE("stratum labels print") {
  CHECK(to_string(Stratum::AO) == "AO");
  CHECK(to_string(Stratum::NO) == "NO");
  CHECK(to_string(Stratum::OC) == "OC");
  CHECK(to_string(Stratum::OT) == "OT");
}
