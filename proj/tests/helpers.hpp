#pragma once

// Shared test fixtures: hand-built datasets and random generators that honor
// every dataset invariant, so property tests can draw inputs freely.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bounded/dataset.hpp"

namespace testutil {

inline bounded::UnitRecord unit(std::string id, int group, int s1, int s2,
                                std::optional<double> y1, std::optional<double> y2) {
  bounded::UnitRecord u;
  u.id = std::move(id);
  u.group = group;
  u.s1 = s1;
  u.s2 = s2;
  u.y1 = y1;
  u.y2 = y2;
  return u;
}

// Group of fully observed units whose y2 - y1 differences equal `diffs`.
inline void add_observed(std::vector<bounded::UnitRecord>& units, int group,
                         const std::vector<double>& diffs) {
  for (double d : diffs)
    units.push_back(unit("g" + std::to_string(group) + "d" +
                             std::to_string(units.size()),
                         group, 1, 1, 0.0, d));
}

// Dataset whose observed_diffs are exactly the given per-group lists.
inline bounded::PanelDataset diff_dataset(const std::vector<double>& treated,
                                          const std::vector<double>& control) {
  std::vector<bounded::UnitRecord> units;
  add_observed(units, 1, treated);
  add_observed(units, 0, control);
  return bounded::PanelDataset(std::move(units), 1);
}

// Tallies matching Table 2: treated all present at t=1 with 60% retained at
// t=2; control 20% present at t=1 with half of those retained.
inline bounded::PanelDataset table2_dataset() {
  std::vector<bounded::UnitRecord> units;
  for (int i = 0; i < 10; ++i) {
    const bool kept = i < 6;
    units.push_back(unit("t" + std::to_string(i), 1, 1, kept ? 1 : 0, 1.0 + i,
                         kept ? std::optional<double>(2.0 + i) : std::nullopt));
  }
  for (int i = 0; i < 10; ++i) {
    const int s1 = i < 2 ? 1 : 0;
    const int s2 = i < 1 ? 1 : 0;
    units.push_back(unit("c" + std::to_string(i), 0, s1, s2,
                         s1 ? std::optional<double>(0.5 + i) : std::nullopt,
                         s2 ? std::optional<double>(1.5 + i) : std::nullopt));
  }
  return bounded::PanelDataset(std::move(units), 1);
}

// Random single-source dataset: valid by construction, both groups carry
// baseline mass and at least three fully observed units.
inline bounded::PanelDataset random_dataset(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(15, 60);
  std::normal_distribution<double> out(0.0, 1.0);
  std::bernoulli_distribution keep1(0.9), keep2(0.8);
  std::vector<bounded::UnitRecord> units;
  for (int g = 0; g < 2; ++g) {
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      const bool forced = i < 3;  // estimability: nonempty s2=1 cells
      int s1 = (forced || keep1(rng)) ? 1 : 0;
      int s2 = (s1 == 1 && (forced || keep2(rng))) ? 1 : 0;
      units.push_back(unit("r" + std::to_string(g) + "_" + std::to_string(i), g,
                           s1, s2,
                           s1 ? std::optional<double>(out(rng) + 0.3 * g)
                              : std::nullopt,
                           s2 ? std::optional<double>(out(rng) + 0.5 * g)
                              : std::nullopt));
    }
  }
  return bounded::PanelDataset(std::move(units), 1);
}

// Random J-source dataset with explicit indicator columns. Each unit either
// survives fully, loses one source at t=2, or loses one source in both
// periods, so mutual exclusivity and the absorbing state hold by
// construction.
inline bounded::PanelDataset random_multi_dataset(std::mt19937_64& rng, std::size_t J,
                                                  std::vector<bounded::Direction> dirs) {
  std::uniform_int_distribution<int> size(30, 80);
  std::uniform_int_distribution<std::size_t> which(0, J - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> out(0.0, 1.0);
  std::vector<bounded::UnitRecord> units;
  for (int g = 0; g < 2; ++g) {
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      bounded::UnitRecord u;
      u.id = "m" + std::to_string(g) + "_" + std::to_string(i);
      u.group = g;
      u.sources_t1.assign(J, 1);
      u.sources_t2.assign(J, 1);
      const double roll = i < 3 ? 0.0 : u01(rng);  // first units fully observed
      if (roll < 0.75) {
        u.s1 = u.s2 = 1;
      } else if (roll < 0.9) {
        u.sources_t2[which(rng)] = 0;  // drops out between periods
        u.s1 = 1;
        u.s2 = 0;
      } else {
        const std::size_t j = which(rng);  // never observed
        u.sources_t1[j] = 0;
        u.sources_t2[j] = 0;
        u.s1 = u.s2 = 0;
      }
      if (u.s1) u.y1 = out(rng) + 0.2 * g;
      if (u.s2) u.y2 = out(rng) + 0.4 * g;
      units.push_back(std::move(u));
    }
  }
  return bounded::PanelDataset(std::move(units), J, std::move(dirs));
}

}  // namespace testutil
