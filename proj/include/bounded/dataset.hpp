#pragma once

// Two-period panel with endogenous selection. Each unit carries a group flag,
// selection indicators for both periods (optionally broken out by attrition
// source), and outcomes that are present exactly when the unit is observed.
// Row numbering for diagnostics: header is row 0, data rows count from 1.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bounded {

enum class Direction { Positive, Negative };

Direction direction_from_string(const std::string& s);
std::string to_string(Direction d);

struct UnitRecord {
  std::string id;
  int group = 0;  // 0 control, 1 treatment
  std::optional<double> y1;
  std::optional<double> y2;
  int s1 = 0;
  int s2 = 0;
  // Per-source selection indicators; empty when the file carries no source
  // columns (implicit single source equal to s1/s2).
  std::vector<int> sources_t1;
  std::vector<int> sources_t2;
};

struct Violation {
  std::size_t row = 0;  // 1-based data row
  std::string rule;
  std::string unit_id;
};

struct Tallies {
  std::size_t n = 0;
  std::array<std::size_t, 2> n_group{{0, 0}};
  std::array<long, 2> s1_sum{{0, 0}};
  std::array<long, 2> s2_sum{{0, 0}};
  // [group][source]; filled from explicit source columns, or mirrored from
  // s1/s2 for the implicit single source.
  std::array<std::vector<long>, 2> src_t1_sum;
  std::array<std::vector<long>, 2> src_t2_sum;
};

class PanelDataset {
 public:
  PanelDataset(std::vector<UnitRecord> units, std::size_t n_sources,
               std::vector<Direction> directions = {});

  const std::vector<UnitRecord>& units() const { return units_; }
  std::size_t n_sources() const { return n_sources_; }
  const std::vector<Direction>& directions() const { return directions_; }
  const Tallies& tallies() const { return tallies_; }

  // Copy with monotonicity directions attached (configuration, not data).
  PanelDataset with_directions(std::vector<Direction> directions) const;

  double mean_s1(int group) const;
  double mean_s2(int group) const;
  // period is 1 or 2; source is 0-based.
  double mean_source(int period, int group, std::size_t source) const;

  // True when units carry explicit per-source indicator lists.
  bool explicit_sources() const { return explicit_sources_; }

 private:
  std::vector<UnitRecord> units_;
  std::size_t n_sources_;
  std::vector<Direction> directions_;
  Tallies tallies_;
  bool explicit_sources_ = false;
};

// Column-name overrides, canonical name -> actual header name. Canonical
// names: id, g, y1, y2, s1, s2, src<j>_t1, src<j>_t2 (j counted from 1).
using SchemaMap = std::map<std::string, std::string>;

// Parses without invariant enforcement (structural errors still throw:
// IoError, MissingColumn, ParseError). Unknown columns are skipped; their
// names are appended to *ignored_columns when provided.
PanelDataset parse_csv(const std::string& path, const SchemaMap& schema = {},
                       std::vector<std::string>* ignored_columns = nullptr);

// parse_csv plus invariant enforcement: throws InvariantViolation for the
// first offending row.
PanelDataset load_csv(const std::string& path, const SchemaMap& schema = {},
                      std::vector<std::string>* ignored_columns = nullptr);

// Canonical column order, indicators bit-exact, outcomes round-trip exact.
void write_csv(const PanelDataset& ds, const std::string& path);

// Rule sweep; empty result iff every invariant holds. Never mutates.
std::vector<Violation> validate(const PanelDataset& ds);

// y2 - y1 for units in `group` with s2 = 1, in row order. Throws
// EmptySelection when no such unit exists.
std::vector<double> observed_diffs(const PanelDataset& ds, int group);

}  // namespace bounded
