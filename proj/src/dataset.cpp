#include "bounded/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bounded/errors.hpp"

namespace bounded {

Direction direction_from_string(const std::string& s) {
  if (s == "positive") return Direction::Positive;
  if (s == "negative") return Direction::Negative;
  throw InvalidConfig("monotonicity direction must be positive or negative, got '" + s + "'");
}

std::string to_string(Direction d) {
  return d == Direction::Positive ? "positive" : "negative";
}

PanelDataset::PanelDataset(std::vector<UnitRecord> units, std::size_t n_sources,
                           std::vector<Direction> directions)
    : units_(std::move(units)), n_sources_(n_sources), directions_(std::move(directions)) {
  if (n_sources_ == 0) throw InvalidConfig("dataset needs at least one source");
  if (!directions_.empty() && directions_.size() != n_sources_)
    throw InvalidConfig("got " + std::to_string(directions_.size()) +
                        " directions for " + std::to_string(n_sources_) + " sources");
  for (int g = 0; g < 2; ++g) {
    tallies_.src_t1_sum[g].assign(n_sources_, 0);
    tallies_.src_t2_sum[g].assign(n_sources_, 0);
  }
  for (const auto& u : units_) {
    if (!u.sources_t1.empty() || !u.sources_t2.empty()) explicit_sources_ = true;
    int g = u.group == 0 ? 0 : 1;
    ++tallies_.n;
    ++tallies_.n_group[g];
    tallies_.s1_sum[g] += u.s1;
    tallies_.s2_sum[g] += u.s2;
    // Tolerate arity mismatches here; validate() reports them.
    for (std::size_t j = 0; j < n_sources_ && j < u.sources_t1.size(); ++j)
      tallies_.src_t1_sum[g][j] += u.sources_t1[j];
    for (std::size_t j = 0; j < n_sources_ && j < u.sources_t2.size(); ++j)
      tallies_.src_t2_sum[g][j] += u.sources_t2[j];
  }
  if (!explicit_sources_ && n_sources_ == 1) {
    for (int g = 0; g < 2; ++g) {
      tallies_.src_t1_sum[g][0] = tallies_.s1_sum[g];
      tallies_.src_t2_sum[g][0] = tallies_.s2_sum[g];
    }
  }
}

PanelDataset PanelDataset::with_directions(std::vector<Direction> directions) const {
  return PanelDataset(units_, n_sources_, std::move(directions));
}

double PanelDataset::mean_s1(int group) const {
  int g = group == 0 ? 0 : 1;
  if (tallies_.n_group[g] == 0) throw EmptySelection("group " + std::to_string(g));
  return static_cast<double>(tallies_.s1_sum[g]) / static_cast<double>(tallies_.n_group[g]);
}

double PanelDataset::mean_s2(int group) const {
  int g = group == 0 ? 0 : 1;
  if (tallies_.n_group[g] == 0) throw EmptySelection("group " + std::to_string(g));
  return static_cast<double>(tallies_.s2_sum[g]) / static_cast<double>(tallies_.n_group[g]);
}

double PanelDataset::mean_source(int period, int group, std::size_t source) const {
  int g = group == 0 ? 0 : 1;
  if (tallies_.n_group[g] == 0) throw EmptySelection("group " + std::to_string(g));
  if (source >= n_sources_) throw InvalidConfig("source index out of range");
  const auto& sums = period == 1 ? tallies_.src_t1_sum[g] : tallies_.src_t2_sum[g];
  return static_cast<double>(sums[source]) / static_cast<double>(tallies_.n_group[g]);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_indicator(const std::string& field, std::size_t row, const std::string& column) {
  std::string v = trimmed(field);
  if (v == "0") return 0;
  if (v == "1") return 1;
  throw ParseError(row, column + " must be 0 or 1, got '" + v + "'");
}

std::optional<double> parse_outcome(const std::string& field, std::size_t row,
                                    const std::string& column) {
  std::string v = trimmed(field);
  if (v.empty()) return std::nullopt;
  const char* begin = v.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end != begin + v.size()) throw ParseError(row, column + ": bad number '" + v + "'");
  return x;
}

std::string mapped_name(const SchemaMap& schema, const std::string& canonical) {
  auto it = schema.find(canonical);
  return it == schema.end() ? canonical : it->second;
}

}  // namespace

PanelDataset parse_csv(const std::string& path, const SchemaMap& schema,
                       std::vector<std::string>* ignored_columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string header;
  if (!std::getline(in, header)) throw ParseError(0, "empty file, expected header");
  auto names = split_line(header);
  for (auto& n : names) n = trimmed(n);

  auto find_column = [&](const std::string& canonical, bool required) -> int {
    std::string actual = mapped_name(schema, canonical);
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == actual) return static_cast<int>(i);
    if (required) throw MissingColumn(actual);
    return -1;
  };

  const int c_id = find_column("id", true);
  const int c_g = find_column("g", true);
  const int c_y1 = find_column("y1", true);
  const int c_y2 = find_column("y2", true);
  const int c_s1 = find_column("s1", true);
  const int c_s2 = find_column("s2", true);

  // Source pairs src<j>_t1/src<j>_t2, consecutive from j = 1. A dangling half
  // of a pair is a schema error.
  std::vector<std::array<int, 2>> src_cols;
  for (std::size_t j = 1;; ++j) {
    int a = find_column("src" + std::to_string(j) + "_t1", false);
    int b = find_column("src" + std::to_string(j) + "_t2", false);
    if (a < 0 && b < 0) break;
    if (a < 0) throw MissingColumn(mapped_name(schema, "src" + std::to_string(j) + "_t1"));
    if (b < 0) throw MissingColumn(mapped_name(schema, "src" + std::to_string(j) + "_t2"));
    src_cols.push_back({a, b});
  }
  const std::size_t n_sources = src_cols.empty() ? 1 : src_cols.size();

  if (ignored_columns != nullptr) {
    std::vector<bool> used(names.size(), false);
    for (int c : {c_id, c_g, c_y1, c_y2, c_s1, c_s2}) used[static_cast<std::size_t>(c)] = true;
    for (const auto& pair : src_cols)
      for (int c : pair) used[static_cast<std::size_t>(c)] = true;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (!used[i]) ignored_columns->push_back(names[i]);
  }

  std::vector<UnitRecord> units;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trimmed(line).empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != names.size())
      throw ParseError(row, "expected " + std::to_string(names.size()) + " fields, got " +
                                std::to_string(fields.size()));
    UnitRecord u;
    u.id = trimmed(fields[static_cast<std::size_t>(c_id)]);
    u.group = parse_indicator(fields[static_cast<std::size_t>(c_g)], row, "g");
    u.s1 = parse_indicator(fields[static_cast<std::size_t>(c_s1)], row, "s1");
    u.s2 = parse_indicator(fields[static_cast<std::size_t>(c_s2)], row, "s2");
    u.y1 = parse_outcome(fields[static_cast<std::size_t>(c_y1)], row, "y1");
    u.y2 = parse_outcome(fields[static_cast<std::size_t>(c_y2)], row, "y2");
    for (std::size_t j = 0; j < src_cols.size(); ++j) {
      u.sources_t1.push_back(parse_indicator(fields[static_cast<std::size_t>(src_cols[j][0])],
                                             row, "src" + std::to_string(j + 1) + "_t1"));
      u.sources_t2.push_back(parse_indicator(fields[static_cast<std::size_t>(src_cols[j][1])],
                                             row, "src" + std::to_string(j + 1) + "_t2"));
    }
    units.push_back(std::move(u));
  }
  return PanelDataset(std::move(units), n_sources);
}

PanelDataset load_csv(const std::string& path, const SchemaMap& schema,
                      std::vector<std::string>* ignored_columns) {
  PanelDataset ds = parse_csv(path, schema, ignored_columns);
  auto violations = validate(ds);
  if (!violations.empty())
    throw InvariantViolation(violations.front().row, violations.front().rule);
  return ds;
}

void write_csv(const PanelDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "id,g,y1,y2,s1,s2";
  const std::size_t j_out = ds.explicit_sources() ? ds.n_sources() : 0;
  for (std::size_t j = 1; j <= j_out; ++j)
    out << ",src" << j << "_t1,src" << j << "_t2";
  out << "\n";
  char buf[64];
  auto fmt = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  for (const auto& u : ds.units()) {
    out << u.id << ',' << u.group << ',';
    if (u.y1) out << fmt(*u.y1);
    out << ',';
    if (u.y2) out << fmt(*u.y2);
    out << ',' << u.s1 << ',' << u.s2;
    for (std::size_t j = 0; j < j_out; ++j) {
      out << ',' << (j < u.sources_t1.size() ? u.sources_t1[j] : 0);
      out << ',' << (j < u.sources_t2.size() ? u.sources_t2[j] : 0);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<Violation> validate(const PanelDataset& ds) {
  std::vector<Violation> out;
  const std::size_t J = ds.n_sources();
  std::size_t row = 0;
  for (const auto& u : ds.units()) {
    ++row;
    auto flag = [&](const std::string& rule) { out.push_back({row, rule, u.id}); };
    if (u.s1 == 0 && u.s2 == 1) flag("absorbing-state");
    if (u.y1.has_value() != (u.s1 == 1)) flag("outcome-presence (t=1)");
    if (u.y2.has_value() != (u.s2 == 1)) flag("outcome-presence (t=2)");
    const bool has_sources = !u.sources_t1.empty() || !u.sources_t2.empty();
    if (!has_sources) continue;
    if (u.sources_t1.size() != J || u.sources_t2.size() != J) {
      flag("source-arity");
      continue;
    }
    int prod1 = 1, prod2 = 1, sum1 = 0, sum2 = 0;
    for (std::size_t j = 0; j < J; ++j) {
      prod1 &= u.sources_t1[j];
      prod2 &= u.sources_t2[j];
      sum1 += u.sources_t1[j];
      sum2 += u.sources_t2[j];
    }
    if (u.s1 != prod1) flag("product-consistency (t=1)");
    if (u.s2 != prod2) flag("product-consistency (t=2)");
    const int jn = static_cast<int>(J);
    if (sum1 < jn - 1) flag("mutual-exclusivity (t=1)");
    if (sum2 < jn - 1) flag("mutual-exclusivity (t=2)");
  }
  return out;
}

std::vector<double> observed_diffs(const PanelDataset& ds, int group) {
  std::vector<double> out;
  std::size_t row = 0;
  for (const auto& u : ds.units()) {
    ++row;
    if (u.group != group || u.s2 != 1) continue;
    if (!u.y1 || !u.y2) throw InvariantViolation(row, "outcome-presence");
    out.push_back(*u.y2 - *u.y1);
  }
  if (out.empty()) throw EmptySelection("group " + std::to_string(group) + " with s2=1");
  return out;
}

}  // namespace bounded
