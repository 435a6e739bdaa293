#pragma once

// Error taxonomy shared across the library. Row numbers follow the CSV
// convention: 0 is the header line, data rows count from 1.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bounded {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// I/O and parsing ------------------------------------------------------------

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(const std::string& column)
      : Error("missing column: " + column), column_(column) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what_failed)
      : Error("row " + std::to_string(row) + ": parse error: " + what_failed),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Dataset invariants ---------------------------------------------------------

class InvariantViolation : public Error {
 public:
  InvariantViolation(std::size_t row, const std::string& rule)
      : Error("row " + std::to_string(row) + ": invariant violation: " + rule),
        row_(row),
        rule_(rule) {}
  std::size_t row() const { return row_; }
  const std::string& rule() const { return rule_; }

 private:
  std::size_t row_;
  std::string rule_;
};

// Estimation -----------------------------------------------------------------

class EmptySelection : public Error {
 public:
  explicit EmptySelection(const std::string& which)
      : Error("no observed rows: " + which) {}
};

class DegenerateTrim : public Error {
 public:
  explicit DegenerateTrim(const std::string& msg)
      : Error("degenerate trim: " + msg) {}
};

class DegenerateDenominator : public Error {
 public:
  explicit DegenerateDenominator(const std::string& which_mean)
      : Error("degenerate denominator: " + which_mean + " is zero"),
        which_(which_mean) {}
  const std::string& which() const { return which_; }

 private:
  std::string which_;
};

class DivisionByZeroBaseline : public Error {
 public:
  DivisionByZeroBaseline()
      : Error("counterfactual imputation: baseline selection mean is zero") {}
};

class DirectionMissing : public Error {
 public:
  explicit DirectionMissing(const std::string& msg)
      : Error("monotonicity direction missing: " + msg) {}
};

// Inference ------------------------------------------------------------------

class InvalidAlpha : public Error {
 public:
  explicit InvalidAlpha(double alpha)
      : Error("alpha must lie in (0.5, 1), got " + std::to_string(alpha)) {}
};

class TooManyDegenerateReplicates : public Error {
 public:
  TooManyDegenerateReplicates(int dropped, int total)
      : Error("bootstrap dropped " + std::to_string(dropped) + " of " +
              std::to_string(total) + " replicates (limit 10%)"),
        dropped_(dropped),
        total_(total) {}
  int dropped() const { return dropped_; }
  int total() const { return total_; }

 private:
  int dropped_;
  int total_;
};

// Simulation / configuration -------------------------------------------------

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& msg)
      : Error("invalid config: " + msg) {}
};

}  // namespace bounded
