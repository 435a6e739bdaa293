#pragma once

// Order-statistic primitives. Conventions, fixed once here and relied on
// everywhere above:
//   - ecdf eval is right-continuous: F(y) = #(values <= y) / n.
//   - quantile(q) for q in (0,1] is the generalized inverse
//     min{ y in sample : F(y) >= q }; q <= 0 clamps to the sample minimum and
//     q > 1 to the maximum. No interpolation between order statistics.
//   - trimmed_mean_lower(p) averages every value <= the p-quantile (ties at
//     the threshold stay in). trimmed_mean_upper(p) is the mirror image: it
//     keeps the top-p mass, averaging every value >= sorted[n-k] where k is
//     the smallest count with k/n >= p, so that
//     trimmed_mean_upper(v, p) == -trimmed_mean_lower(-v, p) exactly.

#include <cstddef>
#include <vector>

namespace bounded {

class Ecdf {
 public:
  // Sorts a copy of the values. Throws std::invalid_argument when empty.
  explicit Ecdf(std::vector<double> values);

  double eval(double y) const;
  double quantile(double q) const;
  double mean() const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  friend double trimmed_mean_lower(const Ecdf&, double);
  friend double trimmed_mean_upper(const Ecdf&, double);

  // Smallest count k in [1, n] with k/n >= p, for p in (0, 1].
  std::size_t keep_count(double p) const;
  double prefix_mean(std::size_t end) const;

  std::vector<double> sorted_;
  std::vector<double> prefix_;  // prefix_[i] = sum of sorted_[0..i)
};

// Mean of the bottom-p mass, inclusive at the threshold. Throws DegenerateTrim
// for p <= 0; p above 1 is treated as 1.
double trimmed_mean_lower(const Ecdf& e, double p);

// Mean of the top-p mass, inclusive at the threshold.
double trimmed_mean_upper(const Ecdf& e, double p);

// quantile with clamp accounting: increments *clamp_events when q falls
// outside (0, 1]. Used by the quantile-bound compositions.
double quantile_counting(const Ecdf& e, double q, long* clamp_events);

}  // namespace bounded
