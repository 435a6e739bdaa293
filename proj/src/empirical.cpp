#include "bounded/empirical.hpp"

#include <algorithm>
#include <stdexcept>

#include "bounded/errors.hpp"

namespace bounded {

Ecdf::Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw std::invalid_argument("Ecdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.resize(sorted_.size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < sorted_.size(); ++i)
    prefix_[i + 1] = prefix_[i] + sorted_[i];
}

double Ecdf::eval(double y) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

std::size_t Ecdf::keep_count(double p) const {
  // Binary search for the smallest k with k/n >= p, comparing in double so
  // the result agrees with eval()'s arithmetic on ties.
  const double n = static_cast<double>(sorted_.size());
  std::size_t lo = 1, hi = sorted_.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (static_cast<double>(mid) / n >= p)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

double Ecdf::quantile(double q) const {
  if (q <= 0.0) return sorted_.front();
  if (q > 1.0) return sorted_.back();
  return sorted_[keep_count(q) - 1];
}

double Ecdf::mean() const { return prefix_.back() / static_cast<double>(sorted_.size()); }

double Ecdf::prefix_mean(std::size_t end) const {
  return prefix_[end] / static_cast<double>(end);
}

double trimmed_mean_lower(const Ecdf& e, double p) {
  if (p <= 0.0) throw DegenerateTrim("trim proportion must be positive");
  if (p > 1.0) p = 1.0;
  const double threshold = e.sorted_[e.keep_count(p) - 1];
  auto end = std::upper_bound(e.sorted_.begin(), e.sorted_.end(), threshold);
  return e.prefix_mean(static_cast<std::size_t>(end - e.sorted_.begin()));
}

double trimmed_mean_upper(const Ecdf& e, double p) {
  if (p <= 0.0) throw DegenerateTrim("trim proportion must be positive");
  if (p > 1.0) p = 1.0;
  const std::size_t n = e.sorted_.size();
  const double threshold = e.sorted_[n - e.keep_count(p)];
  auto begin = std::lower_bound(e.sorted_.begin(), e.sorted_.end(), threshold);
  const std::size_t start = static_cast<std::size_t>(begin - e.sorted_.begin());
  return (e.prefix_[n] - e.prefix_[start]) / static_cast<double>(n - start);
}

double quantile_counting(const Ecdf& e, double q, long* clamp_events) {
  if ((q <= 0.0 || q > 1.0) && clamp_events != nullptr) ++*clamp_events;
  return e.quantile(q);
}

}  // namespace bounded
