#pragma once

// Confidence intervals for partially identified effects. The bound endpoints
// get bootstrap standard errors (stratified by group, proportions
// re-estimated inside every replicate), and the critical value solves the
// Imbens-Manski condition so the interval covers each point of the identified
// set at the nominal rate.

#include <cstddef>
#include <cstdint>

#include "bounded/bounds.hpp"
#include "bounded/dataset.hpp"

namespace bounded {

// Standard normal distribution and quantile functions, absolute accuracy
// better than 1e-12.
double norm_cdf(double x);
double norm_quantile(double p);

struct BootstrapSigmas {
  double se_lb = 0.0;  // sample sd of the lower-bound replicate series
  double se_ub = 0.0;
  int n_boot = 0;
  int n_dropped = 0;
  std::uint64_t seed = 0;
};

// Stratified nonparametric bootstrap: each group is resampled to its own
// size, the full pipeline reruns per replicate. Replicates that fail
// estimation are dropped and counted; more than 10% dropped is an error.
// Deterministic for a given seed under any thread count.
BootstrapSigmas bootstrap_sigmas(const PanelDataset& ds, const EstimatorSpec& spec,
                                 int n_boot, std::uint64_t seed);

// Solves Phi(z + sqrt(n)(ub-lb)/max(sigma)) - Phi(-z) = alpha for z.
// sigma_lb/sigma_ub are on the asymptotic sqrt(n) scale. Degenerate sigmas
// fall back to the two-sided critical value.
double imbens_manski_z(double lb, double ub, double sigma_lb, double sigma_ub,
                       std::size_t n, double alpha);

struct CiInterval {
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.95;
  double z_alpha = 0.0;
  double se_lb = 0.0;     // bootstrap scale (already divided by sqrt(n))
  double se_ub = 0.0;
  double sigma_lb = 0.0;  // asymptotic scale, se * sqrt(n)
  double sigma_ub = 0.0;
  std::size_t n_used = 0;
};

// [lb - z*se_lb, ub + z*se_ub] with z from imbens_manski_z. n_used is the
// count of s2 = 1 rows that fed the bounds.
CiInterval confidence_interval(const BoundsResult& bounds, const BootstrapSigmas& sig,
                               std::size_t n_used, double alpha);

}  // namespace bounded
