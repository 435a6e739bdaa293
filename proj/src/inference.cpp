#include "bounded/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bounded/errors.hpp"
#include "bounded/parallel.hpp"
#include "bounded/seed.hpp"

namespace bounded {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

namespace {

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Wichura's AS 241 rational approximations (PPND16).
double ppnd16(double p) {
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double z;
  if (r <= 5.0) {
    r -= 1.6;
    z = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -z : z;
}

}  // namespace

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("norm_quantile: p must lie in (0,1)");
  double x = ppnd16(p);
  // One Newton step tightens the rational approximation to machine accuracy.
  double d = norm_pdf(x);
  if (d > 1e-300) x -= (norm_cdf(x) - p) / d;
  return x;
}

double imbens_manski_z(double lb, double ub, double sigma_lb, double sigma_ub,
                       std::size_t n, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidAlpha(alpha);
  if (ub < lb) throw std::invalid_argument("imbens_manski_z: ub < lb");
  if (n == 0) throw std::invalid_argument("imbens_manski_z: n must be positive");
  const double smax = std::max(sigma_lb, sigma_ub);
  if (!(smax > 0.0)) return norm_quantile(0.5 * (1.0 + alpha));
  const double w = std::sqrt(static_cast<double>(n)) * (ub - lb) / smax;

  // Phi(z + w) - Phi(-z) - alpha is strictly increasing in z; the root lies
  // between the one-sided and two-sided critical values.
  double lo = norm_quantile(alpha) - 1e-9;
  double hi = norm_quantile(0.5 * (1.0 + alpha)) + 1e-9;
  auto f = [&](double z) { return norm_cdf(z + w) - norm_cdf(-z) - alpha; };
  for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BootstrapSigmas bootstrap_sigmas(const PanelDataset& ds, const EstimatorSpec& spec,
                                 int n_boot, std::uint64_t seed) {
  if (n_boot < 2) throw InvalidConfig("bootstrap needs at least 2 replicates");
  std::vector<std::size_t> group_idx[2];
  {
    std::size_t i = 0;
    for (const auto& u : ds.units()) group_idx[u.group == 0 ? 0 : 1].push_back(i++);
  }
  if (group_idx[0].empty()) throw EmptySelection("group 0");
  if (group_idx[1].empty()) throw EmptySelection("group 1");

  const std::size_t nb = static_cast<std::size_t>(n_boot);
  std::vector<double> lbs(nb, 0.0), ubs(nb, 0.0);
  std::vector<char> ok(nb, 0);

  parallel_for_index(nb, [&](std::size_t r) {
    std::mt19937_64 rng(mix_seed(seed, r));
    std::vector<UnitRecord> resampled;
    resampled.reserve(ds.units().size());
    for (int g = 0; g < 2; ++g) {
      std::uniform_int_distribution<std::size_t> pick(0, group_idx[g].size() - 1);
      for (std::size_t i = 0; i < group_idx[g].size(); ++i)
        resampled.push_back(ds.units()[group_idx[g][pick(rng)]]);
    }
    try {
      PanelDataset boot(std::move(resampled), ds.n_sources(), ds.directions());
      BoundsResult b = run_pipeline(boot, spec);
      lbs[r] = b.lb;
      ubs[r] = b.ub;
      ok[r] = 1;
    } catch (const Error&) {
      ok[r] = 0;
    }
  });

  int kept = 0;
  for (char c : ok) kept += c;
  const int dropped = n_boot - kept;
  if (dropped * 10 > n_boot) throw TooManyDegenerateReplicates(dropped, n_boot);

  // Sequential reduction in replicate order keeps the result independent of
  // the thread schedule.
  double mean_lb = 0.0, mean_ub = 0.0;
  for (std::size_t r = 0; r < nb; ++r) {
    if (!ok[r]) continue;
    mean_lb += lbs[r];
    mean_ub += ubs[r];
  }
  mean_lb /= kept;
  mean_ub /= kept;
  double ss_lb = 0.0, ss_ub = 0.0;
  for (std::size_t r = 0; r < nb; ++r) {
    if (!ok[r]) continue;
    ss_lb += (lbs[r] - mean_lb) * (lbs[r] - mean_lb);
    ss_ub += (ubs[r] - mean_ub) * (ubs[r] - mean_ub);
  }
  BootstrapSigmas out;
  out.se_lb = std::sqrt(ss_lb / (kept - 1));
  out.se_ub = std::sqrt(ss_ub / (kept - 1));
  out.n_boot = n_boot;
  out.n_dropped = dropped;
  out.seed = seed;
  return out;
}

CiInterval confidence_interval(const BoundsResult& bounds, const BootstrapSigmas& sig,
                               std::size_t n_used, double alpha) {
  CiInterval out;
  out.alpha = alpha;
  out.se_lb = sig.se_lb;
  out.se_ub = sig.se_ub;
  out.n_used = n_used;
  const double root_n = std::sqrt(static_cast<double>(n_used));
  out.sigma_lb = sig.se_lb * root_n;
  out.sigma_ub = sig.se_ub * root_n;
  out.z_alpha = imbens_manski_z(bounds.lb, bounds.ub, out.sigma_lb, out.sigma_ub,
                                n_used, alpha);
  out.lo = bounds.lb - out.z_alpha * sig.se_lb;
  out.hi = bounds.ub + out.z_alpha * sig.se_ub;
  return out;
}

}  // namespace bounded
