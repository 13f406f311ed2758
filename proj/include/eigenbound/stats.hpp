#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace eigenbound {

// Point estimate of a mean with a Monte Carlo standard error. For correlated
// draws (MCMC) the error comes from batch means and `ess` is the implied
// effective sample size; for independent draws ess == n_samples.
struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  double ess = 0.0;
};

inline MomentEstimate mean_iid(const std::vector<double>& x) {
  std::int64_t n = static_cast<std::int64_t>(x.size());
  if (n < 2) throw std::invalid_argument("mean_iid: need at least 2 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  double var = ss / static_cast<double>(n - 1);
  MomentEstimate e;
  e.value = mean;
  e.std_error = std::sqrt(var / static_cast<double>(n));
  e.n_samples = n;
  e.ess = static_cast<double>(n);
  return e;
}

// Batch-means estimator: split the (possibly autocorrelated) series into
// `n_batches` contiguous batches, use the spread of batch means for the
// standard error, and report sample_variance / se^2 as the effective size.
inline MomentEstimate batch_means(const std::vector<double>& x,
                                  int n_batches = 50) {
  std::int64_t n = static_cast<std::int64_t>(x.size());
  if (n_batches < 2 || n < 2 * n_batches)
    throw std::invalid_argument("batch_means: series too short for batches");
  std::int64_t len = n / n_batches;
  std::int64_t used = len * n_batches;
  double mean = 0.0;
  for (std::int64_t i = 0; i < used; ++i) mean += x[i];
  mean /= static_cast<double>(used);

  double bvar = 0.0;
  for (int b = 0; b < n_batches; ++b) {
    double bm = 0.0;
    for (std::int64_t i = b * len; i < (b + 1) * len; ++i) bm += x[i];
    bm /= static_cast<double>(len);
    bvar += (bm - mean) * (bm - mean);
  }
  bvar /= static_cast<double>(n_batches - 1);

  double svar = 0.0;
  for (std::int64_t i = 0; i < used; ++i)
    svar += (x[i] - mean) * (x[i] - mean);
  svar /= static_cast<double>(used - 1);

  MomentEstimate e;
  e.value = mean;
  e.std_error = std::sqrt(bvar / static_cast<double>(n_batches));
  e.n_samples = used;
  double se2 = e.std_error * e.std_error;
  e.ess = se2 > 0.0 ? svar / se2 : static_cast<double>(used);
  if (e.ess > static_cast<double>(used)) e.ess = static_cast<double>(used);
  return e;
}

// Pools estimates from independent chains (equal weight per chain). The
// standard error is the larger of the propagated within-chain error and the
// between-chain spread of the means: within-chain batch means cannot see a
// per-chain equilibration offset, while the between-chain sample variance
// estimates the full per-chain variance without bias (the chains are
// genuinely independent), so taking the max keeps the error bar honest in
// both regimes.
inline MomentEstimate pool_chains(const std::vector<MomentEstimate>& chains) {
  if (chains.empty()) throw std::invalid_argument("pool_chains: empty");
  MomentEstimate e;
  double c = static_cast<double>(chains.size());
  double se2 = 0.0;
  for (const auto& m : chains) {
    e.value += m.value;
    se2 += m.std_error * m.std_error;
    e.n_samples += m.n_samples;
    e.ess += m.ess;
  }
  e.value /= c;
  double within2 = se2 / (c * c);
  double between2 = 0.0;
  if (chains.size() > 1) {
    double ss = 0.0;
    for (const auto& m : chains)
      ss += (m.value - e.value) * (m.value - e.value);
    between2 = ss / ((c - 1.0) * c);
  }
  e.std_error = std::sqrt(within2 > between2 ? within2 : between2);
  return e;
}

}  // namespace eigenbound
