#pragma once

// Independent numerical oracles used only by the tests. Everything here is
// implemented from first principles (series, sorting, direct Monte Carlo) so
// that library results are checked against arithmetic that shares no code
// with the implementation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigenbound/rng.hpp"

namespace testkit {

// Modified Bessel function I_nu(z) by its power series. All terms are
// positive, so the summation is stable; good to ~1e-15 relative for the
// moderate arguments used in tests.
inline double bessel_i(int nu, double z) {
  double term = 1.0;
  for (int k = 1; k <= nu; ++k) term *= (z / 2.0) / static_cast<double>(k);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= (z * z / 4.0) / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Reject equality in distribution at the 1% level: critical value
// c(0.01) * sqrt((n+m)/(n m)) with c(0.01) = 1.628.
inline bool ks_reject_1pct(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double n = static_cast<double>(a.size());
  double m = static_cast<double>(b.size());
  double crit = 1.628 * std::sqrt((n + m) / (n * m));
  return ks_distance(a, b) > crit;
}

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

inline McEstimate mc_mean(const std::vector<double>& x) {
  double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Importance-sampling oracle for the chi-square divergence between the
// zero-mean Gaussians N(0, sigma1) and N(0, sigma0):
//   chi2(P1, P0) = E_{x ~ P1}[ p1(x)/p0(x) ] - 1.
// The density ratio is computed from scratch (Cholesky solves plus
// log-determinants), so this checks the orientation of the closed form, not
// just its magnitude.
inline McEstimate chi2_zero_mean_importance(const Eigen::MatrixXd& sigma1,
                                            const Eigen::MatrixXd& sigma0,
                                            int n_samples,
                                            eigenbound::RngStream rng) {
  const int p = static_cast<int>(sigma1.rows());
  Eigen::LLT<Eigen::MatrixXd> l1(sigma1), l0(sigma0);
  if (l1.info() != Eigen::Success || l0.info() != Eigen::Success)
    throw std::invalid_argument("chi2_zero_mean_importance: not PD");
  double logdet1 = 0.0, logdet0 = 0.0;
  for (int i = 0; i < p; ++i) {
    logdet1 += 2.0 * std::log(l1.matrixL()(i, i));
    logdet0 += 2.0 * std::log(l0.matrixL()(i, i));
  }
  std::vector<double> ratios(static_cast<std::size_t>(n_samples));
  Eigen::VectorXd z(p);
  for (int s = 0; s < n_samples; ++s) {
    for (int i = 0; i < p; ++i) z[i] = rng.normal();
    Eigen::VectorXd x = l1.matrixL() * z;  // x ~ N(0, sigma1)
    double q1 = x.dot(l1.solve(x));
    double q0 = x.dot(l0.solve(x));
    ratios[static_cast<std::size_t>(s)] =
        std::exp(-0.5 * (q1 - q0) - 0.5 * (logdet1 - logdet0));
  }
  McEstimate est = mc_mean(ratios);
  est.mean -= 1.0;
  return est;
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

}  // namespace testkit
