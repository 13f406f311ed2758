#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

#include "eigenbound/so_group.hpp"
#include "eigenbound/spectrum.hpp"

namespace eigenbound::div {

// n i.i.d. observations from N(0, U Lambda U^T).
struct PcaModel {
  Spectrum spectrum;
  std::int64_t n;

  PcaModel(Spectrum s, std::int64_t n_obs) : spectrum(std::move(s)), n(n_obs) {
    if (!spectrum.all_positive())
      throw std::invalid_argument("PcaModel: spectrum must be positive");
    if (n < 1) throw std::invalid_argument("PcaModel: need n >= 1");
  }
};

// One observation X = U Lambda U^T + sigma W, W symmetric Gaussian with
// E W_ij^2 = 1 off-diagonal and E W_ii^2 = 2.
struct DenoiseModel {
  Spectrum spectrum;
  double sigma;

  // sigma = 0 is allowed for noiseless simulation; the divergence and Fisher
  // evaluators require sigma > 0.
  DenoiseModel(Spectrum s, double noise) : spectrum(std::move(s)), sigma(noise) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("DenoiseModel: sigma < 0");
  }
};

// chi^2(P_V, P_I) for the n-sample PCA model, i.e. between N(0, V Lambda V^T)
// and N(0, Lambda), tensorized n times. Evaluated through the relative
// spectrum gamma of Lambda^{-1/2} V Lambda V^T Lambda^{-1/2}: the divergence
// is finite iff every gamma < 2, where (1 + chi^2_1)^2 = 1 / prod gamma(2 -
// gamma). Returns +infinity when divergent.
double chi2_pca_exact(const PcaModel& model, const Rotation& v);

// Zero-mean Gaussian chi^2 between N(0, sigma1) and N(0, sigma0), n-fold.
double chi2_gauss_zero_mean(const Eigen::MatrixXd& sigma1,
                            const Eigen::MatrixXd& sigma0, std::int64_t n = 1);

// chi^2(N(mu1, sigma), N(mu2, sigma)) = exp(|sigma^{-1/2}(mu1-mu2)|^2) - 1.
double chi2_gauss_meanshift(const Eigen::VectorXd& mu1,
                            const Eigen::VectorXd& mu2,
                            const Eigen::MatrixXd& sigma);

// Product rule for independent factors: (1+a)(1+b) - 1.
double chi2_product(double a, double b);

// Exact denoising chi^2(P_V, P_I) = exp(|V Lambda V^T - Lambda|_HS^2 /
// (2 sigma^2)) - 1, the mean-shift formula routed through the
// half-vectorization identity |Sigma_W^{-1/2} vech(A)|^2 = |A|_HS^2 / 2.
double chi2_denoise_exact(const DenoiseModel& model, const Rotation& v);

// Quadratic form of the local experiment at U = I_p in the generator basis.
// PCA:      I(xi,eta) = (n/2) sum_{ij} xi_ij eta_ij (l_i-l_j)^2/(l_i l_j)
// denoise:  I(xi,eta) = (1/(2 sigma^2)) sum_{ij} xi_ij eta_ij (l_i-l_j)^2
// Both are diagonalized by the L^(ij); the Gram matrix in that basis is
// diagonal and positive semidefinite with kernel exactly the
// equal-eigenvalue directions.
class FisherForm {
 public:
  enum class Model { Pca, Denoise };

  FisherForm(Model model, const Spectrum& spectrum, double factor);

  double operator()(const SkewSymmetric& xi, const SkewSymmetric& eta) const;
  // I(L^(ij), L^(ij)), 1-based i < j.
  double diag(int i, int j) const;
  Eigen::VectorXd gram_diagonal() const;  // ordered by SkewSymmetric basis_index
  Eigen::MatrixXd gram() const;
  int p() const { return p_; }
  int dim() const { return SkewSymmetric::dim(p_); }
  Model model() const { return model_; }

 private:
  Model model_;
  int p_;
  Eigen::MatrixXd weight_;  // I(xi,eta) = sum_{i<j} 2 w_ij xi_ij eta_ij
};

FisherForm fisher_pca(const PcaModel& model);
FisherForm fisher_denoise(const DenoiseModel& model);

struct FdCheckResult {
  double form_value = 0.0;        // I(xi, xi)
  double fd_value = 0.0;          // Richardson-extrapolated chi^2(t)/t^2
  double relative_error = 0.0;
};

// Finite-difference consistency of a chi^2 curve against the quadratic form:
// F(t) = chi2(t)/t^2 has expansion I + O(t^2), so the Richardson combination
// (4 F(t/2) - F(t))/3 cancels the leading bias. Throws std::domain_error when
// the curve is divergent at the probe points and std::invalid_argument when
// xi lies in the kernel of the form.
FdCheckResult fisher_fd_check(const FisherForm& form,
                              const std::function<double(double)>& chi2_of_t,
                              const SkewSymmetric& xi, double t = 1e-3);

// KL divergence between the n-sample PCA models spanned by two rank-d
// projectors under a spiked two-level spectrum:
// K = n (l_d - l_{d+1})^2 / (4 l_d l_{d+1}) * |P1 - P2|_HS^2.
double kl_spiked(const Projector& p1, const Projector& p2,
                 const Spectrum& spectrum, std::int64_t n);

}  // namespace eigenbound::div
