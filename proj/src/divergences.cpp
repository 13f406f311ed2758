#include "eigenbound/divergences.hpp"

#include <cmath>
#include <limits>

namespace eigenbound::div {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + chi^2) for one sample given the relative spectrum gamma of
// sigma0^{-1/2} sigma1 sigma0^{-1/2}; +inf when divergent.
double log1p_chi2_from_relative(const Eigen::VectorXd& gamma) {
  double acc = 0.0;
  for (int i = 0; i < gamma.size(); ++i) {
    double g = gamma[i];
    if (!(g > 0.0)) throw std::invalid_argument("chi2: sigma1 not positive");
    if (g >= 2.0) return kInf;
    acc += std::log(g) + std::log(2.0 - g);
  }
  return -0.5 * acc;
}

double nfold(double log1p_single, std::int64_t n) {
  if (log1p_single == kInf) return kInf;
  double l = static_cast<double>(n) * log1p_single;
  if (l > 709.0) return kInf;
  return std::expm1(l);
}
}  // namespace

double chi2_gauss_zero_mean(const Eigen::MatrixXd& sigma1,
                            const Eigen::MatrixXd& sigma0, std::int64_t n) {
  if (sigma1.rows() != sigma0.rows() || sigma1.cols() != sigma0.cols() ||
      sigma1.rows() != sigma1.cols())
    throw std::invalid_argument("chi2_gauss_zero_mean: shape mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma0);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("chi2_gauss_zero_mean: sigma0 not SPD");
  Eigen::MatrixXd l = llt.matrixL();
  // relative matrix L^{-1} sigma1 L^{-T}
  Eigen::MatrixXd rel = l.triangularView<Eigen::Lower>().solve(sigma1);
  rel = l.triangularView<Eigen::Lower>()
            .solve(rel.transpose())
            .transpose()
            .eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (rel + rel.transpose()));
  return nfold(log1p_chi2_from_relative(es.eigenvalues()), n);
}

double chi2_pca_exact(const PcaModel& model, const Rotation& v) {
  int p = model.spectrum.p();
  if (v.p() != p) throw std::invalid_argument("chi2_pca_exact: p mismatch");
  Eigen::VectorXd lam =
      Eigen::Map<const Eigen::VectorXd>(model.spectrum.values().data(), p);
  Eigen::VectorXd isqrt = lam.cwiseSqrt().cwiseInverse();
  // relative matrix Lambda^{-1/2} V Lambda V^T Lambda^{-1/2}
  Eigen::MatrixXd a = isqrt.asDiagonal() * v.matrix() *
                      lam.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd rel = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rel);
  return nfold(log1p_chi2_from_relative(es.eigenvalues()), model.n);
}

double chi2_gauss_meanshift(const Eigen::VectorXd& mu1,
                            const Eigen::VectorXd& mu2,
                            const Eigen::MatrixXd& sigma) {
  if (mu1.size() != mu2.size() || sigma.rows() != mu1.size() ||
      sigma.cols() != mu1.size())
    throw std::invalid_argument("chi2_gauss_meanshift: shape mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("chi2_gauss_meanshift: sigma not SPD");
  Eigen::VectorXd d = mu1 - mu2;
  double q = d.dot(llt.solve(d));
  if (q > 709.0) return kInf;
  return std::expm1(q);
}

double chi2_product(double a, double b) {
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("chi2_product: negative chi^2");
  if (a == kInf || b == kInf) return kInf;
  return a + b + a * b;
}

double chi2_denoise_exact(const DenoiseModel& model, const Rotation& v) {
  int p = model.spectrum.p();
  if (v.p() != p) throw std::invalid_argument("chi2_denoise_exact: p mismatch");
  if (!(model.sigma > 0.0))
    throw std::invalid_argument("chi2_denoise_exact: sigma must be > 0");
  Eigen::VectorXd lam =
      Eigen::Map<const Eigen::VectorXd>(model.spectrum.values().data(), p);
  Eigen::MatrixXd diff =
      v.matrix() * lam.asDiagonal() * v.matrix().transpose();
  diff -= Eigen::MatrixXd(lam.asDiagonal());
  double q = diff.squaredNorm() / (2.0 * model.sigma * model.sigma);
  if (q > 709.0) return kInf;
  return std::expm1(q);
}

FisherForm::FisherForm(Model model, const Spectrum& spectrum, double factor)
    : model_(model), p_(spectrum.p()), weight_(p_, p_) {
  for (int i = 0; i < p_; ++i)
    for (int j = 0; j < p_; ++j) {
      double li = spectrum.values()[static_cast<std::size_t>(i)];
      double lj = spectrum.values()[static_cast<std::size_t>(j)];
      double gap2 = (li - lj) * (li - lj);
      weight_(i, j) =
          model == Model::Pca ? factor * gap2 / (li * lj) : factor * gap2;
    }
}

double FisherForm::operator()(const SkewSymmetric& xi,
                              const SkewSymmetric& eta) const {
  if (xi.p() != p_ || eta.p() != p_)
    throw std::invalid_argument("FisherForm: p mismatch");
  double acc = 0.0;
  for (int i = 1; i < p_; ++i)
    for (int j = i + 1; j <= p_; ++j)
      acc += 2.0 * weight_(i - 1, j - 1) * xi.entry(i, j) * eta.entry(i, j);
  return acc;
}

double FisherForm::diag(int i, int j) const {
  if (i < 1 || j <= i || j > p_)
    throw std::invalid_argument("FisherForm::diag: need 1 <= i < j <= p");
  return 2.0 * weight_(i - 1, j - 1);
}

Eigen::VectorXd FisherForm::gram_diagonal() const {
  Eigen::VectorXd d(dim());
  for (int i = 1; i < p_; ++i)
    for (int j = i + 1; j <= p_; ++j)
      d[SkewSymmetric::basis_index(i, j, p_)] = diag(i, j);
  return d;
}

Eigen::MatrixXd FisherForm::gram() const {
  return gram_diagonal().asDiagonal();
}

FisherForm fisher_pca(const PcaModel& model) {
  return FisherForm(FisherForm::Model::Pca, model.spectrum,
                    static_cast<double>(model.n) / 2.0);
}

FisherForm fisher_denoise(const DenoiseModel& model) {
  if (!(model.sigma > 0.0))
    throw std::invalid_argument("fisher_denoise: sigma must be > 0");
  return FisherForm(FisherForm::Model::Denoise, model.spectrum,
                    1.0 / (2.0 * model.sigma * model.sigma));
}

FdCheckResult fisher_fd_check(const FisherForm& form,
                              const std::function<double(double)>& chi2_of_t,
                              const SkewSymmetric& xi, double t) {
  FdCheckResult r;
  r.form_value = form(xi, xi);
  if (!(r.form_value > 0.0))
    throw std::invalid_argument(
        "fisher_fd_check: xi is in the kernel of the form");
  double f1 = chi2_of_t(t) / (t * t);
  double f2 = chi2_of_t(t / 2.0) / (t * t / 4.0);
  if (!std::isfinite(f1) || !std::isfinite(f2))
    throw std::domain_error("fisher_fd_check: divergent chi^2 at probe t");
  r.fd_value = (4.0 * f2 - f1) / 3.0;
  r.relative_error = std::abs(r.fd_value - r.form_value) / r.form_value;
  return r;
}

double kl_spiked(const Projector& p1, const Projector& p2,
                 const Spectrum& spectrum, std::int64_t n) {
  double t1 = p1.entries.trace();
  double t2 = p2.entries.trace();
  int d = static_cast<int>(std::lround(t1));
  if (std::abs(t1 - d) > 1e-8 || std::abs(t2 - t1) > 1e-8)
    throw std::invalid_argument("kl_spiked: projector ranks must match");
  if (d < 1 || d >= spectrum.p())
    throw std::invalid_argument("kl_spiked: need 1 <= d < p");
  double ld = spectrum[d];
  double ld1 = spectrum[d + 1];
  if (!(ld > ld1) || !(ld1 > 0.0))
    throw std::invalid_argument("kl_spiked: need lambda_d > lambda_{d+1} > 0");
  double gap2 = (ld - ld1) * (ld - ld1);
  return static_cast<double>(n) * gap2 / (4.0 * ld * ld1) *
         hs_distance_sq(p1.entries, p2.entries);
}

}  // namespace eigenbound::div
