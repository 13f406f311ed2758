#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "eigenbound/divergences.hpp"
#include "eigenbound/rng.hpp"
#include "eigenbound/so_group.hpp"
#include "helpers.hpp"

using namespace eigenbound;
using div::DenoiseModel;
using div::PcaModel;

namespace {
Rotation rot2(double t) {
  Eigen::MatrixXd m(2, 2);
  m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return Rotation(m);
}

Eigen::MatrixXd covariance(const Rotation& v, const Spectrum& lam) {
  Eigen::VectorXd d(lam.p());
  for (int i = 1; i <= lam.p(); ++i) d[i - 1] = lam[i];
  return v.matrix() * d.asDiagonal() * v.matrix().transpose();
}
}  // namespace

TEST_CASE("pca chi-square: identity, divergence, tensorization") {
  PcaModel m(Spectrum::from_values({2.0, 1.0}), 1);

  CHECK(div::chi2_pca_exact(m, Rotation::identity(2)) == doctest::Approx(0.0));

  // Quarter turn swaps the eigenvalue frames; the divergence criterion
  // (a relative eigenvalue reaching 2) is hit exactly.
  CHECK(div::chi2_pca_exact(m, rot2(M_PI / 2.0)) ==
        std::numeric_limits<double>::infinity());

  // n observations tensorize: chi2_n = (1 + chi2_1)^n - 1.
  double c1 = div::chi2_pca_exact(m, rot2(0.3));
  PcaModel m3(Spectrum::from_values({2.0, 1.0}), 3);
  double c3 = div::chi2_pca_exact(m3, rot2(0.3));
  CHECK(c3 == doctest::Approx(std::pow(1.0 + c1, 3) - 1.0).epsilon(1e-12));

  // And the generic zero-mean Gaussian evaluator agrees with the
  // eigenvalue-based closed form.
  double generic = div::chi2_gauss_zero_mean(
      covariance(rot2(0.3), m.spectrum), covariance(Rotation::identity(2), m.spectrum), 1);
  CHECK(generic == doctest::Approx(c1).epsilon(1e-10));
}

TEST_CASE("pca chi-square: importance-sampling oracle fixes the orientation") {
  // chi2(P_V, P_I) = E_{x ~ P_V}[p_V(x)/p_I(x)] - 1, estimated from scratch.
  // This catches a swapped-argument implementation, which would produce the
  // same small-t limit but differ at finite rotation.
  {
    PcaModel m(Spectrum::from_values({2.0, 1.0}), 1);
    Rotation v = rot2(0.5);
    double exact = div::chi2_pca_exact(m, v);
    auto is = testkit::chi2_zero_mean_importance(
        covariance(v, m.spectrum), covariance(Rotation::identity(2), m.spectrum),
        300000, RngStream(101));
    REQUIRE(is.se < 0.05 * exact);
    CHECK(std::abs(is.mean - exact) <= 4.0 * is.se);
  }
  {
    PcaModel m(Spectrum::from_values({3.0, 1.5, 1.0}), 1);
    SkewSymmetric xi(3);
    RngStream rng(102);
    for (int k = 0; k < 3; ++k) xi.coords()[k] = rng.normal();
    xi *= 0.4 / xi.hs_norm();
    Rotation v(expm_skew(xi, 1.0));
    double exact = div::chi2_pca_exact(m, v);
    auto is = testkit::chi2_zero_mean_importance(
        covariance(v, m.spectrum), covariance(Rotation::identity(3), m.spectrum),
        300000, RngStream(103));
    REQUIRE(is.se < 0.05 * exact);
    CHECK(std::abs(is.mean - exact) <= 4.0 * is.se);
  }
}

TEST_CASE("pca chi-square: invariant under rotations fixing the spectrum") {
  // Conjugating V by a rotation of the equal-eigenvalue block leaves the
  // relative spectrum, hence the divergence, unchanged.
  Spectrum lam = Spectrum::from_values({2.0, 1.0, 1.0});
  PcaModel m(lam, 5);
  Eigen::MatrixXd pm(3, 3);
  pm << 1, 0, 0, 0, 0, 1, 0, -1, 0;  // rotates the tied block, det +1
  Rotation perm(pm);

  RngStream rng(104);
  for (int rep = 0; rep < 10; ++rep) {
    SkewSymmetric xi(3);
    for (int k = 0; k < 3; ++k) xi.coords()[k] = rng.normal();
    xi *= 0.3 / xi.hs_norm();
    Rotation v(expm_skew(xi, 1.0));
    Rotation conj(perm.matrix().transpose() * v.matrix() * perm.matrix());
    double a = div::chi2_pca_exact(m, v);
    double b = div::chi2_pca_exact(m, conj);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("mean-shift chi-square") {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  CHECK(div::chi2_gauss_meanshift(mu, mu, id) == doctest::Approx(0.0));

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1[0] = 1.0;
  CHECK(div::chi2_gauss_meanshift(mu, e1, id) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

  Eigen::MatrixXd notpd = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(div::chi2_gauss_meanshift(mu, e1, notpd),
                  std::invalid_argument);
}

TEST_CASE("product rule for independent factors") {
  CHECK(div::chi2_product(0.0, 0.7) == doctest::Approx(0.7));
  CHECK(div::chi2_product(1.0, 1.0) == doctest::Approx(3.0));
  double folded = 0.0;
  for (int i = 0; i < 3; ++i) folded = div::chi2_product(folded, 0.1);
  CHECK(folded == doctest::Approx(0.331).epsilon(1e-12));
}

TEST_CASE("denoising chi-square and the half-vectorization identity") {
  DenoiseModel m(Spectrum::from_values({1.0, 0.0}), 1.0);
  CHECK(div::chi2_denoise_exact(m, Rotation::identity(2)) ==
        doctest::Approx(0.0));

  // exp(|V L V^T - L|^2 / (2 sigma^2)) - 1, assembled by hand.
  Rotation v = rot2(0.4);
  Eigen::MatrixXd lam = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  double hs = hs_distance_sq(v.matrix() * lam * v.matrix().transpose(), lam);
  CHECK(div::chi2_denoise_exact(m, v) ==
        doctest::Approx(std::expm1(hs / 2.0)).epsilon(1e-12));

  // sigma = 0 models are simulatable but have no finite divergence.
  DenoiseModel noiseless(Spectrum::from_values({1.0, 0.0}), 0.0);
  CHECK_THROWS_AS(div::chi2_denoise_exact(noiseless, v), std::invalid_argument);
}

TEST_CASE("pca fisher form: pinned values and diagonalization") {
  PcaModel m(Spectrum::from_values({2.0, 1.0}), 4);
  auto form = div::fisher_pca(m);
  SkewSymmetric l12 = SkewSymmetric::basis(1, 2, 2);
  CHECK(form(l12, l12) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(form.diag(1, 2) == doctest::Approx(2.0).epsilon(1e-14));

  PcaModel m3(Spectrum::from_values({2.0, 1.5, 1.0}), 4);
  auto form3 = div::fisher_pca(m3);
  SkewSymmetric a = SkewSymmetric::basis(1, 2, 3);
  SkewSymmetric b = SkewSymmetric::basis(1, 3, 3);
  CHECK(form3(a, b) == doctest::Approx(0.0));

  // Equal eigenvalues span the kernel.
  PcaModel tied(Spectrum::from_values({2.0, 2.0, 1.0}), 4);
  auto formt = div::fisher_pca(tied);
  CHECK(formt.diag(1, 2) == doctest::Approx(0.0));

  // Gram matrix is diagonal and PSD.
  Eigen::MatrixXd g = form3.gram();
  CHECK((g - Eigen::MatrixXd(g.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(g.diagonal().minCoeff() >= -1e-10);
  CHECK((g.diagonal() - form3.gram_diagonal()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("denoising fisher form: pinned values and sigma scaling") {
  DenoiseModel m(Spectrum::from_values({1.0, 0.0}), 1.0);
  auto form = div::fisher_denoise(m);
  SkewSymmetric l12 = SkewSymmetric::basis(1, 2, 2);
  CHECK(form(l12, l12) == doctest::Approx(1.0).epsilon(1e-14));

  DenoiseModel m2(Spectrum::from_values({1.0, 0.0}), 2.0);
  CHECK(div::fisher_denoise(m2)(l12, l12) ==
        doctest::Approx(0.25).epsilon(1e-14));

  DenoiseModel tied(Spectrum::from_values({1.0, 1.0}), 1.0);
  CHECK(div::fisher_denoise(tied).diag(1, 2) == doctest::Approx(0.0));

  DenoiseModel noiseless(Spectrum::from_values({1.0, 0.0}), 0.0);
  CHECK_THROWS_AS(div::fisher_denoise(noiseless), std::invalid_argument);
}

TEST_CASE("finite differences recover both fisher forms") {
  {
    PcaModel m(Spectrum::from_values({2.0, 1.0}), 1);
    auto form = div::fisher_pca(m);
    SkewSymmetric l12 = SkewSymmetric::basis(1, 2, 2);
    auto chi2_of_t = [&](double t) {
      return div::chi2_pca_exact(m, Rotation(expm_skew(l12, t)));
    };
    auto res = div::fisher_fd_check(form, chi2_of_t, l12, 1e-3);
    CHECK(res.relative_error <= 1e-2);
  }
  {
    DenoiseModel m(Spectrum::from_values({1.0, 0.0}), 1.0);
    auto form = div::fisher_denoise(m);
    SkewSymmetric l12 = SkewSymmetric::basis(1, 2, 2);
    auto chi2_of_t = [&](double t) {
      return div::chi2_denoise_exact(m, Rotation(expm_skew(l12, t)));
    };
    auto res = div::fisher_fd_check(form, chi2_of_t, l12, 1e-3);
    CHECK(res.relative_error <= 1e-2);
  }
}

TEST_CASE("finite-difference check error cases") {
  PcaModel m(Spectrum::from_values({2.0, 1.0}), 1);
  auto form = div::fisher_pca(m);
  SkewSymmetric l12 = SkewSymmetric::basis(1, 2, 2);
  auto chi2_of_t = [&](double t) {
    return div::chi2_pca_exact(m, Rotation(expm_skew(l12, t)));
  };

  // Divergent curve at the probe scale.
  CHECK_THROWS_AS(div::fisher_fd_check(form, chi2_of_t, l12, M_PI / 2.0),
                  std::domain_error);

  // Direction in the kernel of the form (tied eigenvalues).
  PcaModel tied(Spectrum::from_values({2.0, 2.0}), 1);
  auto formt = div::fisher_pca(tied);
  auto chi2_zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(div::fisher_fd_check(formt, chi2_zero, l12, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("fisher form is the same at every base rotation") {
  // chi2 between the models spanned around base point U reduces exactly to
  // the base form, so the finite-difference estimate at 20 random U must
  // match the closed form within the quadratic-bias tolerance.
  PcaModel m(Spectrum::from_values({3.0, 1.5, 1.0}), 2);
  auto form = div::fisher_pca(m);
  RngStream rng(105);
  for (int rep = 0; rep < 20; ++rep) {
    Rotation u = haar_sample(3, rng);
    SkewSymmetric xi(3);
    for (int k = 0; k < 3; ++k) xi.coords()[k] = rng.normal();
    xi *= 1.0 / xi.hs_norm();

    auto chi2_of_t = [&](double t) {
      Eigen::MatrixXd v = u.matrix() * expm_skew(xi, t);
      Eigen::MatrixXd lam = Eigen::Vector3d(3.0, 1.5, 1.0).asDiagonal();
      return div::chi2_gauss_zero_mean(
          v * lam * v.transpose(),
          u.matrix() * lam * u.matrix().transpose(), m.n);
    };
    auto res = div::fisher_fd_check(form, chi2_of_t, xi, 1e-3);
    CHECK(res.relative_error <= 0.02);
  }
}

TEST_CASE("spiked kullback-leibler divergence") {
  Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(2, 2), e22 = e11;
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  Projector p1{e11, IndexSet({1})};
  Projector p2{e22, IndexSet({2})};
  Spectrum lam = Spectrum::from_values({2.0, 1.0});

  CHECK(div::kl_spiked(p1, p1, lam, 1) == doctest::Approx(0.0));
  CHECK(div::kl_spiked(p1, p2, lam, 1) == doctest::Approx(0.25).epsilon(1e-14));
  // Linear in n.
  CHECK(div::kl_spiked(p1, p2, lam, 7) ==
        doctest::Approx(7.0 * 0.25).epsilon(1e-14));

  // Rank mismatch rejected.
  Eigen::MatrixXd two = Eigen::MatrixXd::Identity(2, 2);
  Projector prank2{two, IndexSet({1, 2})};
  CHECK_THROWS_AS(div::kl_spiked(p1, prank2, lam, 1), std::invalid_argument);

  // The boundary eigenvalues must be separated.
  Spectrum tied = Spectrum::from_values({1.0, 1.0});
  CHECK_THROWS_AS(div::kl_spiked(p1, p2, tied, 1), std::invalid_argument);
}
