#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "eigenbound/rng.hpp"
#include "eigenbound/so_group.hpp"
#include "eigenbound/spectrum.hpp"
#include "helpers.hpp"

using namespace eigenbound;

namespace {
Eigen::MatrixXd rot2(double t) {
  Eigen::MatrixXd m(2, 2);
  m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return m;
}
}  // namespace

TEST_CASE("generator basis entries and ordering") {
  auto l12 = SkewSymmetric::basis(1, 2, 2).dense();
  Eigen::MatrixXd want(2, 2);
  want << 0, 1, -1, 0;
  CHECK((l12 - want).cwiseAbs().maxCoeff() == 0.0);

  auto l13 = SkewSymmetric::basis(1, 3, 3).dense();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expect = (i == 0 && j == 2) ? 1.0 : (i == 2 && j == 0) ? -1.0 : 0.0;
      CHECK(l13(i, j) == expect);
    }

  CHECK_THROWS_AS(SkewSymmetric::basis(2, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(SkewSymmetric::basis(1, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(SkewSymmetric::basis(1, 1, 3), std::invalid_argument);

  // Linear index walks (1,2),(1,3),...,(1,p),(2,3),...
  CHECK(SkewSymmetric::basis_index(1, 2, 4) == 0);
  CHECK(SkewSymmetric::basis_index(1, 4, 4) == 2);
  CHECK(SkewSymmetric::basis_index(2, 3, 4) == 3);
  CHECK(SkewSymmetric::basis_index(3, 4, 4) == 5);

  SkewSymmetric xi(3);
  xi.set_entry(2, 1, 0.5);  // writes the (1,2) slot with flipped sign
  CHECK(xi.entry(1, 2) == -0.5);
  CHECK(xi.entry(2, 1) == 0.5);
  CHECK(xi.entry(2, 2) == 0.0);
  CHECK_THROWS_AS(xi.set_entry(2, 2, 1.0), std::invalid_argument);

  // HS norm counts both triangles: |L12|_HS = sqrt(2).
  CHECK(SkewSymmetric::basis(1, 2, 3).hs_norm() == doctest::Approx(std::sqrt(2.0)));

  // from_dense round trip and skewness validation.
  Eigen::MatrixXd m = l13;
  auto back = SkewSymmetric::from_dense(m).dense();
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd notskew = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(SkewSymmetric::from_dense(notskew), std::invalid_argument);
}

TEST_CASE("matrix exponential: fixed points of the closed form") {
  SkewSymmetric l12 = SkewSymmetric::basis(1, 2, 2);

  // t = 0 is the identity.
  CHECK((expm_skew(l12, 0.0) - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  // Quarter turn generated by L^(12): the closed form puts cos t on the
  // diagonal and -x_j sin t at (j,i); with i=1, x_2=1, t=pi/2 that is
  // exp = [[0, 1], [-1, 0]].
  Eigen::MatrixXd q = expm_skew(l12, M_PI / 2.0);
  Eigen::MatrixXd want(2, 2);
  want << 0, 1, -1, 0;
  CHECK((q - want).cwiseAbs().maxCoeff() < 1e-12);

  // Same element from the raw series.
  Eigen::MatrixXd qs = expm_skew_series(l12, M_PI / 2.0);
  CHECK((qs - want).cwiseAbs().maxCoeff() < 1e-12);

  // Two-component axis x = (0.6, 0.8) in p = 3 at t = 1.
  SkewSymmetric xi(3);
  xi.set_entry(1, 2, 0.6);
  xi.set_entry(1, 3, 0.8);
  Eigen::MatrixXd e = expm_skew(xi, 1.0);
  CHECK(e(0, 0) == doctest::Approx(std::cos(1.0)).epsilon(1e-12));
  CHECK(e(1, 0) == doctest::Approx(-0.6 * std::sin(1.0)).epsilon(1e-12));
  CHECK(e(2, 0) == doctest::Approx(-0.8 * std::sin(1.0)).epsilon(1e-12));
}

TEST_CASE("matrix exponential: one-parameter subgroup property") {
  RngStream rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    int p = 2 + static_cast<int>(rng.next_u32() % 4);
    SkewSymmetric xi(p);
    for (int k = 0; k < xi.coords().size(); ++k) xi.coords()[k] = rng.normal();
    double s = 2.0 * rng.uniform() - 1.0;
    double t = 2.0 * rng.uniform() - 1.0;
    Eigen::MatrixXd lhs = expm_skew(xi, s) * expm_skew(xi, t);
    Eigen::MatrixXd rhs = expm_skew(xi, s + t);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("matrix exponential: closed form agrees with the series") {
  RngStream rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    int p = 2 + static_cast<int>(rng.next_u32() % 5);
    int axis = 1 + static_cast<int>(rng.next_u32() % static_cast<unsigned>(p));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < p; ++j)
      if (j + 1 != axis) x[j] = rng.normal();
    x /= x.norm();
    double t = 4.0 * rng.uniform() - 2.0;

    SkewSymmetric xi(p);
    for (int j = 1; j <= p; ++j)
      if (j != axis) xi.set_entry(axis, j, x[j - 1]);

    Eigen::MatrixXd closed = expm_single_axis(axis, x, t);
    Eigen::MatrixXd series = expm_skew_series(xi, t);
    Eigen::MatrixXd dispatched = expm_skew(xi, t);
    CHECK((closed - series).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((dispatched - series).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("haar sampler: first and second moments") {
  const int n = 100000;

  {
    RngStream rng(21);
    std::vector<double> traces;
    traces.reserve(n);
    for (int i = 0; i < n; ++i) traces.push_back(haar_sample(3, rng).trace());
    auto est = testkit::mc_mean(traces);
    CHECK(std::abs(est.mean) <= 3.0 * est.se);
  }

  {
    RngStream rng(22);
    std::vector<double> u11sq;
    u11sq.reserve(n);
    for (int i = 0; i < n; ++i) {
      double u = haar_sample(4, rng).matrix()(0, 0);
      u11sq.push_back(u * u);
    }
    auto est = testkit::mc_mean(u11sq);
    CHECK(std::abs(est.mean - 0.25) <= 3.0 * est.se);
  }

  {
    RngStream rng(23);
    for (int i = 0; i < 200; ++i) {
      Rotation u = haar_sample(3, rng);
      CHECK(std::abs(u.matrix().determinant() - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("haar sampler: law is invariant under fixed left rotation") {
  const int n = 10000;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 3);
  v.topLeftCorner(2, 2) = rot2(0.77);
  Rotation fixed_v(v);

  RngStream r1(31), r2(32);
  std::vector<double> plain, rotated;
  plain.reserve(n);
  rotated.reserve(n);
  for (int i = 0; i < n; ++i) {
    plain.push_back(haar_sample(3, r1).trace());
    rotated.push_back((fixed_v.matrix() * haar_sample(3, r2).matrix()).trace());
  }
  CHECK(!testkit::ks_reject_1pct(plain, rotated));
}

TEST_CASE("goe sampler: variances and exact symmetry") {
  const int n = 100000;
  RngStream rng(41);
  std::vector<double> off, diag;
  off.reserve(n);
  diag.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd w = goe_sample(3, rng);
    CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
    off.push_back(w(0, 1) * w(0, 1));
    diag.push_back(w(0, 0) * w(0, 0));
  }
  auto est_off = testkit::mc_mean(off);
  auto est_diag = testkit::mc_mean(diag);
  CHECK(std::abs(est_off.mean - 1.0) <= 3.0 * est_off.se);
  CHECK(std::abs(est_diag.mean - 2.0) <= 3.0 * est_diag.se);
}

TEST_CASE("projectors from rotation columns") {
  Rotation id = Rotation::identity(3);
  Projector p1 = projector(id, IndexSet({1}));
  Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(3, 3);
  e11(0, 0) = 1.0;
  CHECK((p1.entries - e11).cwiseAbs().maxCoeff() < 1e-15);

  RngStream rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    Rotation u = haar_sample(4, rng);
    Projector full = projector(u, IndexSet({1, 2, 3, 4}));
    CHECK((full.entries - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-10);

    IndexSet I({1, 3});
    Projector p = projector(u, I);
    CHECK(std::abs(p.entries.trace() - 2.0) < 1e-10);
    // P + P_complement = identity.
    Projector pc = projector(u, I.complement(4));
    CHECK((p.entries + pc.entries - Eigen::MatrixXd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    // Idempotent and symmetric.
    CHECK((p.entries * p.entries - p.entries).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((p.entries - p.entries.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("hilbert-schmidt squared distance") {
  Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(2, 2), e22 = e11;
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  CHECK(hs_distance_sq(e11, e11) == 0.0);
  CHECK(hs_distance_sq(e11, e22) == doctest::Approx(2.0));
  CHECK_THROWS_AS(hs_distance_sq(e11, Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);

  // Two rank-d projectors are at squared distance in [0, 2d].
  RngStream rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    Rotation u = haar_sample(5, rng);
    Rotation v = haar_sample(5, rng);
    IndexSet I({1, 2});
    double d2 = hs_distance_sq(projector(u, I).entries, projector(v, I).entries);
    CHECK(d2 >= 0.0);
    CHECK(d2 <= 2.0 * 2 + 1e-12);
  }
}

TEST_CASE("plug-in eigenprojector") {
  Eigen::MatrixXd d321 = Eigen::Vector3d(3, 2, 1).asDiagonal();
  auto r = eigenprojector_hat(d321, IndexSet({1}));
  Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(3, 3);
  e11(0, 0) = 1.0;
  CHECK(!r.tie_split);
  CHECK((r.proj.entries - e11).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(r.boundary_gap == doctest::Approx(1.0));

  // Exact spectral reconstruction: eigenprojector of U diag U^T recovers the
  // column projector.
  RngStream rng(71);
  for (int rep = 0; rep < 10; ++rep) {
    Rotation u = haar_sample(3, rng);
    Eigen::MatrixXd sym =
        u.matrix() * d321 * u.matrix().transpose();
    sym = 0.5 * (sym + sym.transpose());
    IndexSet I({1, 2});
    auto rec = eigenprojector_hat(sym, I);
    CHECK(!rec.tie_split);
    CHECK((rec.proj.entries - projector(u, I).entries).cwiseAbs().maxCoeff() <
          1e-8);
  }

  // Splitting an exactly degenerate block is flagged.
  auto tie = eigenprojector_hat(Eigen::MatrixXd::Identity(2, 2), IndexSet({1}));
  CHECK(tie.tie_split);
}
