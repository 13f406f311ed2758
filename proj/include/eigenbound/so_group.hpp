#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "eigenbound/rng.hpp"
#include "eigenbound/spectrum.hpp"

namespace eigenbound {

// Element of so(p). Only the strict upper triangle is stored, so xi^T = -xi
// holds exactly by construction. Entries are ordered (1,2),(1,3),...,(1,p),
// (2,3),... matching the generator basis L^(ij) = e_i e_j^T - e_j e_i^T.
class SkewSymmetric {
 public:
  explicit SkewSymmetric(int p)
      : p_(p), upper_(Eigen::VectorXd::Zero(dim(p))) {
    if (p < 2) throw std::invalid_argument("SkewSymmetric: need p >= 2");
  }

  static int dim(int p) { return p * (p - 1) / 2; }

  // Linear position of the (i,j) generator, i < j, 1-based.
  static int basis_index(int i, int j, int p) {
    check_pair(i, j, p);
    return (i - 1) * p - i * (i + 1) / 2 + j - 1;
  }

  // L^(ij) with +1 at (i,j) and -1 at (j,i).
  static SkewSymmetric basis(int i, int j, int p) {
    SkewSymmetric xi(p);
    xi.upper_[basis_index(i, j, p)] = 1.0;
    return xi;
  }

  static SkewSymmetric from_dense(const Eigen::MatrixXd& m, double tol = 1e-12) {
    if (m.rows() != m.cols() || m.rows() < 2)
      throw std::invalid_argument("SkewSymmetric: square matrix required");
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("SkewSymmetric: matrix is not skew");
    int p = static_cast<int>(m.rows());
    SkewSymmetric xi(p);
    for (int i = 1; i < p; ++i)
      for (int j = i + 1; j <= p; ++j)
        xi.upper_[basis_index(i, j, p)] = m(i - 1, j - 1);
    return xi;
  }

  int p() const { return p_; }
  const Eigen::VectorXd& coords() const { return upper_; }
  Eigen::VectorXd& coords() { return upper_; }

  double entry(int i, int j) const {  // signed, 1-based
    if (i == j) return 0.0;
    if (i < j) return upper_[basis_index(i, j, p_)];
    return -upper_[basis_index(j, i, p_)];
  }

  void set_entry(int i, int j, double v) {
    if (i < j)
      upper_[basis_index(i, j, p_)] = v;
    else if (j < i)
      upper_[basis_index(j, i, p_)] = -v;
    else
      throw std::invalid_argument("SkewSymmetric: diagonal entry");
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p_, p_);
    for (int i = 1; i < p_; ++i)
      for (int j = i + 1; j <= p_; ++j) {
        double v = upper_[basis_index(i, j, p_)];
        m(i - 1, j - 1) = v;
        m(j - 1, i - 1) = -v;
      }
    return m;
  }

  double hs_norm() const { return std::sqrt(2.0) * upper_.norm(); }

  SkewSymmetric& operator*=(double s) {
    upper_ *= s;
    return *this;
  }

 private:
  static void check_pair(int i, int j, int p) {
    if (i < 1 || j <= i || j > p)
      throw std::invalid_argument("SkewSymmetric: need 1 <= i < j <= p");
  }

  int p_;
  Eigen::VectorXd upper_;
};

// Orthogonal matrix with determinant +1, validated on construction.
class Rotation {
 public:
  explicit Rotation(Eigen::MatrixXd m) : m_(std::move(m)) {
    int p = static_cast<int>(m_.rows());
    if (m_.cols() != p || p < 2)
      throw std::invalid_argument("Rotation: square matrix, p >= 2 required");
    double ortho =
        (m_.transpose() * m_ - Eigen::MatrixXd::Identity(p, p)).norm();
    if (ortho > 1e-10 * p)
      throw std::invalid_argument("Rotation: not orthogonal");
    if (std::abs(m_.determinant() - 1.0) > 1e-8)
      throw std::invalid_argument("Rotation: determinant is not +1");
  }

  static Rotation identity(int p) {
    return Rotation(Eigen::MatrixXd::Identity(p, p));
  }

  int p() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double trace() const { return m_.trace(); }

 private:
  Eigen::MatrixXd m_;
};

// Rank-d orthogonal projector tagged with the ranks it was cut from.
struct Projector {
  Eigen::MatrixXd entries;
  IndexSet index_set;
};

// exp(t*xi), scaling-and-squaring with the series truncated at absolute
// entry tolerance 1e-13. Dispatches to the closed form when xi lives in a
// single row/column pair family (see expm_single_axis).
Eigen::MatrixXd expm_skew(const SkewSymmetric& xi, double t = 1.0);

// Series path, exposed so tests can compare it with the closed form.
Eigen::MatrixXd expm_skew_series(const SkewSymmetric& xi, double t = 1.0);

// Closed form for xi = sum_{j != i} x_j L^(ij): with r = |x|,
// exp(t xi) = I + sin(rt)/r xi + (1 - cos(rt))/r^2 xi^2, so the (i,i) entry
// is cos(rt) and the (j,i) entries are -x_j sin(rt)/r.
Eigen::MatrixXd expm_single_axis(int i, const Eigen::VectorXd& x_by_row,
                                 double t);

// Haar sample via QR of a Gaussian matrix: Q's columns are sign-fixed by
// diag(R), then the last column is negated if det == -1.
Rotation haar_sample(int p, RngStream& rng);

// Symmetric Gaussian matrix with E W_ij^2 = 1 off the diagonal and
// E W_ii^2 = 2 on it.
Eigen::MatrixXd goe_sample(int p, RngStream& rng);

// P_I(U) = sum_{i in I} u_i u_i^T from the columns of U.
Projector projector(const Rotation& u, const IndexSet& index_set);

double hs_distance_sq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Spectral projector of a symmetric matrix onto the eigenvalue ranks in
// `index_set` (ranks count from the largest eigenvalue). When the eigengap at
// the boundary of I falls below 1e-12 * max(1, |lambda|_max) the split is
// ill-defined and `tie_split` is flagged; the projector is still returned.
struct EigenprojectorResult {
  Projector proj;
  bool tie_split = false;
  double boundary_gap = 0.0;
};

EigenprojectorResult eigenprojector_hat(const Eigen::MatrixXd& symmetric,
                                        const IndexSet& index_set);

}  // namespace eigenbound
