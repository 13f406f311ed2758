#include "eigenbound/so_group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eigenbound {

namespace {

// Detects xi = sum_{j != i} x_j L^(ij): all nonzero entries share index i.
std::optional<int> single_axis_row(const SkewSymmetric& xi) {
  int p = xi.p();
  bool have_pair = false;
  int cand_a = 0, cand_b = 0;
  for (int i = 1; i < p; ++i) {
    for (int j = i + 1; j <= p; ++j) {
      if (xi.entry(i, j) == 0.0) continue;
      if (!have_pair) {
        cand_a = i;
        cand_b = j;
        have_pair = true;
        continue;
      }
      if (cand_a != i && cand_a != j) cand_a = 0;
      if (cand_b != i && cand_b != j) cand_b = 0;
      if (cand_a == 0 && cand_b == 0) return std::nullopt;
    }
  }
  if (!have_pair) return std::nullopt;
  if (cand_a != 0) return cand_a;
  return cand_b;
}

}  // namespace

Eigen::MatrixXd expm_skew_series(const SkewSymmetric& xi, double t) {
  int p = xi.p();
  Eigen::MatrixXd a = xi.dense() * t;
  double norm = a.cwiseAbs().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    a /= std::pow(2.0, squarings);
  }
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(p, p);
  for (int k = 1; k <= 60; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-13) break;
  }
  for (int s = 0; s < squarings; ++s) result = (result * result).eval();
  return result;
}

Eigen::MatrixXd expm_single_axis(int i, const Eigen::VectorXd& x_by_row,
                                 double t) {
  int p = static_cast<int>(x_by_row.size());
  if (i < 1 || i > p) throw std::invalid_argument("expm_single_axis: bad i");
  if (x_by_row[i - 1] != 0.0)
    throw std::invalid_argument("expm_single_axis: x_i must be 0");
  double r = x_by_row.norm();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(p, p);
  if (r == 0.0) return result;
  double c = std::cos(r * t);
  double s = std::sin(r * t) / r;
  double w = (1.0 - c) / (r * r);
  // xi = sum_j x_j L^(ij): row i is +x^T, column i is -x, xi^2 =
  // -r^2 e_i e_i^T - x x^T away from the axis.
  for (int j = 1; j <= p; ++j) {
    if (j == i) continue;
    double xj = x_by_row[j - 1];
    result(i - 1, j - 1) += s * xj;
    result(j - 1, i - 1) -= s * xj;
    for (int k = 1; k <= p; ++k) {
      if (k == i) continue;
      result(j - 1, k - 1) -= w * xj * x_by_row[k - 1];
    }
  }
  result(i - 1, i - 1) -= w * r * r;
  return result;
}

Eigen::MatrixXd expm_skew(const SkewSymmetric& xi, double t) {
  if (auto axis = single_axis_row(xi)) {
    int p = xi.p();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    for (int j = 1; j <= p; ++j)
      if (j != *axis) x[j - 1] = xi.entry(*axis, j);
    return expm_single_axis(*axis, x, t);
  }
  return expm_skew_series(xi, t);
}

Rotation haar_sample(int p, RngStream& rng) {
  Eigen::MatrixXd g(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (q.determinant() < 0.0) q.col(p - 1) = -q.col(p - 1);
  return Rotation(std::move(q));
}

Eigen::MatrixXd goe_sample(int p, RngStream& rng) {
  Eigen::MatrixXd w(p, p);
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i < p; ++i) {
    w(i, i) = sqrt2 * rng.normal();
    for (int j = i + 1; j < p; ++j) {
      double v = rng.normal();
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

Projector projector(const Rotation& u, const IndexSet& index_set) {
  int p = u.p();
  if (index_set.empty() || index_set.max_index() > p)
    throw std::invalid_argument("projector: index set out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int i : index_set) {
    Eigen::VectorXd col = u.matrix().col(i - 1);
    m.selfadjointView<Eigen::Lower>().rankUpdate(col, 1.0);
  }
  m = m.selfadjointView<Eigen::Lower>();
  return Projector{std::move(m), index_set};
}

double hs_distance_sq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_distance_sq: shape mismatch");
  return (a - b).squaredNorm();
}

EigenprojectorResult eigenprojector_hat(const Eigen::MatrixXd& symmetric,
                                        const IndexSet& index_set) {
  int p = static_cast<int>(symmetric.rows());
  if (symmetric.cols() != p)
    throw std::invalid_argument("eigenprojector_hat: square matrix required");
  if (index_set.empty() || index_set.max_index() > p)
    throw std::invalid_argument("eigenprojector_hat: index set out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric);
  // Eigen sorts ascending; rank r (1-based, from the top) is column p - r.
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int r : index_set) {
    Eigen::VectorXd col = v.col(p - r);
    m.selfadjointView<Eigen::Lower>().rankUpdate(col, 1.0);
  }
  m = m.selfadjointView<Eigen::Lower>();

  double scale = std::max(1.0, std::abs(lam[p - 1]));
  double gap = std::numeric_limits<double>::infinity();
  auto rank_value = [&](int r) { return lam[p - r]; };
  for (int r = 1; r < p; ++r) {
    bool in_a = index_set.contains(r);
    bool in_b = index_set.contains(r + 1);
    if (in_a != in_b)
      gap = std::min(gap, rank_value(r) - rank_value(r + 1));
  }
  EigenprojectorResult out;
  out.proj = Projector{std::move(m), index_set};
  out.boundary_gap = gap;
  out.tie_split = std::isfinite(gap) && gap < 1e-12 * scale;
  return out;
}

}  // namespace eigenbound
