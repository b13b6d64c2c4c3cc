#include "adprox/prox_ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace adprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack used by indicator values; iterates produced by a projection are
// feasible only up to rounding.
constexpr double kFeasibilitySlack = 1e-9;

Matrix symmetrized(const Matrix& Z) {
  if (Z.rows() != Z.cols()) throw ContractError("spectral projection needs a square matrix");
  const double scale = 1.0 + Z.cwiseAbs().maxCoeff();
  const double asym = (Z - Z.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale)
    throw NumericalError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  return 0.5 * (Z + Z.transpose());
}

class NonnegIndicator final : public ProxFriendly {
 public:
  explicit NonnegIndicator(Index d) : d_(d) {}
  double value(const Vector& x) const override {
    check(x);
    return (x.array() >= 0.0).all() ? 0.0 : kInf;
  }
  Vector prox(double, const Vector& y) const override {
    check(y);
    return project_nonneg(y);
  }
  ProxKind kind() const override { return ProxKind::Projection; }
  std::string describe() const override { return "indicator{x >= 0}"; }

 private:
  void check(const Vector& x) const {
    if (x.size() != d_) throw ContractError("nonneg indicator: dimension mismatch");
  }
  Index d_;
};

class AffineIndicator final : public ProxFriendly {
 public:
  explicit AffineIndicator(std::shared_ptr<const AffineProjector> p) : p_(std::move(p)) {}
  double value(const Vector& x) const override {
    return p_->residual(x) <= 1e-8 * (1.0 + p_->b().norm()) ? 0.0 : kInf;
  }
  Vector prox(double, const Vector& y) const override { return p_->apply(y); }
  ProxKind kind() const override { return ProxKind::Projection; }
  std::string describe() const override { return "indicator{Ax = b}"; }

 private:
  std::shared_ptr<const AffineProjector> p_;
};

class SpectralBoxIndicator final : public ProxFriendly {
 public:
  SpectralBoxIndicator(Index n, double l, double u) : n_(n), l_(l), u_(u) {
    if (!(0.0 < l && l < u)) throw ContractError("spectral box needs 0 < l < u");
  }
  double value(const Vector& x) const override {
    const Matrix X = unflatten(x, n_, n_);
    const double scale = 1.0 + X.cwiseAbs().maxCoeff();
    if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) return kInf;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (X + X.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const double slack = kFeasibilitySlack * u_;
    const auto& ev = es.eigenvalues();
    return (ev.minCoeff() >= l_ - slack && ev.maxCoeff() <= u_ + slack) ? 0.0 : kInf;
  }
  Vector prox(double, const Vector& y) const override {
    return flatten(project_spectral_box(unflatten(y, n_, n_), l_, u_));
  }
  ProxKind kind() const override { return ProxKind::Eigendecomposition; }
  std::string describe() const override {
    return "indicator{" + std::to_string(l_) + " I <= X <= " + std::to_string(u_) + " I}";
  }

 private:
  Index n_;
  double l_, u_;
};

class NuclearBallIndicator final : public ProxFriendly {
 public:
  NuclearBallIndicator(Index rows, Index cols, double r) : rows_(rows), cols_(cols), r_(r) {
    if (!(r > 0.0)) throw ContractError("nuclear ball radius must be positive");
  }
  double value(const Vector& x) const override {
    Eigen::BDCSVD<Matrix> svd(unflatten(x, rows_, cols_));
    return svd.singularValues().sum() <= r_ * (1.0 + kFeasibilitySlack) ? 0.0 : kInf;
  }
  Vector prox(double, const Vector& y) const override {
    return flatten(project_nuclear_ball(unflatten(y, rows_, cols_), r_));
  }
  ProxKind kind() const override { return ProxKind::Svd; }
  std::string describe() const override { return "indicator{||X||_* <= " + std::to_string(r_) + "}"; }

 private:
  Index rows_, cols_;
  double r_;
};

class DualEntropyDomain final : public ProxFriendly {
 public:
  explicit DualEntropyDomain(Index m) : m_(m) {}
  double value(const Vector& x) const override {
    if (x.size() != m_ + 1) throw ContractError("dual entropy domain: dimension mismatch");
    return (x.head(m_).array() >= 0.0).all() ? 0.0 : kInf;
  }
  Vector prox(double, const Vector& y) const override {
    if (y.size() != m_ + 1) throw ContractError("dual entropy domain: dimension mismatch");
    return prox_dual_entropy_domain(y);
  }
  ProxKind kind() const override { return ProxKind::Projection; }
  std::string describe() const override { return "indicator{lambda >= 0}"; }

 private:
  Index m_;
};

}  // namespace

Vector project_nonneg(const Vector& z) { return z.cwiseMax(0.0); }

Vector project_l1_ball(const Vector& v, double r) {
  if (!(r > 0.0)) throw ContractError("l1-ball radius must be positive");
  if (v.lpNorm<1>() <= r) return v;

  std::vector<double> sorted(v.size());
  for (Index i = 0; i < v.size(); ++i) sorted[i] = std::abs(v[i]);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // tau = (sum of the rho largest magnitudes - r) / rho, rho the last index with a positive gap
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumsum += sorted[j];
    const double t = (cumsum - r) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) tau = t;
  }

  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - tau, 0.0);
    out[i] = std::copysign(mag, v[i]);
  }
  return out;
}

Matrix project_spectral_box(const Matrix& Z, double l, double u) {
  if (!(0.0 < l && l < u)) throw ContractError("spectral box needs 0 < l < u");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(Z));
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Vector clamped = es.eigenvalues().cwiseMax(l).cwiseMin(u);
  const Matrix& Q = es.eigenvectors();
  Matrix out = Q * clamped.asDiagonal() * Q.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix project_nuclear_ball(const Matrix& Z, double r) {
  if (!(r > 0.0)) throw ContractError("nuclear ball radius must be positive");
  Eigen::BDCSVD<Matrix> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD failed");
  const Vector& sigma = svd.singularValues();
  if (sigma.sum() <= r) return Z;
  const Vector projected = project_l1_ball(sigma, r);
  return svd.matrixU() * projected.asDiagonal() * svd.matrixV().transpose();
}

Vector prox_dual_entropy_domain(const Vector& z) {
  if (z.size() < 1) throw ContractError("dual entropy point needs at least the mu coordinate");
  Vector out = z;
  const Index m = z.size() - 1;
  out.head(m) = z.head(m).cwiseMax(0.0);
  return out;
}

AffineProjector::AffineProjector(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw ContractError("affine set: A and b sizes differ");
  if (A_.rows() > A_.cols()) throw ContractError("affine set: need rows <= cols");
  factor_.compute(A_ * A_.transpose());
  if (factor_.info() != Eigen::Success || !(factor_.rcond() > 1e-12))
    throw NumericalError("A A^T is rank deficient");
}

Vector AffineProjector::apply(const Vector& z) const { return project_affine(z, A_, b_, factor_); }

Vector project_affine(const Vector& z, const Matrix& A, const Vector& b, const Eigen::LLT<Matrix>& factor) {
  if (z.size() != A.cols()) throw ContractError("project_affine: dimension mismatch");
  const Vector residual = A * z - b;
  return z - A.transpose() * factor.solve(residual);
}

std::shared_ptr<const ProxFriendly> nonneg_indicator(Index dimension) {
  return std::make_shared<const NonnegIndicator>(dimension);
}
std::shared_ptr<const ProxFriendly> affine_indicator(std::shared_ptr<const AffineProjector> projector) {
  return std::make_shared<const AffineIndicator>(std::move(projector));
}
std::shared_ptr<const ProxFriendly> spectral_box_indicator(Index n, double l, double u) {
  return std::make_shared<const SpectralBoxIndicator>(n, l, u);
}
std::shared_ptr<const ProxFriendly> nuclear_ball_indicator(Index rows, Index cols, double r) {
  return std::make_shared<const NuclearBallIndicator>(rows, cols, r);
}
std::shared_ptr<const ProxFriendly> dual_entropy_domain_indicator(Index m) {
  return std::make_shared<const DualEntropyDomain>(m);
}

Matrix unflatten(const Vector& x, Index rows, Index cols, Index offset) {
  if (offset + rows * cols > x.size()) throw ContractError("unflatten: point too short");
  return Eigen::Map<const RowMajorMatrix>(x.data() + offset, rows, cols);
}

Vector flatten(const Matrix& M) {
  const RowMajorMatrix R = M;
  return Eigen::Map<const Vector>(R.data(), R.size());
}

}  // namespace adprox
