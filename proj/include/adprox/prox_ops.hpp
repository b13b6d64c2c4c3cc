#pragma once

#include <memory>

#include <Eigen/Cholesky>

#include "adprox/core.hpp"

namespace adprox {

// ---------------------------------------------------------------------------
// Plain operators
// ---------------------------------------------------------------------------

/// Componentwise max(z_i, 0).
Vector project_nonneg(const Vector& z);

/// Euclidean projection onto {x : ||x||_1 <= r}, sort-and-threshold.
Vector project_l1_ball(const Vector& v, double r);

/// Clamps the eigenvalues of the symmetrized input to [l, u].
/// Throws NumericalError when the input is asymmetric beyond 1e-8 (relative).
Matrix project_spectral_box(const Matrix& Z, double l, double u);

/// Projects the singular values onto the l1-ball of radius r (economy SVD).
Matrix project_nuclear_ball(const Matrix& Z, double r);

/// z = (lambda_1..lambda_m, mu): clamps the lambda block at zero, leaves mu alone.
Vector prox_dual_entropy_domain(const Vector& z);

/// prox of g = 0.
inline Vector prox_zero(double /*alpha*/, const Vector& z) { return z; }

/// Cached factorization of A A^T for repeated projections onto {x : A x = b}.
class AffineProjector {
 public:
  /// Requires A of full row rank with rows <= cols; throws NumericalError otherwise.
  AffineProjector(Matrix A, Vector b);

  Vector apply(const Vector& z) const;
  double residual(const Vector& x) const { return (A_ * x - b_).norm(); }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Eigen::LLT<Matrix>& factor() const { return factor_; }

 private:
  Matrix A_;
  Vector b_;
  Eigen::LLT<Matrix> factor_;
};

/// P_C z = z - A^T (A A^T)^{-1} (A z - b) with a cached factorization of A A^T.
Vector project_affine(const Vector& z, const Matrix& A, const Vector& b, const Eigen::LLT<Matrix>& factor);

// ---------------------------------------------------------------------------
// Regularizers (indicator functions) for composite problems. Points are
// flattened row-major matrices where relevant.
// ---------------------------------------------------------------------------

std::shared_ptr<const ProxFriendly> nonneg_indicator(Index dimension);
std::shared_ptr<const ProxFriendly> affine_indicator(std::shared_ptr<const AffineProjector> projector);
std::shared_ptr<const ProxFriendly> spectral_box_indicator(Index n, double l, double u);
std::shared_ptr<const ProxFriendly> nuclear_ball_indicator(Index rows, Index cols, double r);
std::shared_ptr<const ProxFriendly> dual_entropy_domain_indicator(Index m);

/// Row-major view helpers for flattened matrices.
Matrix unflatten(const Vector& x, Index rows, Index cols, Index offset = 0);
Vector flatten(const Matrix& M);

}  // namespace adprox
