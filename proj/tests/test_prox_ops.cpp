#include <doctest.h>

#include <algorithm>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "adprox/prox_ops.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace adprox;
using testing::vec;
using testing::l1_oracle;
using testing::nuclear_oracle;
using testing::nuclear_norm;
using testing::all_projections;
using testing::sample;

TEST_CASE("project_nonneg clamps componentwise") {
  CHECK(project_nonneg(vec({1, -2, 0})) == vec({1, 0, 0}));
  CHECK(project_nonneg(vec({0.5, 3})) == vec({0.5, 3}));
  CHECK(project_nonneg(vec({-1, -4})) == Vector::Zero(2));
}

TEST_CASE("affine projection") {
  Matrix A(1, 2);
  A << 1, 0;
  AffineProjector P(A, vec({1}));
  CHECK((P.apply(vec({0, 0})) - vec({1, 0})).norm() <= 1e-15);

  std::mt19937_64 rng(11);
  const Matrix B = testing::random_matrix(rng, 3, 7);
  const Vector b = testing::random_vector(rng, 3);
  AffineProjector Q(B, b);
  const Vector feasible = Q.apply(testing::random_vector(rng, 7));
  CHECK((Q.apply(feasible) - feasible).norm() <= 1e-12);
  for (int i = 0; i < 100; ++i) {
    const Vector z = testing::random_vector(rng, 7, 3.0);
    const Vector p = Q.apply(z);
    CHECK((Q.apply(p) - p).norm() <= 1e-10);
    CHECK(Q.residual(p) <= 1e-10);
  }
}

TEST_CASE("affine projector rejects a rank-deficient matrix") {
  Matrix A(2, 3);
  A << 1, 2, 3, 2, 4, 6;
  CHECK_THROWS_AS(AffineProjector(A, vec({1, 2})), NumericalError);
}

TEST_CASE("spectral box clamps eigenvalues") {
  const Matrix D = vec({0.05, 5, 20}).asDiagonal();
  const Matrix P = project_spectral_box(D, 0.1, 10);
  CHECK((P - Matrix(vec({0.1, 5, 10}).asDiagonal())).norm() <= 1e-12);

  std::mt19937_64 rng(5);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(testing::random_matrix(rng, 4, 4)).householderQ();
  const Matrix inside = Q * vec({0.2, 1, 3, 9}).asDiagonal() * Q.transpose();
  CHECK((project_spectral_box(inside, 0.1, 10) - inside).norm() <= 1e-10);

  for (int i = 0; i < 50; ++i) {
    Matrix Z = testing::random_matrix(rng, 5, 5, 6.0);
    Z = (0.5 * (Z + Z.transpose())).eval();
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(project_spectral_box(Z, 0.1, 10)).eigenvalues();
    CHECK(ev.minCoeff() >= 0.1 - 1e-10);
    CHECK(ev.maxCoeff() <= 10 + 1e-10);
  }

  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(project_spectral_box(asym, 0.1, 10), NumericalError);
}

TEST_CASE("nuclear ball projection") {
  const Matrix D = vec({3, 0}).asDiagonal();
  CHECK((project_nuclear_ball(D, 1) - Matrix(vec({1, 0}).asDiagonal())).norm() <= 1e-12);

  std::mt19937_64 rng(9);
  const Matrix small = testing::random_matrix(rng, 3, 3, 0.1);
  CHECK((project_nuclear_ball(small, 100) - small).norm() <= 1e-10);

  for (int i = 0; i < 50; ++i) {
    const Matrix Z = testing::random_matrix(rng, 5, 4, 2.0);
    CHECK(nuclear_norm(project_nuclear_ball(Z, 2.5)) <= 2.5 + 1e-8);
  }
}

TEST_CASE("l1 ball projection") {
  CHECK((project_l1_ball(vec({3, 0}), 1) - vec({1, 0})).norm() <= 1e-15);
  CHECK(project_l1_ball(vec({0.2, -0.3}), 1) == vec({0.2, -0.3}));
  CHECK(project_l1_ball(vec({0.5, 0.5}), 1) == vec({0.5, 0.5}));
}

TEST_CASE("projections match brute-force threshold scans") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> radius(0.5, 5.0);
  double worst_l1 = 0.0, worst_nuc = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vector v = testing::random_vector(rng, 10, 1.5);
    const double r = radius(rng);
    worst_l1 = std::max(worst_l1, (project_l1_ball(v, r) - l1_oracle(v, r)).norm());
    const Matrix Z = testing::random_matrix(rng, 4, 4, 1.5);
    const double rn = radius(rng);
    worst_nuc = std::max(worst_nuc, (project_nuclear_ball(Z, rn) - nuclear_oracle(Z, rn)).norm());
  }
  CHECK(worst_l1 <= 1e-8);
  CHECK(worst_nuc <= 1e-8);
}

TEST_CASE("dual entropy domain clamps only the lambda block") {
  CHECK(prox_dual_entropy_domain(vec({-1, 2, 3})) == vec({0, 2, 3}));
  CHECK(prox_dual_entropy_domain(vec({1, 2, -5})) == vec({1, 2, -5}));
}

TEST_CASE("prox of the zero function is the identity") {
  const Vector z = vec({1, -2, 3});
  CHECK(prox_zero(1.0, z) == z);
  CHECK(zero_regularizer()->prox(1.0, z) == zero_regularizer()->prox(100.0, z));
}

TEST_CASE("projections are idempotent, nonexpansive and satisfy the variational inequality") {
  std::mt19937_64 rng(17);
  for (const auto& p : all_projections()) {
    INFO(p.name);
    double idem = 0.0, expand = 0.0, vi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      const Vector z = sample(rng, p), w = sample(rng, p);
      const Vector pz = p.g->prox(1.0, z), pw = p.g->prox(1.0, w);
      idem = std::max(idem, (p.g->prox(1.0, pz) - pz).norm());
      expand = std::max(expand, (pz - pw).norm() - (z - w).norm() * (1 + 1e-12));
      if (i < 50) vi = std::max(vi, (z - pz).dot(pw - pz));  // pw is a feasible x
      CHECK(std::isfinite(p.g->value(pz)));
      CHECK(p.g->prox(1.0, z) == p.g->prox(100.0, z));
    }
    CHECK(idem <= 1e-10);
    CHECK(expand <= 0.0);
    CHECK(vi <= 1e-9);
  }
}

TEST_CASE("indicator values") {
  CHECK(nonneg_indicator(2)->value(vec({1, 0})) == 0.0);
  CHECK(nonneg_indicator(2)->value(vec({1, -1e-3})) == std::numeric_limits<double>::infinity());
}
