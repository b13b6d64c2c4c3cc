#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "adprox/core.hpp"
#include "adprox/problems.hpp"
#include "adprox/prox_ops.hpp"
#include "support.hpp"

using namespace adprox;
using testing::composite;
using testing::vec;

TEST_CASE("evaluate_composite sums f and g") {
  auto half = std::make_shared<testing::ScaledHalfNorm>(Vector::Zero(2));
  CHECK(evaluate_composite(composite(half), vec({0, 0})) == 0.0);

  auto half1 = std::make_shared<testing::ScaledHalfNorm>(Vector::Zero(1));
  const double v = evaluate_composite(composite(half1, nonneg_indicator(1)), vec({-1}));
  CHECK(v == std::numeric_limits<double>::infinity());

  const auto quartic = make_quartic();
  CHECK(evaluate_composite(quartic.composite, vec({2})) == 16.0);
}

TEST_CASE("evaluate_composite rejects a dimension mismatch") {
  auto half = std::make_shared<testing::ScaledHalfNorm>(Vector::Zero(2));
  CHECK_THROWS_AS(evaluate_composite(composite(half), vec({1, 2, 3})), ContractError);
}

TEST_CASE("finite differences on scalar functions") {
  testing::ScaledHalfNorm half(Vector::Zero(1));
  CHECK(std::abs(finite_difference_gradient_abs(half, vec({3}), 1e-5)[0] - 3.0) <= 1e-8);

  const auto quartic = make_quartic();
  CHECK(std::abs(finite_difference_gradient_abs(*quartic.composite.f, vec({1}), 1e-4)[0] - 4.0) <= 1e-6);

  // f'(x) = a x / (1 + |x|) with a = 2 on the outer branch
  const auto ce = make_counterexample();
  const double fd = finite_difference_gradient_abs(*ce.composite.f, vec({3}), 1e-6)[0];
  CHECK(std::abs(fd - 2.0 * 3.0 / 4.0) <= 1e-6);
}

TEST_CASE("finite differences report non-finite values") {
  class Blowup final : public SmoothFunction {
   public:
    Index dimension() const override { return 1; }
    double value(const Vector& x) const override { return x[0] > 0 ? std::numeric_limits<double>::infinity() : 0.0; }
    Vector gradient(const Vector& x) const override { return Vector::Zero(x.size()); }
  } f;
  CHECK_THROWS_AS(finite_difference_gradient(f, vec({0.0})), NumericalError);
  CHECK_THROWS_AS(finite_difference_gradient(f, vec({0.0}), -1.0), ContractError);
}

namespace {

// Small instances of every shipped smooth function with a sampler for points in dom f.
struct Sampled {
  ProblemInstance inst;
  double spread;
};

std::vector<Sampled> shipped_functions() {
  return {
      {make_quadratic(3, 8, 50), 3.0},
      {make_least_squares(3, 12, 6), 1.0},
      {make_logistic(3, 5, 20), 1.0},
      {make_quartic(), 1.0},
      {make_counterexample(), 5.0},
      {make_mle(3, 5, 0.1, 10, 8), 0.3},
      {make_lrmc(3, 6, 2), 1.0},
      {make_min_curve(3, 3, 10), 1.0},
      {make_nmf(3, 5, 2), 1.0},
      {make_dual_entropy(3, 6, 4), 0.3},
  };
}

}  // namespace

TEST_CASE("gradients of shipped functions agree with finite differences") {
  std::mt19937_64 rng(2024);
  for (const auto& s : shipped_functions()) {
    const SmoothFunction& f = *s.inst.composite.f;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      Vector x = s.inst.x0 + testing::random_vector(rng, f.dimension(), s.spread);
      if (s.inst.kind == ProblemKind::Mle) {
        // stay positive definite: symmetric perturbation of the starting matrix
        const Index n = static_cast<Index>(std::lround(std::sqrt(double(f.dimension()))));
        Matrix X = unflatten(x, n, n);
        X = (0.5 * (X + X.transpose())).eval();
        x = flatten(X);
      }
      const Vector g = f.gradient(x);
      const Vector fd = finite_difference_gradient(f, x);
      worst = std::max(worst, (fd - g).norm() / (1.0 + g.norm()));
    }
    INFO(problem_name(s.inst.kind));
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("cocoercivity of quadratic and logistic gradients") {
  std::mt19937_64 rng(7);
  for (const auto& inst : {make_quadratic(1, 10, 30), make_logistic(1, 6, 30)}) {
    const SmoothFunction& f = *inst.composite.f;
    const double L = *f.lipschitz();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector x = testing::random_vector(rng, f.dimension(), 2.0);
      const Vector y = testing::random_vector(rng, f.dimension(), 2.0);
      const Vector dg = f.gradient(y) - f.gradient(x);
      worst = std::min(worst, dg.dot(y - x) - dg.squaredNorm() / L);
    }
    INFO(problem_name(inst.kind));
    CHECK(worst >= -1e-10);
  }
}

TEST_CASE("evaluation is deterministic") {
  const auto inst = make_dual_entropy(5, 20, 10);
  std::mt19937_64 rng(1);
  const Vector x = testing::random_vector(rng, inst.composite.dimension(), 0.2).cwiseAbs();
  const double a = evaluate_composite(inst.composite, x);
  const double b = evaluate_composite(inst.composite, x);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}
