#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "adprox/core.hpp"
#include "adprox/problems.hpp"
#include "adprox/prox_ops.hpp"

namespace testing {

using adprox::Index;
using adprox::Vector;
using adprox::Matrix;

// f(x) = L/2 ||x - c||^2
class ScaledHalfNorm final : public adprox::SmoothFunction {
 public:
  ScaledHalfNorm(Vector c, double L = 1.0) : c_(std::move(c)), L_(L) {}
  Index dimension() const override { return c_.size(); }
  double value(const Vector& x) const override { return 0.5 * L_ * (x - c_).squaredNorm(); }
  Vector gradient(const Vector& x) const override { return L_ * (x - c_); }
  std::optional<double> lipschitz() const override { return L_; }

 private:
  Vector c_;
  double L_;
};

// f(x) = <a, x>, zero curvature everywhere
class Linear final : public adprox::SmoothFunction {
 public:
  explicit Linear(Vector a) : a_(std::move(a)) {}
  Index dimension() const override { return a_.size(); }
  double value(const Vector& x) const override { return a_.dot(x); }
  Vector gradient(const Vector&) const override { return a_; }

 private:
  Vector a_;
};

inline adprox::CompositeProblem composite(std::shared_ptr<const adprox::SmoothFunction> f,
                                          std::shared_ptr<const adprox::ProxFriendly> g = adprox::zero_regularizer()) {
  adprox::CompositeProblem p;
  p.f = std::move(f);
  p.g = std::move(g);
  p.label = "test";
  return p;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Vector random_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Index r, Index c, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix M(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) M(i, j) = normal(rng);
  return M;
}

}  // namespace testing
