#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adprox/counters.hpp"

namespace adprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Violated precondition (dimension mismatch, parameter out of range, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values, failed factorizations and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::int64_t iteration = -1)
      : std::runtime_error(iteration >= 0 ? what + " (iteration " + std::to_string(iteration) + ")"
                                          : what),
        iteration_(iteration) {}
  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

/// Convex differentiable part f. Implementations are immutable and thread safe.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;

  virtual Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// Global Lipschitz constant of the gradient when one is known in closed form.
  virtual std::optional<double> lipschitz() const { return std::nullopt; }
};

/// Prox-friendly part g. `value` may return +inf; `prox` always returns a point of dom g.
class ProxFriendly {
 public:
  virtual ~ProxFriendly() = default;

  virtual double value(const Vector& x) const = 0;
  virtual Vector prox(double alpha, const Vector& y) const = 0;

  /// Which counter a prox call increments besides prox_evals.
  virtual ProxKind kind() const = 0;
  virtual std::string describe() const = 0;

  /// True for g = 0. Lets the solver take the plain gradient path.
  virtual bool is_zero() const { return false; }
};

/// How a flattened point maps back to matrices. Row-major blocks, stored in order.
struct MatrixLayout {
  struct Block {
    Index rows = 0;
    Index cols = 0;
  };
  std::vector<Block> blocks;

  Index size() const {
    Index n = 0;
    for (const auto& b : blocks) n += b.rows * b.cols;
    return n;
  }
};

/// F = f + g together with the essential-operation cost weights used for comparisons.
struct CompositeProblem {
  std::shared_ptr<const SmoothFunction> f;
  std::shared_ptr<const ProxFriendly> g;
  CostModel cost;
  std::string label;
  MatrixLayout layout;

  Index dimension() const { return f->dimension(); }
};

/// High-accuracy solution used by certificates that need x* and F*.
struct ReferenceSolution {
  Vector x_star;
  double F_star = 0.0;
  /// Error budget for F_star and for the distance of x_star to the solution set.
  double tolerance = 0.0;
  std::string provenance;
  bool low_confidence = false;
};

/// Zero regularizer; turns the proximal method into plain gradient descent.
std::shared_ptr<const ProxFriendly> zero_regularizer();

/// F(x) = f(x) + g(x); +inf outside dom g.
double evaluate_composite(const CompositeProblem& p, const Vector& x);

/// Central differences with componentwise step h_i = h * (1 + |x_i|).
Vector finite_difference_gradient(const SmoothFunction& f, const Vector& x, double h = 1e-6);

/// Same, but with one absolute step for every coordinate.
Vector finite_difference_gradient_abs(const SmoothFunction& f, const Vector& x, double h);

}  // namespace adprox
