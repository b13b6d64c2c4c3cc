#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "adprox/core.hpp"

namespace adprox {

enum class ProblemKind {
  Quadratic,
  LeastSquares,
  Logistic,
  Quartic,
  Counterexample,
  Mle,
  Lrmc,
  MinCurve,
  Nmf,
  DualEntropy,
};

std::string problem_name(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& name);  // throws ContractError

enum class Scale { Desk, Paper };

/// Ordered so that serialization and cache keys are deterministic.
using ParameterMap = std::map<std::string, double>;

/// A generated problem together with everything needed to regenerate it.
struct ProblemInstance {
  ProblemKind kind = ProblemKind::Quadratic;
  CompositeProblem composite;
  std::uint64_t seed = 0;
  ParameterMap parameters;
  Vector x0;
  /// Exact minimizer when one is available in closed form (test oracle, not used by solvers).
  std::optional<Vector> closed_form_solution;
  std::optional<ReferenceSolution> reference;
  bool convex = true;
  bool globally_smooth = true;
};

// --- counterexample -------------------------------------------------------

inline constexpr double kCounterexampleA = 2.0;
/// b = 2 log 2 - 3/2 makes both branches meet in value and slope at |x| = 1.
double counterexample_b();

/// f(x) = x^2/2 on [-1, 1], a(|x| - log(1 + |x|)) + b outside. Returns (f(x), f'(x)).
std::pair<double, double> counterexample_f(double x);

ProblemInstance make_counterexample(double x0 = 12.0);

// --- unit problems ---------------------------------------------------------

/// f(x) = x^T Q x / 2 - c^T x with spectrum log-spaced in [1, condition_number].
ProblemInstance make_quadratic(std::uint64_t seed, Index n, double condition_number);
/// f(x) = ||A x - b||^2 / 2 with A of size n x d.
ProblemInstance make_least_squares(std::uint64_t seed, Index n, Index d);
/// Averaged logistic loss over `samples` points (0 picks 4 d) with random labels.
ProblemInstance make_logistic(std::uint64_t seed, Index d, Index samples = 0);
/// f(x) = x^4 in one dimension; not globally smooth.
ProblemInstance make_quartic();

// --- experiment problems ---------------------------------------------------

/// min -log det X + tr(XY) s.t. l I <= X <= u I.
ProblemInstance make_mle(std::uint64_t seed, Index n, double l, double u, Index M);
/// min ||P_Omega(X - A)||_F^2 / 2 s.t. ||X||_* <= r.
ProblemInstance make_lrmc(std::uint64_t seed, Index n, Index r, double fraction = 0.2);
/// min sqrt(1 + x_1^2) + sum sqrt(1 + (x_{i+1} - x_i)^2) s.t. A x = b, A of size m x n.
ProblemInstance make_min_curve(std::uint64_t seed, Index m, Index n);
/// min ||U V^T - A||_F^2 / 2 over U, V >= 0 (nonconvex).
ProblemInstance make_nmf(std::uint64_t seed, Index n, Index r);
/// Dual of entropy maximization over (lambda in R^m_+, mu).
ProblemInstance make_dual_entropy(std::uint64_t seed, Index m, Index n);

/// Default generator parameters for the experiment problems at the given scale.
ParameterMap default_parameters(ProblemKind kind, Scale scale);

/// Dispatches to the generator; parameters missing from `params` take desk defaults.
/// Unknown parameter names throw ContractError.
ProblemInstance make_problem(ProblemKind kind, const ParameterMap& params, std::uint64_t seed);

}  // namespace adprox
