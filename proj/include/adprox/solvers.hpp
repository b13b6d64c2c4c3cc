#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adprox/core.hpp"
#include "adprox/counters.hpp"

namespace adprox {

// ---------------------------------------------------------------------------
// Stepsize rules
// ---------------------------------------------------------------------------

/// alpha_k = min{ sqrt(1 + theta_{k-1}) alpha_{k-1}, 1 / (sqrt(2) L_k) }, theta_0 = 0.
struct AdGD1 {};

/// alpha_k = min{ sqrt(2/3 + theta_{k-1}) alpha_{k-1}, alpha_{k-1} / sqrt([2 alpha_{k-1}^2 L_k^2 - 1]_+) },
/// theta_0 = 1/3. With a prox map this is the adaptive proximal gradient method.
/// `fixed_curvature` replaces the measured L_k by a given constant.
struct AdGD2 {
  std::optional<double> fixed_curvature;
};

struct FixedStep {
  double alpha = 1.0;
};

/// Largest alpha_k = s r^i alpha_{k-1} passing the sufficient-decrease test.
struct Armijo {
  double s = 1.2;
  double r = 0.5;
};

/// The earlier rule: min{ sqrt(1 + theta_{k-1}) alpha_{k-1}, 1 / (2 L_k) }, theta_0 = 0.
struct OldAdGD {};

/// alpha_k = 1 / (c L_k) with no growth bound, alpha_0 = 1. Diverges on the counterexample.
struct BadGD {
  double c = 1.0;
};

using StepsizeRule = std::variant<AdGD1, AdGD2, FixedStep, Armijo, OldAdGD, BadGD>;

/// Human readable name, e.g. "adgd2" or "armijo(1.2,0.5)".
std::string rule_name(const StepsizeRule& rule);
/// Throws ContractError on out-of-range parameters.
void validate_rule(const StepsizeRule& rule);
/// theta_0 used by the rule (0 or 1/3).
double initial_theta(const StepsizeRule& rule);

// ---------------------------------------------------------------------------
// State, configuration, trace
// ---------------------------------------------------------------------------

/// Two-iterate window, ready to take step k.
///
/// x_curr = x^k, x_prev = x^{k-1}; alpha = alpha_{k-1} and theta = theta_{k-1}
/// (for k = 0: the initial stepsize and theta_0). After every rule-driven step
/// theta == alpha / alpha_prev.
struct SolverState {
  std::int64_t k = 0;
  Vector x_prev;
  Vector x_curr;
  Vector grad_prev;
  Vector grad_curr;
  double alpha = 1.0;
  double alpha_prev = 1.0;
  double theta = 0.0;
  /// v^k in dg(x^k); proximal runs only.
  std::optional<Vector> subgrad_curr;
  /// L_k measured when producing the current state (NaN for the first step).
  double curvature = std::numeric_limits<double>::quiet_NaN();
  /// f(x^k) when a linesearch already computed it.
  std::optional<double> f_curr;
};

enum class Alpha0Policy { Given, Search };

struct RunConfig {
  std::int64_t max_iter = 1000;
  /// Stop once ||x^{k+1} - x^k|| / alpha_k <= grad_tol.
  double grad_tol = 1e-10;
  Alpha0Policy alpha0_policy = Alpha0Policy::Search;
  /// Given alpha_0, or the first trial of the search.
  double alpha0 = 1.0;
  double search_cap = 1e4;
  bool record_trace = true;
  /// Keep x^k, grad f(x^k), v^k and F(x^k) for the certificates.
  bool record_iterates = false;
  /// Optional early stop once F(x^{k+1}) <= stop_value.
  std::optional<double> stop_value;
  double divergence_threshold = 1e10;
  std::uint64_t seed = 0;
};

void validate_config(const RunConfig& config);

enum class RunStatus { Converged, MaxIter, Diverged };
std::string status_name(RunStatus s);

/// One row per step k: the move from x^k to x^{k+1}. F is F(x^{k+1}); counters are
/// cumulative after the step, including grad f(x^{k+1}).
struct TraceRow {
  std::int64_t k = 0;
  double alpha = 0.0;
  double theta = 0.0;
  double curvature = 0.0;  // L_k, NaN for k = 0
  double F = 0.0;
  double step_norm = 0.0;
  Counters counters;
};

struct InitialStepsize {
  double alpha0 = 1.0;
  double product = 0.0;  // alpha_0 L_1 at the returned alpha_0
  int trials = 0;
  bool bracketed = false;  // product in [1/sqrt(2), 2]
  bool capped = false;
  /// Last trial point prox(x0 - alpha0 grad f(x0)) and its gradient.
  Vector x1;
  Vector grad1;
};

struct Trace {
  std::string rule;
  StepsizeRule rule_spec;
  bool proximal = false;
  RunStatus status = RunStatus::MaxIter;
  double alpha0 = 0.0;
  double theta0 = 0.0;
  double F0 = 0.0;
  std::optional<InitialStepsize> search;
  std::vector<TraceRow> rows;
  Counters counters;
  Vector x_final;
  /// Stepsize of the last step taken (alpha_0 when no step was taken).
  double alpha_final = 0.0;
  std::int64_t iterations = 0;

  // Filled when RunConfig::record_iterates is set; index k refers to x^k.
  std::vector<Vector> iterates;      // x^0 .. x^{K+1}
  std::vector<Vector> gradients;     // grad f(x^0) .. grad f(x^{K+1}) (may be one shorter after divergence)
  std::vector<Vector> subgradients;  // v^0 = 0 .. v^{K+1}; proximal runs only
  std::vector<double> values;        // F(x^0) .. F(x^{K+1})
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// L_k = ||grad_curr - grad_prev|| / ||x_curr - x_prev||; nullopt when the displacement is zero.
std::optional<double> curvature_estimate(const Vector& x_curr, const Vector& x_prev, const Vector& grad_curr,
                                         const Vector& grad_prev);

double stepsize_adgd1(const SolverState& state, double L);
double stepsize_adgd2(const SolverState& state, double L);
double stepsize_old_adgd(const SolverState& state, double L);
double stepsize_bad_gd(double L, double c);

/// v^{k+1} = (x^k - x^{k+1}) / alpha_k - grad f(x^k).
Vector recover_subgradient(const Vector& x_next, const Vector& x_curr, const Vector& grad_curr, double alpha);

/// x^{k+1} = x^k - alpha_k grad f(x^k); one new gradient. Not for Armijo.
SolverState gd_step(const SolverState& state, const CompositeProblem& problem, const StepsizeRule& rule,
                    Counters* counters = nullptr);

/// x^{k+1} = prox_{alpha_k g}(x^k - alpha_k grad f(x^k)); one new gradient, subgradient recovered.
SolverState proxgd_step(const SolverState& state, const CompositeProblem& problem, const StepsizeRule& rule,
                        Counters* counters = nullptr);

struct ArmijoResult {
  double alpha = 0.0;
  Vector x_next;
  double f_next = 0.0;
  int ls_evals = 0;  // trials; each costs one f and one prox
};

/// Tries alpha = s r^i alpha_{k-1}, i = 0, 1, ... Requires state.f_curr.
/// Throws NumericalError ("linesearch stalled") after 200 reductions.
ArmijoResult armijo_search(const SolverState& state, const CompositeProblem& problem, double s, double r,
                           Counters* counters = nullptr);

/// Geometric search (factor 10, then log-bisection) for alpha_0 L_1 in [1/sqrt(2), 2].
/// Returns the cap when the product stays small up to it. Throws ContractError when grad f(x0) = 0.
InitialStepsize initial_stepsize_search(const CompositeProblem& problem, const Vector& x0, double cap,
                                        double start = 1.0, Counters* counters = nullptr,
                                        const Vector* grad0 = nullptr);

/// Full loop. Throws NumericalError on NaN/Inf for every rule except BadGD.
Trace run_solver(const CompositeProblem& problem, const Vector& x0, const StepsizeRule& rule,
                 const RunConfig& config);

}  // namespace adprox
