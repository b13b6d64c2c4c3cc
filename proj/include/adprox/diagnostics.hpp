#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adprox/core.hpp"
#include "adprox/solvers.hpp"

namespace adprox {

/// Outcome of one inequality evaluated along a trace.
///
/// slack = right side - left side at each index; the check passes when every slack
/// is >= -tolerance at that index. worst_slack / worst_index locate the minimum.
struct CheckResult {
  std::string name;
  double tolerance = 0.0;  // tolerance at the worst index
  double worst_slack = 0.0;
  std::int64_t worst_index = -1;
  std::int64_t evaluated = 0;
  bool passed = true;
  std::string note;
};

struct CertificateReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  void append(const CertificateReport& other);
  /// One line per check: name, pass/fail, evaluated, worst slack, index, tolerance, note.
  std::string to_text() const;
};

/// Iterations m >= 1 with theta_m < 1/3 and alpha_m < 1/L_ref.
struct BreakpointRecord {
  std::vector<std::int64_t> indices;
  double L_ref = 0.0;
};

/// alpha_k, L_k and theta_k recomputed from the trace: from the stored iterates
/// and gradients when present, otherwise from the recorded rows.
struct StepsizeSeries {
  std::vector<double> alpha;      // alpha_0 .. alpha_K
  std::vector<double> curvature;  // L_0 = NaN, L_1 .. L_K
  std::vector<double> theta;      // theta_0, theta_1 .. theta_K
  bool searched = false;          // alpha_0 from the initial stepsize search
  bool bracketed = false;         // ... and alpha_0 L_1 in [1/sqrt(2), 2]
};

StepsizeSeries stepsize_series(const Trace& trace);

/// max_k L_k over the trajectory.
double reference_curvature(const StepsizeSeries& s);

/// Larger curvature estimate from all iterate pairs within distance 3 plus central
/// differences along the step directions. Needs recorded iterates.
double sweep_curvature(const Trace& trace, const SmoothFunction& f);

// --- energy and rate certificates (need x*, F*) ----------------------------

/// ||x^{k+1}-x*||^2 + ||x^{k+1}-x^k||^2 + alpha_k(2+c theta_k)(f^k - f*)
///   <= ||x^k-x*||^2 + ||x^k-x^{k-1}||^2 + c alpha_k theta_k (f^{k-1} - f*),
/// c = 3 for AdGD2 and 2 for AdGD1. Other rules are reported as not applicable.
CertificateReport check_energy_gd(const Trace& trace, const std::optional<ReferenceSolution>& ref);

/// Proximal version with alpha_k^2 ||grad f(x^k) + v^k||^2 in place of the step term.
CertificateReport check_energy_prox(const Trace& trace, const std::optional<ReferenceSolution>& ref);

/// min_{i<=k} (F(x^i) - F*) <= R^2 / (2 sum_{i=1}^k alpha_i) for AdGD2 runs.
CertificateReport check_rate(const Trace& trace, const std::optional<ReferenceSolution>& ref);

// --- monotonicity facts (need convex f) ------------------------------------

/// <grad f(x^k) + v^k, grad f(x^{k-1}) + v^k> <= ||grad f(x^{k-1}) + v^k||^2 (v = 0 without prox).
CertificateReport check_gradient_correlation(const Trace& trace);

/// ||grad f(x^k) + v^{k+1}|| <= ||grad f(x^k) + v^k||; proximal runs only.
CertificateReport check_subgradient_decrease(const Trace& trace);

// --- stepsize structure ------------------------------------------------------

/// The two bounds of the stepsize rule that produced the trace.
CertificateReport check_stepsize_bounds(const Trace& trace);

BreakpointRecord detect_breakpoints(const StepsizeSeries& s, double L_ref);

/// Every alpha_k < 1/(sqrt(2) L_ref) sits right after a breakpoint, or one step later
/// with alpha_{k-1} < alpha_k.
CheckResult check_breakpoint_dichotomy(const StepsizeSeries& s, double L_ref);

/// Second-bound facts, the theta_k < 1/3 implications, the floor 1/(sqrt(3) L_ref),
/// the breakpoint window sum and sum_i alpha_i >= k/(sqrt(2) L_ref). AdGD2 only.
/// A violation is re-evaluated with sweep_curvature() when `f` is given.
CertificateReport check_stepsize_sum(const Trace& trace, double L_ref, const SmoothFunction* f = nullptr);

// --- divergence --------------------------------------------------------------

/// Four checks over all finite recorded pairs k:
///   divergence_signs         sign(x^{2k}) = sign(x^{2k+1}) != sign(x^{2k+2})
///   divergence_outer_growth  |x^{2k+2}| > 2|x^{2k+1}|
///   divergence_inner_ratio   2|x^{2k+1}| > |x^{2k}|
///   diverged_status          the run stopped as diverged
/// For c = 1 the inner ratio does not hold: |x^{2k+1}|/|x^{2k}| tends to 1/2 from below.
CertificateReport check_divergence_pattern(const Trace& trace);

/// Same pattern for BadGD on the counterexample run in extended precision, where
/// the iterates can be followed far beyond the double range.
struct ExtendedDivergence {
  std::int64_t pairs_checked = 0;
  bool pattern_holds = false;  // all three parts
  bool signs_hold = false;
  bool outer_growth_holds = false;
  bool inner_ratio_holds = false;
  std::int64_t first_break = -1;
  std::int64_t first_inner_break = -1;
  std::int64_t inner_breaks = 0;
  std::vector<double> inner_ratios;  // |x^{2k+1}| / |x^{2k}|
  std::vector<double> leading_iterates;  // iterates that still fit a double
};
ExtendedDivergence replay_divergence_extended(double x0, double c, std::int64_t pairs);

/// Runs every certificate that applies to the rule and problem.
CertificateReport run_certificates(const Trace& trace, const CompositeProblem& problem,
                                   const std::optional<ReferenceSolution>& ref, bool convex);

}  // namespace adprox
