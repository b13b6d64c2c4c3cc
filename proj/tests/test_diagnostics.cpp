#include <doctest.h>

#include <cmath>

#include "adprox/diagnostics.hpp"
#include "adprox/problems.hpp"
#include "adprox/prox_ops.hpp"
#include "support.hpp"

using namespace adprox;
using testing::composite;
using testing::vec;

namespace {

RunConfig recorded(std::int64_t max_iter) {
  RunConfig rc;
  rc.max_iter = max_iter;
  rc.record_iterates = true;
  return rc;
}

ReferenceSolution exact(const ProblemInstance& inst) {
  ReferenceSolution r;
  r.x_star = *inst.closed_form_solution;
  r.F_star = evaluate_composite(inst.composite, r.x_star);
  r.tolerance = 1e-12 * (1 + std::abs(r.F_star));
  return r;
}

ReferenceSolution long_run(const CompositeProblem& p, const Vector& x0) {
  RunConfig rc;
  rc.max_iter = 200000;
  rc.grad_tol = 1e-13;
  const Trace t = run_solver(p, x0, AdGD2{}, rc);
  ReferenceSolution r;
  r.x_star = t.x_final;
  r.F_star = evaluate_composite(p, t.x_final);
  r.tolerance = 1e-11 * (1 + std::abs(r.F_star));
  return r;
}

// Replaces step k by x^{k+1} = x^k - factor * alpha_k grad f(x^k) and cuts the trace there.
Trace scale_actual_step(const Trace& t, const CompositeProblem& p, std::size_t k, double factor) {
  Trace bad = t;
  bad.iterates[k + 1] = bad.iterates[k] - factor * bad.rows[k].alpha * bad.gradients[k];
  bad.gradients[k + 1] = p.f->gradient(bad.iterates[k + 1]);
  bad.values[k + 1] = evaluate_composite(p, bad.iterates[k + 1]);
  bad.rows.resize(k + 1);
  bad.iterates.resize(k + 2);
  bad.gradients.resize(k + 2);
  bad.values.resize(k + 2);
  bad.rows[k].F = bad.values[k + 1];
  return bad;
}

}  // namespace

TEST_CASE("energy certificate on a quadratic") {
  const auto inst = make_quadratic(1, 20, 100);
  const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(300));
  const auto rep = check_energy_gd(t, exact(inst));
  CHECK(rep.passed());
  CHECK(rep.checks[0].evaluated > 100);
  CHECK_THROWS_WITH_AS(check_energy_gd(t, std::nullopt), "reference required", ContractError);

  const Trace t1 = run_solver(inst.composite, inst.x0, AdGD1{}, recorded(300));
  CHECK(check_energy_gd(t1, exact(inst)).passed());
  const Trace fx = run_solver(inst.composite, inst.x0, FixedStep{0.005}, recorded(20));
  CHECK(check_energy_gd(fx, exact(inst)).checks[0].evaluated == 0);
}

TEST_CASE("energy certificate at a stationary trace has zero slack") {
  const auto inst = make_quadratic(2, 5, 10);
  const ReferenceSolution ref = exact(inst);
  Trace t;
  t.rule = "adgd2";
  t.rule_spec = AdGD2{};
  t.theta0 = 1.0 / 3.0;
  for (int k = 0; k < 6; ++k) {
    TraceRow r;
    r.k = k;
    r.alpha = 0.1;
    r.theta = 1.0;
    t.rows.push_back(r);
  }
  for (int k = 0; k < 7; ++k) {
    t.iterates.push_back(ref.x_star);
    t.gradients.push_back(Vector::Zero(5));
    t.values.push_back(ref.F_star);
  }
  const auto rep = check_energy_gd(t, ref);
  CHECK(rep.passed());
  CHECK(rep.checks[0].worst_slack == 0.0);
}

TEST_CASE("injected stepsize faults are reported at the faulty step") {
  const auto inst = make_logistic(0, 10, 40);
  const ReferenceSolution ref = long_run(inst.composite, inst.x0);
  const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(60));
  REQUIRE(check_energy_gd(t, ref).passed());
  REQUIRE(check_stepsize_bounds(t).passed());

  // recorded alpha_5 doubled: the stepsize inequalities break at k = 5
  Trace doubled = t;
  doubled.rows.resize(6);
  doubled.rows[5].alpha *= 2.0;
  const auto bounds = check_stepsize_bounds(doubled);
  CHECK(!bounds.passed());
  for (const auto& c : bounds.checks)
    if (!c.passed) CHECK(c.worst_index == 5);

  // actual step 5 taken five times too long: the energy inequality breaks at k = 5
  const auto energy = check_energy_gd(scale_actual_step(t, inst.composite, 5, 5.0), ref);
  CHECK(!energy.passed());
  CHECK(energy.checks[0].worst_index == 5);
}

TEST_CASE("proximal energy certificate") {
  const auto q = make_quadratic(3, 20, 100);
  CompositeProblem p = q.composite;
  p.g = nonneg_indicator(20);
  const Vector x0 = Vector::Ones(20);
  const ReferenceSolution ref = long_run(p, x0);
  const Trace t = run_solver(p, x0, AdGD2{}, recorded(200));
  CHECK(check_energy_prox(t, ref).passed());
  CHECK(check_subgradient_decrease(t).passed());

  Trace bad = t;
  bad.subgradients[5] += Vector::Constant(20, 10.0);
  const auto rep = check_energy_prox(bad, ref);
  CHECK(!rep.passed());
  CHECK(rep.checks[0].worst_index == 5);
  CHECK(!check_subgradient_decrease(bad).passed());
}

TEST_CASE("proximal energy with g = 0 matches the gradient version") {
  const auto inst = make_least_squares(4, 40, 20);
  const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(150));
  const auto a = check_energy_gd(t, exact(inst)), b = check_energy_prox(t, exact(inst));
  CHECK(a.passed());
  CHECK(b.passed());
  CHECK(a.checks[0].worst_index == b.checks[0].worst_index);
  CHECK(a.checks[0].worst_slack == doctest::Approx(b.checks[0].worst_slack).epsilon(1e-9));
}

TEST_CASE("rate bound") {
  for (const auto& inst : {make_quadratic(6, 20, 100), make_least_squares(6, 40, 20)}) {
    const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(500));
    const ReferenceSolution ref = exact(inst);
    const auto rep = check_rate(t, ref);
    CHECK(rep.passed());
    // R^2 = ||x0 - x*||^2 + 2 alpha_0^2 ||grad f(x0)||^2 + alpha_0 (F0 - F*)
    const double a0 = t.rows[0].alpha;
    const Vector g0 = inst.composite.f->gradient(inst.x0);
    const double R2 = (inst.x0 - ref.x_star).squaredNorm() + 2 * a0 * a0 * g0.squaredNorm() +
                      a0 * (evaluate_composite(inst.composite, inst.x0) - ref.F_star);
    char buf[64];
    std::snprintf(buf, sizeof buf, "R^2=%.6g", R2);
    CHECK(rep.checks[0].note == buf);
  }
  const auto inst = make_quadratic(6, 20, 100);
  const Trace fx = run_solver(inst.composite, inst.x0, FixedStep{0.005}, recorded(20));
  CHECK(check_rate(fx, exact(inst)).checks[0].evaluated == 0);
}

TEST_CASE("gradient correlation on convex runs") {
  for (const auto& inst : {make_logistic(7, 10, 40), make_quadratic(7, 15, 50)}) {
    const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(300));
    CHECK(check_gradient_correlation(t).passed());
  }
}

TEST_CASE("stepsize sum and floor on a quadratic") {
  const auto inst = make_quadratic(8, 20, 100);
  const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(300));
  const double L = *inst.composite.f->lipschitz();
  const auto rep = check_stepsize_sum(t, L, inst.composite.f.get());
  CHECK(rep.passed());
  const auto* sum = rep.find("stepsize_sum");
  REQUIRE(sum);
  CHECK(sum->evaluated > 100);
  // independent scan with the true L
  double s = 0.0, worst = 1e300;
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    s += t.rows[k].alpha;
    worst = std::min(worst, s - double(k) / (std::sqrt(2.0) * L));
  }
  CHECK(worst > 0.0);
}

TEST_CASE("breakpoints") {
  // identity Hessian, small alpha_0: steps grow to 1/L and never shrink
  const auto inst = make_quadratic(1, 5, 1.0);
  RunConfig rc = recorded(40);
  rc.alpha0_policy = Alpha0Policy::Given;
  rc.alpha0 = 0.01;
  const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, rc);
  const StepsizeSeries s = stepsize_series(t);
  CHECK(detect_breakpoints(s, reference_curvature(s)).indices.empty());
  CHECK(check_stepsize_sum(t, 1.0).find("breakpoint_window_sum")->passed);

  StepsizeSeries syn;
  syn.alpha = {1.0, 1.0, 0.2, 0.3};
  syn.theta = {1.0 / 3.0, 1.0, 0.2, 1.5};
  syn.curvature = {NAN, 1.0, 1.0, 1.0};
  const auto bp = detect_breakpoints(syn, 1.0);
  REQUIRE(bp.indices.size() == 1);
  CHECK(bp.indices[0] == 2);
  CHECK(bp.L_ref == 1.0);
}

TEST_CASE("dichotomy and stepsize facts on convex runs") {
  for (const auto& inst : {make_logistic(9, 10, 40), make_quadratic(9, 20, 1000), make_least_squares(9, 30, 25),
                           make_counterexample(3.0)}) {
    INFO(problem_name(inst.kind));
    const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(400));
    const StepsizeSeries s = stepsize_series(t);
    const double L = reference_curvature(s);
    CHECK(check_breakpoint_dichotomy(s, L).passed);
    const auto rep = check_stepsize_sum(t, L, inst.composite.f.get());
    CHECK(rep.passed());
    CHECK(rep.find("small_ratio_implications")->passed);
  }
}

namespace {

// plain double BadGD on the counterexample, written out from the update rule
std::vector<double> bad_gd_oracle(double x0, double c, int n) {
  auto g = [](double x) { return std::abs(x) <= 1 ? x : 2 * x / (1 + std::abs(x)); };
  std::vector<double> x{x0, x0 - g(x0)};
  while (static_cast<int>(x.size()) < n) {
    const double xc = x.back(), xp = x[x.size() - 2];
    const double alpha = std::abs(xc - xp) / (c * std::abs(g(xc) - g(xp)));
    x.push_back(xc - alpha * g(xc));
  }
  return x;
}

}  // namespace

TEST_CASE("divergence pattern for c = 2 holds in every part") {
  const auto inst = make_counterexample(20.0);
  const Trace t = run_solver(inst.composite, inst.x0, BadGD{2.0}, recorded(200));
  const auto rep = check_divergence_pattern(t);
  CHECK(rep.passed());
  CHECK(rep.find("divergence_inner_ratio")->evaluated >= 3);
}

TEST_CASE("divergence pattern for c = 1: signs and outer growth hold, inner ratio breaks at pair 1") {
  const auto x = bad_gd_oracle(12.0, 1.0, 5);
  REQUIRE(x[3] < 0);
  REQUIRE(2 * std::abs(x[3]) < std::abs(x[2]));  // 2 * 53.0 < 121.8

  const auto inst = make_counterexample(12.0);
  const Trace t = run_solver(inst.composite, inst.x0, BadGD{1.0}, recorded(200));
  CHECK(t.status == RunStatus::Diverged);
  for (int i = 0; i < 5; ++i) CHECK(t.iterates[i][0] == doctest::Approx(x[i]).epsilon(1e-12));
  const auto rep = check_divergence_pattern(t);
  CHECK(rep.find("divergence_signs")->passed);
  CHECK(rep.find("divergence_outer_growth")->passed);
  CHECK(rep.find("diverged_status")->passed);
  const CheckResult* inner = rep.find("divergence_inner_ratio");
  CHECK(!inner->passed);
  CHECK(inner->worst_index >= 1);

  const auto control = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(10000));
  CHECK(control.status == RunStatus::Converged);
  CHECK(!check_divergence_pattern(control).passed());
}

TEST_CASE("extended-precision replay follows the iterates beyond the double range") {
  const ExtendedDivergence e = replay_divergence_extended(12.0, 1.0, 12);
  CHECK(e.pairs_checked == 12);
  CHECK(e.signs_hold);
  CHECK(e.outer_growth_holds);
  CHECK(!e.inner_ratio_holds);
  CHECK(e.first_inner_break == 1);
  CHECK(e.inner_breaks == 11);
  // the ratio approaches 1/2 from below
  REQUIRE(e.inner_ratios.size() == 12);
  for (std::size_t k = 1; k < 12; ++k) CHECK(e.inner_ratios[k] <= 0.5);
  CHECK(e.inner_ratios.back() == doctest::Approx(0.5).epsilon(1e-6));

  const ExtendedDivergence e2 = replay_divergence_extended(20.0, 2.0, 10);
  CHECK(e2.pattern_holds);
  CHECK(e2.inner_ratios.back() == doctest::Approx(0.75).epsilon(1e-3));

  // the double run and the replay agree while both are representable
  const auto inst = make_counterexample(12.0);
  const Trace t = run_solver(inst.composite, inst.x0, BadGD{1.0}, recorded(200));
  for (std::size_t i = 0; i < 6 && i < t.iterates.size(); ++i)
    CHECK(t.iterates[i][0] == doctest::Approx(e.leading_iterates[i]).epsilon(1e-9));
  CHECK_THROWS_AS(replay_divergence_extended(12.0, 1.0, 13), ContractError);
}

TEST_CASE("report rendering is deterministic") {
  const auto inst = make_quadratic(1, 10, 30);
  const Trace t = run_solver(inst.composite, inst.x0, AdGD2{}, recorded(100));
  const auto a = run_certificates(t, inst.composite, exact(inst), true);
  const auto b = run_certificates(t, inst.composite, exact(inst), true);
  CHECK(a.to_text() == b.to_text());
  CHECK(a.passed());
  CHECK(a.find("energy_gd"));
  CHECK(a.find("rate"));
  CHECK(!a.find("no_such_check"));
}
