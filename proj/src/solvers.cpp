#include "adprox/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <type_traits>

namespace adprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kClamp = 1e308;
constexpr int kMaxSearchTrials = 100;
constexpr int kMaxArmijoReductions = 200;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void record(Counters* c, OpEvent e, ProxKind kind) {
  if (c) c->record(e, kind);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// One forward(-backward) step from x with stepsize alpha. Counts the prox call only
// when g is not the zero function.
Vector forward_backward(const CompositeProblem& p, const Vector& x, const Vector& grad, double alpha,
                        Counters* counters) {
  Vector y = x - alpha * grad;
  if (p.g->is_zero()) return y;
  record(counters, OpEvent::Prox, p.g->kind());
  return p.g->prox(alpha, y);
}

// Assembles the state that follows `state` after moving to x_next with alpha.
SolverState advance(const SolverState& state, const CompositeProblem& p, Vector x_next, double alpha,
                    double curvature, bool proximal, Counters* counters) {
  SolverState next;
  next.k = state.k + 1;
  next.x_prev = state.x_curr;
  next.grad_prev = state.grad_curr;
  next.alpha = alpha;
  if (state.k == 0) {
    next.alpha_prev = alpha;
    next.theta = state.theta;
  } else {
    next.alpha_prev = state.alpha;
    next.theta = alpha / state.alpha;
  }
  next.curvature = curvature;
  if (proximal) next.subgrad_curr = recover_subgradient(x_next, state.x_curr, state.grad_curr, alpha);
  if (x_next.allFinite()) {
    next.grad_curr = p.f->gradient(x_next);
    record(counters, OpEvent::Gradient, p.g->kind());
  } else {
    next.grad_curr = Vector::Constant(x_next.size(), kNaN);
  }
  next.x_curr = std::move(x_next);
  return next;
}

// alpha_k for the non-linesearch rules; L is NaN for k = 0.
double rule_stepsize(const SolverState& state, const StepsizeRule& rule, double L) {
  return std::visit(overloaded{
                        [&](const AdGD1&) { return stepsize_adgd1(state, L); },
                        [&](const AdGD2& r) { return stepsize_adgd2(state, r.fixed_curvature.value_or(L)); },
                        [&](const FixedStep& r) { return r.alpha; },
                        [&](const Armijo&) -> double { throw ContractError("armijo has no closed-form stepsize"); },
                        [&](const OldAdGD&) { return stepsize_old_adgd(state, L); },
                        [&](const BadGD& r) { return stepsize_bad_gd(L, r.c); },
                    },
                    rule);
}

double measured_curvature(const SolverState& state) {
  if (state.k == 0) return kNaN;
  const auto L = curvature_estimate(state.x_curr, state.x_prev, state.grad_curr, state.grad_prev);
  if (!L) throw NumericalError("zero displacement between iterates", state.k);
  return *L;
}

double next_alpha(const SolverState& state, const StepsizeRule& rule, double L) {
  if (state.k == 0 && !std::holds_alternative<FixedStep>(rule)) return state.alpha;
  return rule_stepsize(state, rule, L);
}

}  // namespace

std::string rule_name(const StepsizeRule& rule) {
  return std::visit(overloaded{
                        [](const AdGD1&) { return std::string("adgd1"); },
                        [](const AdGD2& r) {
                          return r.fixed_curvature ? "adgd2(L=" + fmt(*r.fixed_curvature) + ")"
                                                   : std::string("adgd2");
                        },
                        [](const FixedStep& r) { return "fixed(" + fmt(r.alpha) + ")"; },
                        [](const Armijo& r) { return "armijo(" + fmt(r.s) + "," + fmt(r.r) + ")"; },
                        [](const OldAdGD&) { return std::string("old_adgd"); },
                        [](const BadGD& r) { return "bad_gd(" + fmt(r.c) + ")"; },
                    },
                    rule);
}

void validate_rule(const StepsizeRule& rule) {
  std::visit(overloaded{
                 [](const AdGD1&) {},
                 [](const AdGD2& r) {
                   if (r.fixed_curvature && !(*r.fixed_curvature > 0.0 && std::isfinite(*r.fixed_curvature)))
                     throw ContractError("fixed curvature must be positive and finite");
                 },
                 [](const FixedStep& r) {
                   if (!(r.alpha > 0.0 && std::isfinite(r.alpha))) throw ContractError("fixed stepsize must be positive");
                 },
                 [](const Armijo& r) {
                   if (!(r.s > 1.0 && std::isfinite(r.s))) throw ContractError("armijo s must be > 1");
                   if (!(r.r > 0.0 && r.r < 1.0)) throw ContractError("armijo r must lie in (0, 1)");
                 },
                 [](const OldAdGD&) {},
                 [](const BadGD& r) {
                   if (!(r.c >= 1.0 && std::isfinite(r.c))) throw ContractError("bad_gd c must be >= 1");
                 },
             },
             rule);
}

double initial_theta(const StepsizeRule& rule) { return std::holds_alternative<AdGD2>(rule) ? 1.0 / 3.0 : 0.0; }

void validate_config(const RunConfig& c) {
  if (c.max_iter < 1) throw ContractError("max_iter must be >= 1");
  if (!(c.grad_tol > 0.0)) throw ContractError("grad_tol must be positive");
  if (!(c.alpha0 > 0.0 && std::isfinite(c.alpha0))) throw ContractError("alpha0 must be positive");
  if (!(c.search_cap >= c.alpha0 && std::isfinite(c.search_cap)))
    throw ContractError("search cap must be finite and >= alpha0");
  if (!(c.divergence_threshold > 0.0)) throw ContractError("divergence threshold must be positive");
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIter: return "max_iter";
    case RunStatus::Diverged: return "diverged";
  }
  return "unknown";
}

std::optional<double> curvature_estimate(const Vector& x_curr, const Vector& x_prev, const Vector& grad_curr,
                                         const Vector& grad_prev) {
  const double dx = (x_curr - x_prev).norm();
  if (dx == 0.0) return std::nullopt;
  return (grad_curr - grad_prev).norm() / dx;
}

double stepsize_adgd1(const SolverState& s, double L) {
  const double growth = std::sqrt(1.0 + s.theta) * s.alpha;
  const double bound = L > 0.0 ? 1.0 / (std::sqrt(2.0) * L) : kInf;
  return std::min(growth, bound);
}

double stepsize_adgd2(const SolverState& s, double L) {
  const double growth = std::sqrt(2.0 / 3.0 + s.theta) * s.alpha;
  const double u = s.alpha * L;
  // [2 u^2 - 1]_+, clamped so that huge curvature cannot overflow to inf
  const double bracket = u > 1e150 ? kClamp : std::min(2.0 * u * u - 1.0, kClamp);
  const double bound = bracket > 0.0 ? s.alpha / std::sqrt(bracket) : kInf;
  return std::min(growth, bound);
}

double stepsize_old_adgd(const SolverState& s, double L) {
  const double growth = std::sqrt(1.0 + s.theta) * s.alpha;
  const double bound = L > 0.0 ? 1.0 / (2.0 * L) : kInf;
  return std::min(growth, bound);
}

double stepsize_bad_gd(double L, double c) { return L > 0.0 ? 1.0 / (c * L) : kInf; }

Vector recover_subgradient(const Vector& x_next, const Vector& x_curr, const Vector& grad_curr, double alpha) {
  return (x_curr - x_next) / alpha - grad_curr;
}

SolverState gd_step(const SolverState& state, const CompositeProblem& problem, const StepsizeRule& rule,
                    Counters* counters) {
  if (std::holds_alternative<Armijo>(rule)) throw ContractError("gd_step does not run a linesearch");
  const double L = measured_curvature(state);
  const double alpha = next_alpha(state, rule, L);
  Vector x_next = state.x_curr - alpha * state.grad_curr;
  return advance(state, problem, std::move(x_next), alpha, L, false, counters);
}

SolverState proxgd_step(const SolverState& state, const CompositeProblem& problem, const StepsizeRule& rule,
                        Counters* counters) {
  const double L = measured_curvature(state);
  if (const auto* arm = std::get_if<Armijo>(&rule)) {
    SolverState with_f = state;
    if (!with_f.f_curr) {
      with_f.f_curr = problem.f->value(state.x_curr);
      record(counters, OpEvent::Value, problem.g->kind());
    }
    const double s = state.k == 0 ? 1.0 : arm->s;
    ArmijoResult res = armijo_search(with_f, problem, s, arm->r, counters);
    SolverState next = advance(state, problem, std::move(res.x_next), res.alpha, L, true, counters);
    next.f_curr = res.f_next;
    return next;
  }
  const double alpha = next_alpha(state, rule, L);
  Vector x_next = forward_backward(problem, state.x_curr, state.grad_curr, alpha, counters);
  return advance(state, problem, std::move(x_next), alpha, L, true, counters);
}

ArmijoResult armijo_search(const SolverState& state, const CompositeProblem& problem, double s, double r,
                           Counters* counters) {
  if (!state.f_curr) throw ContractError("armijo_search needs f(x^k)");
  const double f0 = *state.f_curr;
  double alpha = s * state.alpha;
  for (int i = 0; i <= kMaxArmijoReductions; ++i) {
    Vector x_next = forward_backward(problem, state.x_curr, state.grad_curr, alpha, counters);
    const double f_next = problem.f->value(x_next);
    record(counters, OpEvent::Value, problem.g->kind());
    const Vector d = x_next - state.x_curr;
    const double model = f0 + state.grad_curr.dot(d) + d.squaredNorm() / (2.0 * alpha);
    if (std::isfinite(f_next) && f_next <= model) {
      record(counters, OpEvent::ValueReused, problem.g->kind());
      return {alpha, std::move(x_next), f_next, i + 1};
    }
    alpha *= r;
  }
  throw NumericalError("linesearch stalled", state.k);
}

InitialStepsize initial_stepsize_search(const CompositeProblem& problem, const Vector& x0, double cap, double start,
                                        Counters* counters, const Vector* grad0) {
  if (!(start > 0.0 && cap >= start)) throw ContractError("search needs 0 < start <= cap");
  Vector g0;
  if (grad0) {
    g0 = *grad0;
  } else {
    g0 = problem.f->gradient(x0);
    record(counters, OpEvent::Gradient, problem.g->kind());
  }
  if (g0.norm() == 0.0) throw ContractError("initial stepsize search at a stationary point");

  const double lo_target = 1.0 / std::sqrt(2.0);
  const double hi_target = 2.0;
  double lo = 0.0;   // largest trial with a small product
  double hi = kInf;  // smallest trial with a large product
  double alpha = start;

  InitialStepsize out;
  for (int trial = 1; trial <= kMaxSearchTrials; ++trial) {
    Vector x1 = forward_backward(problem, x0, g0, alpha, counters);
    Vector g1 = problem.f->gradient(x1);
    record(counters, OpEvent::Gradient, problem.g->kind());
    const auto L1 = curvature_estimate(x1, x0, g1, g0);
    const double product = L1 ? alpha * *L1 : 0.0;

    out.alpha0 = alpha;
    out.product = product;
    out.trials = trial;
    out.x1 = std::move(x1);
    out.grad1 = std::move(g1);
    out.bracketed = product >= lo_target && product <= hi_target;
    if (out.bracketed) return out;

    if (!std::isfinite(product) || product > hi_target) {
      hi = alpha;
      alpha = lo > 0.0 ? std::sqrt(lo * hi) : alpha / 10.0;
    } else {
      lo = alpha;
      if (alpha >= cap) {
        out.capped = true;
        return out;
      }
      alpha = std::isfinite(hi) ? std::sqrt(lo * hi) : std::min(alpha * 10.0, cap);
    }
  }
  return out;
}

Trace run_solver(const CompositeProblem& problem, const Vector& x0, const StepsizeRule& rule,
                 const RunConfig& config) {
  validate_rule(rule);
  validate_config(config);
  if (x0.size() != problem.dimension()) throw ContractError("x0 has the wrong dimension");
  if (!std::isfinite(problem.g->value(x0))) throw ContractError("x0 lies outside dom g");

  const bool is_armijo = std::holds_alternative<Armijo>(rule);
  const bool is_bad = std::holds_alternative<BadGD>(rule);
  const ProxKind kind = problem.g->kind();

  Trace t;
  t.rule = rule_name(rule);
  t.rule_spec = rule;
  t.proximal = !problem.g->is_zero() || is_armijo;
  t.theta0 = initial_theta(rule);

  Counters c;
  Vector grad0 = problem.f->gradient(x0);
  c.record(OpEvent::Gradient, kind);
  t.F0 = evaluate_composite(problem, x0);

  if (config.record_iterates) {
    t.iterates.push_back(x0);
    t.gradients.push_back(grad0);
    if (t.proximal) t.subgradients.push_back(Vector::Zero(x0.size()));
    t.values.push_back(t.F0);
  }

  if (!grad0.allFinite()) throw NumericalError("non-finite gradient at x0", 0);
  const bool stationary = grad0.norm() == 0.0 && problem.g->is_zero();

  if (is_bad) {
    t.alpha0 = 1.0;
  } else if (const auto* fs = std::get_if<FixedStep>(&rule)) {
    t.alpha0 = fs->alpha;
  } else if (config.alpha0_policy == Alpha0Policy::Given || stationary || grad0.norm() == 0.0) {
    t.alpha0 = config.alpha0;
  } else {
    t.search = initial_stepsize_search(problem, x0, config.search_cap, config.alpha0, &c, &grad0);
    t.alpha0 = t.search->alpha0;
  }

  SolverState state;
  state.x_prev = x0;
  state.x_curr = x0;
  state.grad_prev = grad0;
  state.grad_curr = grad0;
  state.alpha = t.alpha0;
  state.alpha_prev = t.alpha0;
  state.theta = t.theta0;
  if (t.proximal) state.subgrad_curr = Vector::Zero(x0.size());

  if (stationary) {
    t.status = RunStatus::Converged;
    t.counters = c;
    t.x_final = x0;
    t.alpha_final = t.alpha0;
    return t;
  }
  if (is_armijo) {
    state.f_curr = problem.f->value(x0);
    c.record(OpEvent::Value, kind);
  }

  // The search already evaluated the first step at alpha_0; reuse it.
  const bool reuse_search = t.search.has_value() && !is_armijo;

  t.status = RunStatus::MaxIter;
  for (std::int64_t k = 0; k < config.max_iter; ++k) {
    SolverState next;
    if (k == 0 && reuse_search) {
      next.k = 1;
      next.x_prev = state.x_curr;
      next.grad_prev = state.grad_curr;
      next.x_curr = t.search->x1;
      next.grad_curr = t.search->grad1;
      next.alpha = t.alpha0;
      next.alpha_prev = t.alpha0;
      next.theta = t.theta0;
      if (t.proximal) next.subgrad_curr = recover_subgradient(next.x_curr, x0, grad0, t.alpha0);
    } else if (t.proximal) {
      next = proxgd_step(state, problem, rule, &c);
    } else {
      next = gd_step(state, problem, rule, &c);
    }

    const bool finite = next.x_curr.allFinite() && std::isfinite(next.alpha);
    const double step_norm = finite ? (next.x_curr - next.x_prev).norm() : kInf;
    const double F = finite ? evaluate_composite(problem, next.x_curr) : kNaN;

    if (config.record_trace) {
      TraceRow row;
      row.k = k;
      row.alpha = next.alpha;
      row.theta = k == 0 ? t.theta0 : next.theta;
      row.curvature = next.curvature;
      row.F = F;
      row.step_norm = step_norm;
      row.counters = c;
      t.rows.push_back(row);
    }
    if (config.record_iterates && finite) {
      t.iterates.push_back(next.x_curr);
      t.gradients.push_back(next.grad_curr);
      if (t.proximal) t.subgradients.push_back(*next.subgrad_curr);
      t.values.push_back(F);
    }

    t.iterations = k + 1;
    if (!finite) {
      if (!is_bad) throw NumericalError("non-finite iterate", k);
      t.status = RunStatus::Diverged;
      state = std::move(next);
      break;
    }
    if (!next.grad_curr.allFinite()) throw NumericalError("non-finite gradient", k);
    if (next.x_curr.norm() > config.divergence_threshold) {
      t.status = RunStatus::Diverged;
      state = std::move(next);
      break;
    }
    const bool small_step = step_norm == 0.0 || step_norm / next.alpha <= config.grad_tol;
    const bool reached = config.stop_value && F <= *config.stop_value;
    state = std::move(next);
    if (small_step || reached) {
      t.status = RunStatus::Converged;
      break;
    }
  }

  t.counters = c;
  t.x_final = state.x_curr;
  t.alpha_final = state.alpha;
  return t;
}

}  // namespace adprox
