#include "adprox/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <variant>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "adprox/problems.hpp"

namespace adprox {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRel = 1e-12;

// Collects slacks for one inequality.
class Accumulator {
 public:
  explicit Accumulator(std::string name) { r_.name = std::move(name); }

  void add(std::int64_t k, double slack, double tol) {
    if (std::isnan(slack)) slack = -kInf;
    ++r_.evaluated;
    const bool ok = slack >= -tol;
    if (!ok) r_.passed = false;
    const double margin = slack + tol;
    if (r_.worst_index < 0 || margin < worst_margin_) {
      worst_margin_ = margin;
      r_.worst_slack = slack;
      r_.worst_index = k;
      r_.tolerance = tol;
    }
  }

  CheckResult done(std::string note = {}) {
    if (!note.empty()) r_.note = std::move(note);
    if (r_.evaluated == 0 && r_.note.empty()) r_.note = "nothing to evaluate";
    return r_;
  }

 private:
  CheckResult r_;
  double worst_margin_ = kInf;
};

CheckResult not_applicable(const std::string& name, const std::string& why) {
  CheckResult r;
  r.name = name;
  r.note = "not applicable: " + why;
  return r;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_iterates(const Trace& t) {
  if (t.iterates.empty() || t.gradients.empty() || t.values.empty())
    throw ContractError("certificate needs recorded iterates (RunConfig::record_iterates)");
}

const ReferenceSolution& require_reference(const std::optional<ReferenceSolution>& ref) {
  if (!ref) throw ContractError("reference required");
  return *ref;
}

// Number of steps k whose endpoint x^{k+1} is recorded.
std::int64_t usable_steps(const Trace& t) {
  return std::min<std::int64_t>(static_cast<std::int64_t>(t.rows.size()),
                                static_cast<std::int64_t>(t.iterates.size()) - 1);
}

// grad f(x^k) + v^k
Vector shat(const Trace& t, std::size_t k) {
  if (t.proximal) return t.gradients[k] + t.subgradients[k];
  return t.gradients[k];
}

bool is_adgd2(const Trace& t) {
  const auto* r = std::get_if<AdGD2>(&t.rule_spec);
  return r && !r->fixed_curvature;
}

double adgd2_second_bound(double alpha_prev, double L) {
  const double u = alpha_prev * L;
  const double bracket = u > 1e150 ? 1e308 : std::min(2.0 * u * u - 1.0, 1e308);
  return bracket > 0.0 ? alpha_prev / std::sqrt(bracket) : kInf;
}

// Checks that depend on L_ref.
std::vector<CheckResult> sum_checks(const StepsizeSeries& s, double L) {
  const auto K = static_cast<std::int64_t>(s.alpha.size());
  std::vector<CheckResult> out;

  Accumulator floor_acc("stepsize_floor");
  const double floor_full = 1.0 / (std::sqrt(3.0) * L);
  const double floor = s.bracketed ? floor_full : std::min(s.alpha.front(), floor_full);
  for (std::int64_t k = 1; k < K; ++k)
    floor_acc.add(k, s.alpha[k] - floor, kRel * std::max(1.0, floor));
  out.push_back(floor_acc.done(s.bracketed ? "floor 1/(sqrt(3) L_ref)" : "floor min{alpha_0, 1/(sqrt(3) L_ref)}"));

  if (!s.bracketed) {
    out.push_back(not_applicable("stepsize_sum", "alpha_0 not bracketed by the search"));
    out.push_back(not_applicable("breakpoint_window_sum", "alpha_0 not bracketed by the search"));
    out.push_back(not_applicable("breakpoint_dichotomy", "alpha_0 not bracketed by the search"));
    return out;
  }

  Accumulator sum_acc("stepsize_sum");
  double partial = 0.0;
  for (std::int64_t k = 1; k < K; ++k) {
    partial += s.alpha[k];
    sum_acc.add(k, partial - static_cast<double>(k) / (std::sqrt(2.0) * L), kRel * partial);
  }
  out.push_back(sum_acc.done());

  const BreakpointRecord bp = detect_breakpoints(s, L);
  Accumulator win_acc("breakpoint_window_sum");
  for (std::int64_t m : bp.indices) {
    if (m < 2 || m + 2 >= K) continue;
    double w = 0.0;
    for (std::int64_t j = -2; j <= 2; ++j) w += s.alpha[m + j];
    win_acc.add(m, w - 5.0 / L, kRel * w);
  }
  out.push_back(win_acc.done(std::to_string(bp.indices.size()) + " breakpoints"));
  out.push_back(check_breakpoint_dichotomy(s, L));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool CertificateReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CertificateReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void CertificateReport::append(const CertificateReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string CertificateReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << ' ' << (c.passed ? "pass" : "FAIL") << " evaluated=" << c.evaluated
       << " worst_slack=" << num(c.worst_slack) << " at=" << c.worst_index << " tol=" << num(c.tolerance);
    if (!c.note.empty()) os << " note=\"" << c.note << '"';
    os << '\n';
  }
  return os.str();
}

StepsizeSeries stepsize_series(const Trace& t) {
  StepsizeSeries s;
  const std::size_t K = t.rows.size();
  s.alpha.resize(K);
  s.curvature.assign(K, kNaN);
  s.theta.assign(K, t.theta0);
  for (std::size_t k = 0; k < K; ++k) s.alpha[k] = t.rows[k].alpha;
  const bool raw = t.iterates.size() >= K && t.gradients.size() >= K;
  for (std::size_t k = 1; k < K; ++k) {
    if (raw) {
      const auto L = curvature_estimate(t.iterates[k], t.iterates[k - 1], t.gradients[k], t.gradients[k - 1]);
      s.curvature[k] = L ? *L : kNaN;
    } else {
      s.curvature[k] = t.rows[k].curvature;
    }
    s.theta[k] = s.alpha[k] / s.alpha[k - 1];
  }
  s.searched = t.search.has_value();
  s.bracketed = s.searched && t.search->bracketed;
  return s;
}

double reference_curvature(const StepsizeSeries& s) {
  double L = 0.0;
  for (double v : s.curvature)
    if (std::isfinite(v)) L = std::max(L, v);
  return L;
}

double sweep_curvature(const Trace& t, const SmoothFunction& f) {
  require_iterates(t);
  const std::size_t N = std::min(t.iterates.size(), t.gradients.size());
  double L = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < std::min(N, i + 4); ++j) {
      const auto v = curvature_estimate(t.iterates[j], t.iterates[i], t.gradients[j], t.gradients[i]);
      if (v && std::isfinite(*v)) L = std::max(L, *v);
    }
    if (i + 1 < N) {
      Vector d = t.iterates[i + 1] - t.iterates[i];
      const double n = d.norm();
      if (n == 0.0) continue;
      d /= n;
      const double h = 1e-5 * (1.0 + t.iterates[i].norm());
      try {
        const Vector gp = f.gradient(t.iterates[i] + h * d);
        const Vector gm = f.gradient(t.iterates[i] - h * d);
        const double v = (gp - gm).norm() / (2.0 * h);
        if (std::isfinite(v)) L = std::max(L, v);
      } catch (const std::exception&) {
        // the probe left dom f; skip this direction
      }
    }
  }
  return L;
}

// --- energy ------------------------------------------------------------------

CertificateReport check_energy_gd(const Trace& t, const std::optional<ReferenceSolution>& ref_opt) {
  CertificateReport rep;
  double c = 0.0;
  if (is_adgd2(t)) c = 3.0;
  else if (std::holds_alternative<AdGD1>(t.rule_spec)) c = 2.0;
  if (c == 0.0) {
    rep.checks.push_back(not_applicable("energy_gd", "rule " + t.rule + " has no energy certificate"));
    return rep;
  }
  const auto& ref = require_reference(ref_opt);
  require_iterates(t);
  const double delta = ref.tolerance;
  const Vector& xs = ref.x_star;
  const double fs = ref.F_star;
  const std::int64_t K = usable_steps(t);

  auto rhs_at = [&](std::int64_t k) {
    const double a = t.rows[k].alpha;
    const double th = a / t.rows[k - 1].alpha;
    return (t.iterates[k] - xs).squaredNorm() + (t.iterates[k] - t.iterates[k - 1]).squaredNorm() +
           c * a * th * (t.values[k - 1] - fs);
  };
  Accumulator acc("energy_gd");
  const double scale = K > 1 ? 1.0 + std::abs(rhs_at(1)) : 1.0;
  for (std::int64_t k = 1; k < K; ++k) {
    const double a = t.rows[k].alpha;
    const double th = a / t.rows[k - 1].alpha;
    const double step = (t.iterates[k + 1] - t.iterates[k]).norm();
    const double lhs = (t.iterates[k + 1] - xs).squaredNorm() + step * step + a * (2.0 + c * th) * (t.values[k] - fs);
    const double tol = 1e-7 * scale + 2.0 * delta * (a * (2.0 + c * th) + c * a * th) + 2.0 * step * delta;
    acc.add(k, rhs_at(k) - lhs, tol);
  }
  rep.checks.push_back(acc.done());
  return rep;
}

CertificateReport check_energy_prox(const Trace& t, const std::optional<ReferenceSolution>& ref_opt) {
  CertificateReport rep;
  if (!is_adgd2(t)) {
    rep.checks.push_back(not_applicable("energy_prox", "rule " + t.rule + " has no proximal energy certificate"));
    return rep;
  }
  const auto& ref = require_reference(ref_opt);
  require_iterates(t);
  if (t.proximal && t.subgradients.size() < t.iterates.size())
    throw ContractError("energy_prox needs recorded subgradients");
  const double delta = ref.tolerance;
  const Vector& xs = ref.x_star;
  const double Fs = ref.F_star;
  const std::int64_t K = usable_steps(t);

  auto rhs_at = [&](std::int64_t k) {
    const double a = t.rows[k].alpha;
    const double ap = t.rows[k - 1].alpha;
    const double th = a / ap;
    return (t.iterates[k] - xs).squaredNorm() + ap * ap * shat(t, k - 1).squaredNorm() +
           3.0 * a * th * (t.values[k - 1] - Fs);
  };
  Accumulator acc("energy_prox");
  const double scale = K > 1 ? 1.0 + std::abs(rhs_at(1)) : 1.0;
  for (std::int64_t k = 1; k < K; ++k) {
    const double a = t.rows[k].alpha;
    const double th = a / t.rows[k - 1].alpha;
    const double step = (t.iterates[k + 1] - t.iterates[k]).norm();
    const double lhs = (t.iterates[k + 1] - xs).squaredNorm() + a * a * shat(t, k).squaredNorm() +
                       a * (2.0 + 3.0 * th) * (t.values[k] - Fs);
    const double tol = 1e-7 * scale + 2.0 * delta * (a * (2.0 + 3.0 * th) + 3.0 * a * th) + 2.0 * step * delta;
    acc.add(k, rhs_at(k) - lhs, tol);
  }
  rep.checks.push_back(acc.done());
  return rep;
}

CertificateReport check_rate(const Trace& t, const std::optional<ReferenceSolution>& ref_opt) {
  CertificateReport rep;
  if (!is_adgd2(t)) {
    rep.checks.push_back(not_applicable("rate", "rate bound is stated for the adaptive rule only"));
    return rep;
  }
  const auto& ref = require_reference(ref_opt);
  require_iterates(t);
  const double delta = ref.tolerance;
  const double a0 = t.rows.empty() ? t.alpha0 : t.rows[0].alpha;
  const double d0 = (t.iterates[0] - ref.x_star).norm();
  // v^0 = 0, so the initial subgradient term is grad f(x^0)
  const double R2 = d0 * d0 + 2.0 * a0 * a0 * t.gradients[0].squaredNorm() + a0 * (t.values[0] - ref.F_star);
  const double R2_err = 2.0 * d0 * delta + delta * delta + a0 * delta;

  Accumulator acc("rate");
  const std::int64_t K = usable_steps(t);
  double best = kInf;
  double sum = 0.0;
  for (std::int64_t k = 1; k < K + 1 && k < static_cast<std::int64_t>(t.values.size()); ++k) {
    if (k >= static_cast<std::int64_t>(t.rows.size())) break;
    best = std::min(best, t.values[k] - ref.F_star);
    sum += t.rows[k].alpha;
    const double bound = R2 / (2.0 * sum);
    const double tol = 1e-6 * std::abs(bound) + 2.0 * delta + R2_err / (2.0 * sum) +
                       4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ref.F_star));
    acc.add(k, bound - best, tol);
  }
  rep.checks.push_back(acc.done("R^2=" + num(R2)));
  return rep;
}

// --- monotonicity ------------------------------------------------------------

CertificateReport check_gradient_correlation(const Trace& t) {
  require_iterates(t);
  Accumulator acc("gradient_correlation");
  const std::size_t N = std::min(t.gradients.size(), t.proximal ? t.subgradients.size() : t.gradients.size());
  for (std::size_t k = 1; k < N; ++k) {
    Vector u = t.gradients[k];
    Vector w = t.gradients[k - 1];
    if (t.proximal) {
      u += t.subgradients[k];
      w += t.subgradients[k];
    }
    const double ww = w.squaredNorm();
    acc.add(static_cast<std::int64_t>(k), ww - u.dot(w), 1e-9 * (1.0 + ww));
  }
  CertificateReport rep;
  rep.checks.push_back(acc.done());
  return rep;
}

CertificateReport check_subgradient_decrease(const Trace& t) {
  CertificateReport rep;
  if (!t.proximal) {
    rep.checks.push_back(not_applicable("subgradient_decrease", "no prox map"));
    return rep;
  }
  require_iterates(t);
  Accumulator acc("subgradient_decrease");
  const std::size_t N = std::min(t.gradients.size(), t.subgradients.size());
  for (std::size_t k = 0; k + 1 < N; ++k) {
    const double before = (t.gradients[k] + t.subgradients[k]).norm();
    const double after = (t.gradients[k] + t.subgradients[k + 1]).norm();
    acc.add(static_cast<std::int64_t>(k), before - after, 1e-9 * (1.0 + before));
  }
  rep.checks.push_back(acc.done());
  return rep;
}

// --- stepsize structure ------------------------------------------------------------

CertificateReport check_stepsize_bounds(const Trace& t) {
  const StepsizeSeries s = stepsize_series(t);
  const auto K = static_cast<std::int64_t>(s.alpha.size());
  Accumulator first("stepsize_first_bound");
  Accumulator second("stepsize_second_bound");
  std::string note;

  std::visit(
      [&](const auto& rule) {
        using R = std::decay_t<decltype(rule)>;
        for (std::int64_t k = 1; k < K; ++k) {
          const double a = s.alpha[k];
          const double ap = s.alpha[k - 1];
          const double L = s.curvature[k];
          if constexpr (std::is_same_v<R, AdGD2>) {
            const double Lk = rule.fixed_curvature.value_or(L);
            const double b1 = std::sqrt(2.0 / 3.0 + s.theta[k - 1]) * ap;
            first.add(k, b1 - a, kRel * b1);
            const double lhs = a * a * Lk * Lk - a * a / (2.0 * ap * ap);
            second.add(k, 0.5 - lhs, kRel * (1.0 + a * a * Lk * Lk));
          } else if constexpr (std::is_same_v<R, AdGD1> || std::is_same_v<R, OldAdGD>) {
            const double b1 = std::sqrt(1.0 + s.theta[k - 1]) * ap;
            first.add(k, b1 - a, kRel * b1);
            const double gamma = std::is_same_v<R, AdGD1> ? 1.0 / std::sqrt(2.0) : 0.5;
            second.add(k, gamma - a * L, kRel * (1.0 + a * L));
          } else if constexpr (std::is_same_v<R, BadGD>) {
            second.add(k, -std::abs(a * L * rule.c - 1.0), kRel);
          } else if constexpr (std::is_same_v<R, FixedStep>) {
            first.add(k, -std::abs(a - rule.alpha), kRel * rule.alpha);
          } else if constexpr (std::is_same_v<R, Armijo>) {
            first.add(k, rule.s * ap - a, kRel * rule.s * ap);
          }
        }
        if constexpr (std::is_same_v<R, Armijo>) {
          // sufficient decrease from the recorded iterates
          if (!t.iterates.empty()) {
            const std::int64_t steps = usable_steps(t);
            for (std::int64_t k = 0; k < steps; ++k) {
              const Vector d = t.iterates[k + 1] - t.iterates[k];
              const double model = t.values[k] + t.gradients[k].dot(d) + d.squaredNorm() / (2.0 * s.alpha[k]);
              second.add(k, model - t.values[k + 1], 1e-12 * (1.0 + std::abs(t.values[k])));
            }
          }
          note = "second bound = sufficient decrease";
        }
      },
      t.rule_spec);

  CertificateReport rep;
  rep.checks.push_back(first.done(note));
  rep.checks.push_back(second.done(note));
  return rep;
}

BreakpointRecord detect_breakpoints(const StepsizeSeries& s, double L_ref) {
  BreakpointRecord r;
  r.L_ref = L_ref;
  for (std::size_t m = 1; m < s.alpha.size(); ++m)
    if (s.theta[m] < 1.0 / 3.0 && s.alpha[m] < 1.0 / L_ref) r.indices.push_back(static_cast<std::int64_t>(m));
  return r;
}

CheckResult check_breakpoint_dichotomy(const StepsizeSeries& s, double L_ref) {
  const BreakpointRecord bp = detect_breakpoints(s, L_ref);
  auto is_bp = [&](std::int64_t m) { return std::binary_search(bp.indices.begin(), bp.indices.end(), m); };
  Accumulator acc("breakpoint_dichotomy");
  const double small = 1.0 / (std::sqrt(2.0) * L_ref);
  for (std::int64_t k = 1; k < static_cast<std::int64_t>(s.alpha.size()); ++k) {
    if (!(s.alpha[k] < small)) continue;
    const bool first = is_bp(k - 1);
    const bool second = k >= 2 && s.alpha[k - 1] < s.alpha[k] && is_bp(k - 2);
    acc.add(k, (first || second) ? 0.0 : -1.0, 0.0);
  }
  return acc.done(std::to_string(bp.indices.size()) + " breakpoints");
}

CertificateReport check_stepsize_sum(const Trace& t, double L_ref, const SmoothFunction* f) {
  CertificateReport rep;
  if (!is_adgd2(t)) {
    rep.checks.push_back(not_applicable("stepsize_sum", "rule " + t.rule + " is not the adaptive rule"));
    return rep;
  }
  if (!(L_ref > 0.0)) throw ContractError("L_ref must be positive");
  const StepsizeSeries s = stepsize_series(t);
  const auto K = static_cast<std::int64_t>(s.alpha.size());

  // facts relative to the measured L_k
  Accumulator floor2("second_bound_step_floor");
  Accumulator pair2("second_bound_pair_sum");
  Accumulator small("small_ratio_implications");
  for (std::int64_t k = 1; k < K; ++k) {
    const double a = s.alpha[k];
    const double ap = s.alpha[k - 1];
    const double L = s.curvature[k];
    if (!std::isfinite(L) || L <= 0.0) continue;
    const double b1 = std::sqrt(2.0 / 3.0 + s.theta[k - 1]) * ap;
    const double b2 = adgd2_second_bound(ap, L);
    const bool binds2 = b2 <= b1 * (1.0 + kRel);
    if (binds2) {
      const double lo = 1.0 / (std::sqrt(2.0) * L);
      floor2.add(k, a - lo, kRel * lo);
      pair2.add(k, ap + a - 2.0 / L, kRel * (ap + a));
    }
    if (s.theta[k] < 1.0 / 3.0) {
      double slack = binds2 ? kInf : -1.0;
      slack = std::min(slack, ap * L - std::sqrt(5.0));
      if (k >= 2) slack = std::min(slack, s.alpha[k - 2] * L - 1.5);
      if (k >= 3) slack = std::min(slack, s.alpha[k - 3] * L - 1.0);
      small.add(k, slack, kRel * (1.0 + ap * L));
    }
  }
  rep.checks.push_back(floor2.done());
  rep.checks.push_back(pair2.done());
  rep.checks.push_back(small.done());

  std::vector<CheckResult> dependent = sum_checks(s, L_ref);
  const bool violated = std::any_of(dependent.begin(), dependent.end(), [](const CheckResult& c) { return !c.passed; });
  if (violated) {
    if (f && !t.iterates.empty()) {
      const double L_sweep = std::max(L_ref, sweep_curvature(t, *f));
      std::vector<CheckResult> again = sum_checks(s, L_sweep);
      for (std::size_t i = 0; i < dependent.size(); ++i) {
        if (dependent[i].passed) continue;
        const std::string head = "stronger-form violation at L_ref=" + num(L_ref);
        if (again[i].passed) {
          again[i].note = head + "; cleared by curvature cross-check L=" + num(L_sweep);
          dependent[i] = again[i];
        } else {
          dependent[i].note = head + "; persists at cross-checked L=" + num(L_sweep);
        }
      }
    } else {
      for (auto& c : dependent)
        if (!c.passed) c.note = "stronger-form violation at L_ref=" + num(L_ref) + "; no cross-check available";
    }
  }
  rep.checks.insert(rep.checks.end(), dependent.begin(), dependent.end());
  return rep;
}

// --- divergence --------------------------------------------------------------

namespace {

template <class Real>
int sign_of(const Real& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

struct PairSlack {
  double signs, outer, inner;
};

// each part is positive when it holds strictly
template <class Real>
PairSlack pair_slack(const Real& x0, const Real& x1, const Real& x2) {
  using std::abs;
  PairSlack s;
  const bool same = sign_of(x0) != 0 && sign_of(x0) == sign_of(x1);
  const bool flips = sign_of(x2) != 0 && sign_of(x2) != sign_of(x0);
  s.signs = same && flips ? 1.0 : -1.0;
  const Real a0 = abs(x0), a1 = abs(x1), a2 = abs(x2);
  s.outer = a2 > 0 ? static_cast<double>((a2 - 2 * a1) / a2) : -1.0;
  s.inner = a1 > 0 ? static_cast<double>((2 * a1 - a0) / (2 * a1)) : -1.0;
  return s;
}

}  // namespace

CertificateReport check_divergence_pattern(const Trace& t) {
  if (t.iterates.empty()) throw ContractError("divergence pattern needs recorded iterates");
  if (t.iterates.front().size() != 1) throw ContractError("divergence pattern is defined for scalar iterates");
  std::vector<double> x;
  for (const auto& v : t.iterates) {
    if (!std::isfinite(v[0])) break;
    x.push_back(v[0]);
  }
  Accumulator signs("divergence_signs"), outer("divergence_outer_growth"), inner("divergence_inner_ratio");
  for (std::size_t k = 0; 2 * k + 2 < x.size(); ++k) {
    const auto s = pair_slack(x[2 * k], x[2 * k + 1], x[2 * k + 2]);
    const auto kk = static_cast<std::int64_t>(k);
    signs.add(kk, s.signs, 0.0);
    outer.add(kk, s.outer, 0.0);
    inner.add(kk, s.inner, 0.0);
  }

  Accumulator status("diverged_status");
  status.add(t.iterations, t.status == RunStatus::Diverged ? 0.0 : -1.0, 0.0);

  const std::string note = std::to_string(x.size()) + " finite iterates";
  CertificateReport rep;
  rep.checks.push_back(signs.done(note));
  rep.checks.push_back(outer.done(note));
  rep.checks.push_back(inner.done(note));
  rep.checks.push_back(status.done(status_name(t.status)));
  return rep;
}

ExtendedDivergence replay_divergence_extended(double x0, double c, std::int64_t pairs) {
  // Iterates square in magnitude every two steps, so the working precision must
  // resolve 1/(1+|x|) next to 1 for |x| around 10^(28 * 2^(pairs-5)).
  using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<8000>>;
  if (pairs < 1 || pairs > 12) throw ContractError("extended replay supports 1..12 pairs");
  if (!(c >= 1.0)) throw ContractError("bad_gd needs c >= 1");

  auto grad = [](const Real& x) -> Real {
    const Real ax = abs(x);
    if (ax <= 1) return x;
    return Real(kCounterexampleA) * x / (1 + ax);
  };

  std::vector<Real> x;
  x.emplace_back(x0);
  x.push_back(x[0] - grad(x[0]));  // alpha_0 = 1
  const std::size_t needed = static_cast<std::size_t>(2 * pairs + 1);
  while (x.size() < needed) {
    const Real& xc = x.back();
    const Real& xp = x[x.size() - 2];
    const Real gc = grad(xc);
    const Real L = abs(gc - grad(xp)) / abs(xc - xp);
    if (L == 0) break;
    x.push_back(xc - gc / (Real(c) * L));
  }

  ExtendedDivergence out;
  out.signs_hold = out.outer_growth_holds = out.inner_ratio_holds = true;
  for (std::int64_t k = 0; k < pairs; ++k) {
    if (static_cast<std::size_t>(2 * k + 2) >= x.size()) {
      out.signs_hold = out.outer_growth_holds = out.inner_ratio_holds = false;
      break;
    }
    ++out.pairs_checked;
    const auto s = pair_slack(x[2 * k], x[2 * k + 1], x[2 * k + 2]);
    out.inner_ratios.push_back(static_cast<double>(abs(x[2 * k + 1]) / abs(x[2 * k])));
    auto note_break = [&](bool& flag, double slack) {
      if (slack > 0.0) return;
      flag = false;
      if (out.first_break < 0) out.first_break = k;
    };
    note_break(out.signs_hold, s.signs);
    note_break(out.outer_growth_holds, s.outer);
    if (!(s.inner > 0.0)) {
      out.inner_ratio_holds = false;
      ++out.inner_breaks;
      if (out.first_inner_break < 0) out.first_inner_break = k;
      if (out.first_break < 0) out.first_break = k;
    }
  }
  out.pattern_holds = out.signs_hold && out.outer_growth_holds && out.inner_ratio_holds;
  for (const auto& v : x) {
    if (abs(v) > Real(1e300)) break;
    out.leading_iterates.push_back(static_cast<double>(v));
  }
  return out;
}

CertificateReport run_certificates(const Trace& t, const CompositeProblem& problem,
                                   const std::optional<ReferenceSolution>& ref, bool convex) {
  CertificateReport rep;
  rep.append(check_stepsize_bounds(t));
  if (t.iterates.empty()) return rep;
  if (convex) {
    rep.append(check_gradient_correlation(t));
    if (t.proximal) rep.append(check_subgradient_decrease(t));
    if (ref) {
      rep.append(t.proximal ? check_energy_prox(t, ref) : check_energy_gd(t, ref));
      rep.append(check_rate(t, ref));
    }
  }
  if (is_adgd2(t)) {
    const double L_ref = reference_curvature(stepsize_series(t));
    if (L_ref > 0.0) rep.append(check_stepsize_sum(t, L_ref, problem.f.get()));
  }
  return rep;
}

}  // namespace adprox
