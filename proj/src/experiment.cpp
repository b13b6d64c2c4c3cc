#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "adprox/experiment.hpp"
#include "adprox/prox_ops.hpp"

namespace adprox {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ContractError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write " + p.string());
  out << text;
  if (!out) throw ContractError("write failed for " + p.string());
}

std::string options_tag(const ReferenceOptions& o) {
  std::ostringstream ss;
  ss << "grad_tol=" << o.grad_tol << " max_iter=" << o.max_iter << " restarts=" << o.restarts;
  return ss.str();
}

// Upper estimate of F(x) - F* from one extra forward-backward step at x.
double gap_estimate(const CompositeProblem& p, const Vector& x, const Vector& x0, double alpha) {
  const Vector grad = p.f->gradient(x);
  const Vector y = p.g->is_zero() ? Vector(x - alpha * grad) : p.g->prox(alpha, x - alpha * grad);
  const double mapping = (x - y).norm() / alpha;
  return mapping * (1.0 + (x0 - x).norm());
}

ReferenceSolution compute_reference(const ProblemInstance& inst, const ReferenceOptions& opts) {
  const CompositeProblem& p = inst.composite;
  ReferenceSolution ref;
  if (inst.closed_form_solution) {
    ref.x_star = *inst.closed_form_solution;
    ref.F_star = evaluate_composite(p, ref.x_star);
    ref.tolerance = 1e-10 * (1.0 + std::abs(ref.F_star));
    ref.provenance = "closed form";
    return ref;
  }

  RunConfig rc;
  rc.max_iter = opts.max_iter;
  rc.grad_tol = opts.grad_tol;
  rc.record_trace = false;

  if (!inst.convex) {
    std::mt19937_64 rng(inst.seed ^ 0x5eed5eed5eedULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opts.restarts; ++i) {
      Vector start = inst.x0;
      if (i > 0)
        for (Index j = 0; j < start.size(); ++j) start[j] = std::abs(normal(rng));
      const Trace t = run_solver(p, start, AdGD2{}, rc);
      const double F = evaluate_composite(p, t.x_final);
      if (F < best) {
        best = F;
        ref.x_star = t.x_final;
      }
    }
    ref.F_star = best;
    ref.tolerance = 0.0;
    ref.provenance = "best-found over " + std::to_string(opts.restarts) + " starts";
    return ref;
  }

  const Trace t = run_solver(p, inst.x0, AdGD2{}, rc);
  ref.x_star = t.x_final;
  ref.F_star = evaluate_composite(p, t.x_final);
  ref.tolerance = std::max(gap_estimate(p, t.x_final, inst.x0, t.alpha_final), 1e-12 * (1.0 + std::abs(ref.F_star)));
  ref.low_confidence = t.status != RunStatus::Converged;
  ref.provenance = "adgd2 run " + std::to_string(t.iterations) + " iterations " + status_name(t.status);
  return ref;
}

std::optional<ReferenceSolution> load_cached(const fs::path& file, const ProblemInstance& inst,
                                             const std::string& tag) {
  if (!fs::exists(file)) return std::nullopt;
  try {
    const json j = json::parse(read_file(file));
    if (j.at("problem") != problem_name(inst.kind) || j.at("seed") != inst.seed || j.at("options") != tag)
      return std::nullopt;
    if (j.at("parameters") != json(inst.parameters)) return std::nullopt;
    ReferenceSolution r;
    const auto xs = j.at("x_star").get<std::vector<double>>();
    if (static_cast<Index>(xs.size()) != inst.composite.dimension()) return std::nullopt;
    r.x_star = Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size()));
    r.F_star = j.at("F_star").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.provenance = j.at("provenance").get<std::string>();
    r.low_confidence = j.at("low_confidence").get<bool>();
    return r;
  } catch (const json::exception&) {
    return std::nullopt;  // unreadable cache entries are recomputed
  }
}

void store_cached(const fs::path& file, const ProblemInstance& inst, const std::string& tag,
                  const ReferenceSolution& r) {
  json j;
  j["problem"] = problem_name(inst.kind);
  j["seed"] = inst.seed;
  j["parameters"] = inst.parameters;
  j["options"] = tag;
  j["F_star"] = r.F_star;
  j["tolerance"] = r.tolerance;
  j["provenance"] = r.provenance;
  j["low_confidence"] = r.low_confidence;
  j["x_star"] = std::vector<double>(r.x_star.data(), r.x_star.data() + r.x_star.size());
  write_file(file, j.dump(1) + "\n");
}

struct Cell {
  std::size_t problem;
  std::size_t rule;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure by index.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

struct PreparedProblem {
  ProblemInstance inst;
  ReferenceSolution ref;
  double gap = 0.0;
};

std::vector<PreparedProblem> prepare(const ExperimentConfig& config) {
  std::vector<PreparedProblem> out(config.problems.size());
  ReferenceOptions opts;
  opts.cache_dir = config.out_dir / "reference_cache";
  parallel_for(out.size(), config.jobs, [&](std::size_t i) {
    out[i].inst = build_instance(config.problems[i], config.scale, config.seed);
    out[i].ref = make_reference(out[i].inst, opts);
    out[i].gap = target_gap(out[i].inst, out[i].ref, config.target);
  });
  return out;
}

fs::path cell_csv_path(const ExperimentConfig& config, ProblemKind kind, const StepsizeRule& rule) {
  return config.out_dir / problem_name(kind) / (rule_file_stem(rule) + ".csv");
}

}  // namespace

ProblemInstance build_instance(const ProblemSelection& sel, Scale scale, std::uint64_t seed) {
  ParameterMap p = default_parameters(sel.kind, scale);
  for (const auto& [k, v] : sel.parameters) {
    if (!p.contains(k)) throw ContractError("unknown parameter '" + k + "' for problem " + problem_name(sel.kind));
    p[k] = v;
  }
  return make_problem(sel.kind, p, seed);
}

std::string reference_cache_key(const ProblemInstance& inst) {
  std::ostringstream ss;
  ss << problem_name(inst.kind) << "_seed" << inst.seed;
  for (const auto& [k, v] : inst.parameters) ss << '_' << k << '=' << v;
  return ss.str();
}

ReferenceSolution make_reference(const ProblemInstance& inst, const ReferenceOptions& opts) {
  const std::string tag = options_tag(opts);
  fs::path file;
  if (opts.cache_dir) {
    file = *opts.cache_dir / (reference_cache_key(inst) + ".json");
    if (auto cached = load_cached(file, inst, tag)) return *cached;
  }
  ReferenceSolution ref = compute_reference(inst, opts);
  if (opts.cache_dir) store_cached(file, inst, tag, ref);
  return ref;
}

double target_gap(const ProblemInstance& inst, const ReferenceSolution& ref, double target) {
  if (!inst.convex) return 1e-4;
  return target * (1.0 + std::abs(ref.F_star));
}

std::optional<double> operations_to_gap(const Trace& trace, const CostModel& cost, double F_ref, double gap) {
  for (const auto& r : trace.rows)
    if (r.F - F_ref <= gap) return essential_operations(r.counters, cost);
  return std::nullopt;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, bool with_certificates) {
  if (config.problems.empty() || config.rules.empty()) throw ConfigError("experiment needs problems and rules");
  fs::create_directories(config.out_dir);
  const std::vector<PreparedProblem> problems = prepare(config);

  std::vector<Cell> cells;
  for (std::size_t p = 0; p < problems.size(); ++p)
    for (std::size_t r = 0; r < config.rules.size(); ++r) cells.push_back({p, r});

  ExperimentOutcome outcome;
  outcome.cells.resize(cells.size());
  std::vector<CertificateReport> reports(cells.size());

  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    const PreparedProblem& pp = problems[cells[i].problem];
    const StepsizeRule& rule = config.rules[cells[i].rule];
    RunConfig rc = config.run;
    rc.seed = config.seed;
    rc.record_iterates = with_certificates;
    if (config.stop_at_target) rc.stop_value = pp.ref.F_star + pp.gap;
    const Trace t = run_solver(pp.inst.composite, pp.inst.x0, rule, rc);

    CellResult& c = outcome.cells[i];
    c.problem = pp.inst.kind;
    c.rule = rule_file_stem(rule);
    c.status = t.status;
    c.iterations = t.iterations;
    c.final_F = t.rows.empty() ? t.F0 : t.rows.back().F;
    c.F_ref = pp.ref.F_star;
    c.reference_provenance = sanitize(pp.ref.provenance);
    c.metric = pp.inst.composite.cost.metric;
    c.counters = t.counters;
    c.essential_ops = essential_operations(t.counters, pp.inst.composite.cost);
    c.ops_to_target = operations_to_gap(t, pp.inst.composite.cost, pp.ref.F_star, pp.gap);
    c.csv_path = cell_csv_path(config, pp.inst.kind, rule);
    write_file(c.csv_path, trace_to_csv(t));

    if (with_certificates) {
      std::optional<ReferenceSolution> ref;
      if (pp.inst.convex && !pp.ref.low_confidence) ref = pp.ref;
      reports[i] = run_certificates(t, pp.inst.composite, ref, pp.inst.convex);
      for (auto& chk : reports[i].checks) chk.name = problem_name(pp.inst.kind) + "/" + c.rule + "/" + chk.name;
    }
  });

  write_file(config.out_dir / "summary.csv", summary_csv(outcome.cells));
  for (const auto& r : reports) outcome.certificates.append(r);
  if (config.plot) plot_directory(config.out_dir);
  return outcome;
}

CertificateReport check_experiment(const ExperimentConfig& config) {
  const std::vector<PreparedProblem> problems = prepare(config);
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < problems.size(); ++p)
    for (std::size_t r = 0; r < config.rules.size(); ++r) cells.push_back({p, r});

  std::vector<CertificateReport> reports(cells.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    const PreparedProblem& pp = problems[cells[i].problem];
    const StepsizeRule& rule = config.rules[cells[i].rule];
    RunConfig rc = config.run;
    rc.seed = config.seed;
    rc.record_iterates = true;
    if (config.stop_at_target) rc.stop_value = pp.ref.F_star + pp.gap;
    const Trace t = run_solver(pp.inst.composite, pp.inst.x0, rule, rc);
    const std::string prefix = problem_name(pp.inst.kind) + "/" + rule_file_stem(rule) + "/";

    CheckResult replay;
    replay.name = prefix + "replay_identical";
    replay.evaluated = 1;
    const fs::path csv = cell_csv_path(config, pp.inst.kind, rule);
    if (!fs::exists(csv)) {
      replay.passed = false;
      replay.worst_slack = -1.0;
      replay.note = "missing " + csv.string();
    } else if (read_file(csv) != trace_to_csv(t)) {
      replay.passed = false;
      replay.worst_slack = -1.0;
      replay.note = "stored trace differs from the replay";
    }
    reports[i].checks.push_back(replay);

    std::optional<ReferenceSolution> ref;
    if (pp.inst.convex && !pp.ref.low_confidence) ref = pp.ref;
    CertificateReport cert = run_certificates(t, pp.inst.composite, ref, pp.inst.convex);
    for (auto& chk : cert.checks) chk.name = prefix + chk.name;
    reports[i].append(cert);
  });

  CertificateReport all;
  for (const auto& r : reports) all.append(r);
  return all;
}

}  // namespace adprox
