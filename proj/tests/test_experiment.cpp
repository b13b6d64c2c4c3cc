#include <doctest.h>

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adprox/experiment.hpp"

using namespace adprox;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("adprox_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

ExperimentConfig small_config(const fs::path& out) {
  return parse_config(
      "[experiment]\n"
      "problems = quadratic, logistic\n"
      "seed = 5\n"
      "max_iter = 300\n"
      "stop_at_target = false\n"
      "out = " + out.string() + "\n"
      "[problem quadratic]\n"
      "n = 8\n"
      "condition_number = 20\n"
      "[problem logistic]\n"
      "d = 4\n"
      "samples = 16\n"
      "[rule]\n"
      "name = adgd2\n"
      "[rule]\n"
      "name = armijo\n"
      "s = 1.5\n"
      "r = 0.8\n");
}

}  // namespace

TEST_CASE("config errors name the offending line") {
  CHECK(error_of("[experiment]\nseed = 1\nbogus = 2\n").find("line 3") != std::string::npos);
  CHECK(error_of("[experiment]\nseed = 1\nbogus = 2\n").find("bogus") != std::string::npos);
  CHECK(error_of("seed = 1\n").find("line 1") != std::string::npos);
  CHECK(error_of("[experiment]\n\n# note\nseed = x\n").find("line 4") != std::string::npos);
  CHECK(error_of("[rule]\nname = armijo\nc = 2\n").find("line 1") != std::string::npos);
  CHECK(error_of("[rule]\nname = armijo\ns = 0.9\n").find("line 1") != std::string::npos);
  CHECK(error_of("[problem mle]\nq = 3\n").find("line 2") != std::string::npos);
  CHECK(error_of("[problem nothing]\n").find("line 1") != std::string::npos);
  CHECK(error_of("[experiment]\nseed = 1\nseed = 2\n").find("line 3") != std::string::npos);
  CHECK(error_of("[experiment\n").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/adprox.ini"), ConfigError);
}

TEST_CASE("empty config gives the default matrix") {
  const ExperimentConfig c = parse_config("");
  CHECK(c.rules.size() == 10);
  CHECK(std::holds_alternative<AdGD2>(c.rules.front()));
  int armijo = 0;
  for (const auto& r : c.rules) armijo += std::holds_alternative<Armijo>(r);
  CHECK(armijo == 9);
  CHECK(c.problems.size() == 5);
  CHECK(c.scale == Scale::Desk);
}

TEST_CASE("config sections override parameters and rules") {
  const ExperimentConfig c = small_config("/tmp/x");
  REQUIRE(c.problems.size() == 2);
  CHECK(c.problems[0].kind == ProblemKind::Quadratic);
  CHECK(c.problems[0].parameters.at("n") == 8);
  CHECK(c.seed == 5);
  CHECK(c.run.max_iter == 300);
  REQUIRE(c.rules.size() == 2);
  CHECK(std::get<Armijo>(c.rules[1]).s == 1.5);
  CHECK(std::get<Armijo>(c.rules[1]).r == 0.8);
  CHECK(rule_file_stem(c.rules[1]).find("armijo") == 0);
}

TEST_CASE("trace csv round trips exactly") {
  const auto inst = make_logistic(3, 5, 20);
  RunConfig rc;
  rc.max_iter = 50;
  const Trace t = run_solver(inst.composite, inst.x0, Armijo{1.2, 0.5}, rc);
  const std::string text = trace_to_csv(t);
  CHECK(text.substr(0, text.find('\n')) == trace_csv_header());
  const auto rows = parse_trace_csv(text);
  REQUIRE(rows.size() == t.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].iter == t.rows[i].k);
    CHECK(rows[i].alpha == t.rows[i].alpha);
    CHECK(rows[i].F == t.rows[i].F);
    CHECK(rows[i].counters == t.rows[i].counters);
  }
  CHECK_THROWS_AS(parse_trace_csv("iter,alpha\n1,2\n"), ContractError);
  CHECK_THROWS_AS(parse_trace_csv(trace_csv_header() + "\n1,2,3\n"), ContractError);
}

TEST_CASE("essential operation counting") {
  using E = OpEvent;
  // three linesearch trials, the last value reused by the accepted gradient
  const std::vector<E> nmf{E::Value, E::Value, E::Value, E::ValueReused, E::Gradient, E::Prox};
  const Counters c = count_essential(ProxKind::Projection, nmf);
  CHECK(c.func_evals == 3);
  CHECK(c.reused_evals == 1);
  CHECK(c.grad_evals == 1);
  CHECK(c.projection_count == 1);
  const CostModel mm = CostModel::for_metric(EssentialMetric::MatMulUnits, ProxKind::Projection);
  CHECK(essential_operations(c, mm) == 3 * 1 + (3 - 1));

  const std::vector<E> lrmc{E::Gradient, E::Prox};
  CHECK(count_essential(ProxKind::Svd, lrmc).svd_count == 1);
  CHECK(count_essential(ProxKind::Svd, lrmc).eig_count == 0);

  const std::vector<E> mle{E::Gradient, E::Prox, E::Value, E::Prox, E::Value};
  const Counters m = count_essential(ProxKind::Eigendecomposition, mle);
  CHECK(m.eig_count == 2);
  CHECK(essential_operations(m, CostModel::for_metric(EssentialMetric::Eigendecompositions, ProxKind::Eigendecomposition)) == 2);

  const std::vector<E> bad{static_cast<E>(17)};
  CHECK_THROWS_AS(count_essential(ProxKind::Identity, bad), ContractError);
  const std::vector<E> over{E::ValueReused};
  CHECK_THROWS_AS(count_essential(ProxKind::Identity, over), ContractError);
}

TEST_CASE("quadratic reference matches the solution of the linear system") {
  const ProblemInstance inst = build_instance({ProblemKind::Quadratic, {{"n", 12}, {"condition_number", 50}}}, Scale::Desk, 9);
  const auto& f = *inst.composite.f;
  const Index n = inst.composite.dimension();
  // Hessian column by column from the affine gradient
  const Vector g0 = f.gradient(Vector::Zero(n));
  Matrix H(n, n);
  for (Index i = 0; i < n; ++i) H.col(i) = f.gradient(Vector::Unit(n, i)) - g0;
  const Vector xs = -H.ldlt().solve(g0);
  const double Fs = f.value(xs);

  const fs::path dir = scratch_dir("reference");
  ReferenceOptions opts;
  opts.cache_dir = dir;
  const ReferenceSolution r = make_reference(inst, opts);
  CHECK(std::abs(r.F_star - Fs) <= 1e-10 * (1 + std::abs(Fs)));
  CHECK((r.x_star - xs).norm() <= 1e-8 * (1 + xs.norm()));
  CHECK(r.provenance == "closed form");

  const fs::path file = dir / (reference_cache_key(inst) + ".json");
  REQUIRE(fs::exists(file));
  const auto stamp = fs::last_write_time(file);
  const ReferenceSolution again = make_reference(inst, opts);
  CHECK(again.F_star == r.F_star);
  CHECK(fs::last_write_time(file) == stamp);
  fs::remove_all(dir);
}

TEST_CASE("nonconvex reference is labelled best-found") {
  const ProblemInstance inst = build_instance({ProblemKind::Nmf, {{"n", 8}, {"r", 2}}}, Scale::Desk, 2);
  ReferenceOptions opts;
  opts.max_iter = 2000;
  const ReferenceSolution r = make_reference(inst, opts);
  CHECK(r.provenance == "best-found over 10 starts");
  CHECK(r.F_star <= evaluate_composite(inst.composite, inst.x0));
}

TEST_CASE("experiment writes one csv per cell, a summary, and reruns byte-identically") {
  const fs::path dir = scratch_dir("experiment");
  ExperimentConfig cfg = small_config(dir);
  const ExperimentOutcome out = run_experiment(cfg);
  REQUIRE(out.cells.size() == 4);

  const std::string summary = slurp(dir / "summary.csv");
  std::istringstream ss(summary);
  std::string line;
  int rows = -1;
  while (std::getline(ss, line)) rows += !line.empty();
  CHECK(rows == 4);

  std::map<fs::path, std::string> first;
  for (const auto& c : out.cells) {
    REQUIRE(fs::exists(c.csv_path));
    first[c.csv_path] = slurp(c.csv_path);
    // summary totals are the counters of the last trace row
    const auto trace = parse_trace_csv(first[c.csv_path]);
    REQUIRE(!trace.empty());
    CHECK(trace.back().counters == c.counters);
    CHECK(trace.back().F == c.final_F);
  }

  cfg.jobs = 3;
  run_experiment(cfg);
  for (const auto& [path, text] : first) CHECK(slurp(path) == text);
  CHECK(slurp(dir / "summary.csv") == summary);

  const CertificateReport check = check_experiment(cfg);
  CHECK(check.passed());

  // plotting reads the traces and leaves them untouched
  const auto svgs = plot_directory(dir);
  CHECK(svgs.size() == 2);
  for (const auto& s : svgs) CHECK(slurp(s).find("<svg") == 0);
  for (const auto& [path, text] : first) CHECK(slurp(path) == text);
  CHECK(slurp(dir / "summary.csv") == summary);

  // a tampered trace is reported by the replay check
  {
    std::ofstream(first.begin()->first, std::ios::app) << "tampered\n";
  }
  CHECK(!check_experiment(cfg).passed());
  fs::remove_all(dir);
}

TEST_CASE("single cell experiment") {
  const fs::path dir = scratch_dir("single");
  ExperimentConfig cfg = small_config(dir);
  cfg.problems.resize(1);
  cfg.rules.resize(1);
  const ExperimentOutcome out = run_experiment(cfg);
  REQUIRE(out.cells.size() == 1);
  std::size_t csvs = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.path().extension() == ".csv" && e.path().parent_path() != dir) ++csvs;
  CHECK(csvs == 1);
  const auto& c = out.cells[0];
  CHECK(c.ops_to_target.has_value());
  CHECK(*c.ops_to_target <= c.essential_ops);
  fs::remove_all(dir);
}
