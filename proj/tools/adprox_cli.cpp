// Batch front end: generate, run, check, plot, reference.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adprox/experiment.hpp"

namespace fs = std::filesystem;
using namespace adprox;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kDiagnostics = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool desk = false;
  bool paper = false;
  std::optional<int> jobs;
  bool check = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_check) {
  cmd->add_option("--config", c.config, "Experiment config file");
  cmd->add_option("--seed", c.seed, "Generator seed (overrides the config)");
  cmd->add_option("--out", c.out, "Output directory (overrides the config)");
  auto* desk = cmd->add_flag("--desk-scale", c.desk, "Small instances (default)");
  auto* paper = cmd->add_flag("--paper-scale", c.paper, "Instance sizes of the original experiments");
  desk->excludes(paper);
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 256));
  if (with_check) cmd->add_flag("--check", c.check, "Run the certificates and fail on violations");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? default_config() : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.desk) cfg.scale = Scale::Desk;
  if (c.paper) cfg.scale = Scale::Paper;
  if (c.jobs) cfg.jobs = *c.jobs;
  return cfg;
}

int report_certificates(const CertificateReport& report, const fs::path& file) {
  const std::string text = report.to_text();
  fs::create_directories(file.parent_path());
  std::ofstream(file) << text;
  std::size_t failed = 0;
  for (const auto& c : report.checks)
    if (!c.passed) {
      ++failed;
      std::cerr << "FAIL " << c.name << " slack " << c.worst_slack << " at " << c.worst_index << " " << c.note << "\n";
    }
  std::cout << report.checks.size() << " checks, " << failed << " failed; report in " << file.string() << "\n";
  return failed ? kDiagnostics : kOk;
}

int cmd_generate(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  for (const auto& sel : cfg.problems) {
    const ProblemInstance inst = build_instance(sel, cfg.scale, cfg.seed);
    nlohmann::json j;
    j["problem"] = problem_name(inst.kind);
    j["seed"] = inst.seed;
    j["parameters"] = inst.parameters;
    j["dimension"] = inst.composite.dimension();
    j["convex"] = inst.convex;
    j["regularizer"] = inst.composite.g->describe();
    j["metric"] = metric_name(inst.composite.cost.metric);
    j["F0"] = evaluate_composite(inst.composite, inst.x0);
    j["x0"] = std::vector<double>(inst.x0.data(), inst.x0.data() + inst.x0.size());
    const fs::path file = cfg.out_dir / "instances" / (reference_cache_key(inst) + ".json");
    fs::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw ContractError("cannot write " + file.string());
    out << j.dump(1) << "\n";
    std::cout << problem_name(inst.kind) << ": dimension " << inst.composite.dimension() << " -> " << file.string()
              << "\n";
  }
  return kOk;
}

int cmd_reference(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  ReferenceOptions opts;
  opts.cache_dir = cfg.out_dir / "reference_cache";
  for (const auto& sel : cfg.problems) {
    const ProblemInstance inst = build_instance(sel, cfg.scale, cfg.seed);
    const ReferenceSolution ref = make_reference(inst, opts);
    std::printf("%-12s F_ref %.15g  tol %.3g  %s%s\n", problem_name(inst.kind).c_str(), ref.F_star, ref.tolerance,
                ref.provenance.c_str(), ref.low_confidence ? "  (low confidence)" : "");
  }
  return kOk;
}

int cmd_run(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const ExperimentOutcome outcome = run_experiment(cfg, c.check);
  for (const auto& cell : outcome.cells) {
    std::printf("%-12s %-16s %-9s iters %-7lld F-F_ref %-11.3e ops %-10.6g to-target %s\n",
                problem_name(cell.problem).c_str(), cell.rule.c_str(), status_name(cell.status).c_str(),
                static_cast<long long>(cell.iterations), cell.final_F - cell.F_ref, cell.essential_ops,
                cell.ops_to_target ? std::to_string(static_cast<long long>(*cell.ops_to_target)).c_str() : "-");
  }
  std::cout << "summary: " << (cfg.out_dir / "summary.csv").string() << "\n";
  if (c.check) return report_certificates(outcome.certificates, cfg.out_dir / "certificates.txt");
  return kOk;
}

int cmd_check(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  return report_certificates(check_experiment(cfg), cfg.out_dir / "certificates.txt");
}

int cmd_plot(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  for (const auto& f : plot_directory(cfg.out_dir)) std::cout << f.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive proximal gradient experiments"};
  app.require_subcommand(1);
  Common common;
  auto* generate = app.add_subcommand("generate", "Write the seeded problem instances");
  auto* run = app.add_subcommand("run", "Run the rule x problem matrix");
  auto* check = app.add_subcommand("check", "Replay stored traces and run the certificates");
  auto* plot = app.add_subcommand("plot", "Draw gap versus essential operations from stored traces");
  auto* reference = app.add_subcommand("reference", "Compute or load cached reference solutions");
  add_common(generate, common, false);
  add_common(run, common, true);
  add_common(check, common, false);
  add_common(plot, common, false);
  add_common(reference, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(common);
    if (run->parsed()) return cmd_run(common);
    if (check->parsed()) return cmd_check(common);
    if (plot->parsed()) return cmd_plot(common);
    if (reference->parsed()) return cmd_reference(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
