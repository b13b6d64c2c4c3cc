#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adprox/diagnostics.hpp"
#include "adprox/problems.hpp"
#include "adprox/solvers.hpp"

namespace adprox {

/// Malformed configuration text; the message carries the line number.
class ConfigError : public ContractError {
 public:
  using ContractError::ContractError;
};

struct ProblemSelection {
  ProblemKind kind = ProblemKind::Mle;
  ParameterMap parameters;  // overrides on top of the scale defaults
};

struct ExperimentConfig {
  std::vector<ProblemSelection> problems;
  std::vector<StepsizeRule> rules;
  Scale scale = Scale::Desk;
  std::uint64_t seed = 0;
  RunConfig run;
  std::filesystem::path out_dir = "results";
  bool plot = false;
  int jobs = 1;
  /// Relative accuracy for the "operations to target" column.
  double target = 1e-6;
  /// Stop each cell once the target gap is reached.
  bool stop_at_target = true;
};

/// AdProxGD followed by the nine Armijo (s, r) pairs.
std::vector<StepsizeRule> default_rule_matrix();
/// The five composite problems.
std::vector<ProblemKind> experiment_problems();

/// Parses the INI-like format documented in the README. Unknown sections or keys
/// throw ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Defaults: all five problems, default rule matrix, desk scale.
ExperimentConfig default_config();

/// Instance for one selection at the configured scale and seed.
ProblemInstance build_instance(const ProblemSelection& sel, Scale scale, std::uint64_t seed);

struct ReferenceOptions {
  double grad_tol = 1e-12;
  std::int64_t max_iter = 1000000;
  int restarts = 10;  // nonconvex problems: best found over this many starts
  std::optional<std::filesystem::path> cache_dir;
};

/// Closed form when available, otherwise a long adaptive run (best of several starts
/// for nonconvex problems). Cached on disk when `cache_dir` is set.
ReferenceSolution make_reference(const ProblemInstance& inst, const ReferenceOptions& opts);
/// Cache file name derived from (problem, seed, parameters).
std::string reference_cache_key(const ProblemInstance& inst);

// --- per-cell outputs -----------------------------------------------------------

/// Column header of every trace CSV.
std::string trace_csv_header();
/// Full CSV text for one trace; numbers printed with 17 significant digits.
std::string trace_to_csv(const Trace& trace);

struct CsvRow {
  std::int64_t iter = 0;
  double alpha = 0.0, theta = 0.0, Lk = 0.0, F = 0.0, step_norm = 0.0;
  Counters counters;
};
std::vector<CsvRow> parse_trace_csv(const std::string& text);

struct CellResult {
  ProblemKind problem = ProblemKind::Mle;
  std::string rule;
  RunStatus status = RunStatus::MaxIter;
  std::int64_t iterations = 0;
  double final_F = 0.0;
  double F_ref = 0.0;
  std::string reference_provenance;
  EssentialMetric metric = EssentialMetric::GradientsAndValues;
  double essential_ops = 0.0;
  /// Essential operations when F - F_ref first drops below the target; nullopt if never.
  std::optional<double> ops_to_target;
  Counters counters;
  std::filesystem::path csv_path;
};

/// Target gap used for the "reached" test: target * (1 + |F_ref|), or the
/// best-found slack for nonconvex problems.
double target_gap(const ProblemInstance& inst, const ReferenceSolution& ref, double target);

/// First essential-operation count at which F - F_ref <= gap.
std::optional<double> operations_to_gap(const Trace& trace, const CostModel& cost, double F_ref, double gap);

std::string summary_csv(const std::vector<CellResult>& cells);

/// File-name friendly rule name, e.g. "armijo_1.2_0.5".
std::string rule_file_stem(const StepsizeRule& rule);

struct ExperimentOutcome {
  std::vector<CellResult> cells;
  CertificateReport certificates;  // filled when certificates were requested
};

/// Runs the (problem x rule) matrix and writes CSVs, summary and optional plots.
/// Cells run on up to config.jobs threads; outputs do not depend on the thread count.
ExperimentOutcome run_experiment(const ExperimentConfig& config, bool with_certificates = false);

/// Replays every cell, byte-compares the CSV against the stored file and runs the
/// certificates. Returns the combined report; mismatches appear as failed checks.
CertificateReport check_experiment(const ExperimentConfig& config);

// --- plots ----------------------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::vector<double> x;  // essential operations
  std::vector<double> y;  // F - F_ref
};

/// Log-scale gap versus essential operations.
std::string render_svg(const std::string& title, const std::string& x_label, const std::vector<PlotSeries>& series);

/// Reads summary.csv and the trace CSVs in `out_dir` and writes one SVG per problem.
std::vector<std::filesystem::path> plot_directory(const std::filesystem::path& out_dir);

}  // namespace adprox
