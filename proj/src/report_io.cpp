#include <cmath>
#include <cstdio>
#include <sstream>

#include "adprox/experiment.hpp"

namespace adprox {
namespace {

// %.17g round-trips every double; nan/inf spelled the same way on every platform.
std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw ContractError("bad number in csv: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string trace_csv_header() {
  return "iter,alpha,theta,Lk,F,step_norm,grad_evals,func_evals,prox_evals,svd_count,eig_count,projection_count,"
         "reused_evals";
}

std::string trace_to_csv(const Trace& trace) {
  std::string out = trace_csv_header();
  out += '\n';
  for (const auto& r : trace.rows) {
    const Counters& c = r.counters;
    out += std::to_string(r.k) + ',' + g17(r.alpha) + ',' + g17(r.theta) + ',' + g17(r.curvature) + ',' + g17(r.F) +
           ',' + g17(r.step_norm) + ',' + std::to_string(c.grad_evals) + ',' + std::to_string(c.func_evals) + ',' +
           std::to_string(c.prox_evals) + ',' + std::to_string(c.svd_count) + ',' + std::to_string(c.eig_count) + ',' +
           std::to_string(c.projection_count) + ',' + std::to_string(c.reused_evals) + '\n';
  }
  return out;
}

std::vector<CsvRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != trace_csv_header()) throw ContractError("trace csv: unexpected header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) throw ContractError("trace csv: expected 13 columns, got " + std::to_string(f.size()));
    CsvRow r;
    r.iter = std::stoll(f[0]);
    r.alpha = parse_double(f[1]);
    r.theta = parse_double(f[2]);
    r.Lk = parse_double(f[3]);
    r.F = parse_double(f[4]);
    r.step_norm = parse_double(f[5]);
    r.counters.grad_evals = std::stoll(f[6]);
    r.counters.func_evals = std::stoll(f[7]);
    r.counters.prox_evals = std::stoll(f[8]);
    r.counters.svd_count = std::stoll(f[9]);
    r.counters.eig_count = std::stoll(f[10]);
    r.counters.projection_count = std::stoll(f[11]);
    r.counters.reused_evals = std::stoll(f[12]);
    rows.push_back(r);
  }
  return rows;
}

std::string rule_file_stem(const StepsizeRule& rule) {
  std::string s;
  for (char ch : rule_name(rule)) {
    if (ch == '(' || ch == ',' || ch == '=') s += '_';
    else if (ch != ')') s += ch;
  }
  return s;
}

std::string summary_csv(const std::vector<CellResult>& cells) {
  std::string out =
      "problem,rule,status,iterations,final_F,F_ref,final_gap,metric,essential_ops,ops_to_target,grad_evals,"
      "func_evals,prox_evals,svd_count,eig_count,projection_count,reused_evals,reference\n";
  for (const auto& c : cells) {
    const Counters& k = c.counters;
    out += problem_name(c.problem) + ',' + c.rule + ',' + status_name(c.status) + ',' + std::to_string(c.iterations) +
           ',' + g17(c.final_F) + ',' + g17(c.F_ref) + ',' + g17(c.final_F - c.F_ref) + ',' + metric_name(c.metric) +
           ',' + g17(c.essential_ops) + ',' + (c.ops_to_target ? g17(*c.ops_to_target) : std::string()) + ',' +
           std::to_string(k.grad_evals) + ',' + std::to_string(k.func_evals) + ',' + std::to_string(k.prox_evals) +
           ',' + std::to_string(k.svd_count) + ',' + std::to_string(k.eig_count) + ',' +
           std::to_string(k.projection_count) + ',' + std::to_string(k.reused_evals) + ',' + c.reference_provenance +
           '\n';
  }
  return out;
}

}  // namespace adprox
