#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "adprox/experiment.hpp"

namespace adprox {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(line, "expected a number, got '" + v + "'");
  return out;
}

std::int64_t to_int(const std::string& v, int line) {
  std::int64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(line, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  const std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "1") return true;
  if (l == "false" || l == "no" || l == "0") return false;
  fail(line, "expected true/false, got '" + v + "'");
}

// A [rule] section collects keys until the next section header.
struct PendingRule {
  int line = 0;
  std::string name;
  std::optional<double> s, r, alpha, c, L;
};

StepsizeRule finish_rule(const PendingRule& p) {
  auto reject = [&](bool present, const char* key) {
    if (present) fail(p.line, std::string("key '") + key + "' does not apply to rule " + p.name);
  };
  const std::string n = lower(p.name);
  StepsizeRule rule;
  if (n == "adgd2" || n == "adproxgd") {
    reject(p.s || p.r || p.alpha || p.c, "s/r/alpha/c");
    rule = AdGD2{p.L};
  } else if (n == "adgd1") {
    reject(p.s || p.r || p.alpha || p.c || p.L, "s/r/alpha/c/L");
    rule = AdGD1{};
  } else if (n == "old_adgd") {
    reject(p.s || p.r || p.alpha || p.c || p.L, "s/r/alpha/c/L");
    rule = OldAdGD{};
  } else if (n == "armijo") {
    reject(p.alpha || p.c || p.L, "alpha/c/L");
    rule = Armijo{p.s.value_or(1.2), p.r.value_or(0.5)};
  } else if (n == "fixed") {
    reject(p.s || p.r || p.c || p.L, "s/r/c/L");
    if (!p.alpha) fail(p.line, "rule fixed needs alpha");
    rule = FixedStep{*p.alpha};
  } else if (n == "bad_gd") {
    reject(p.s || p.r || p.alpha || p.L, "s/r/alpha/L");
    rule = BadGD{p.c.value_or(1.0)};
  } else if (n.empty()) {
    fail(p.line, "rule section without name");
  } else {
    fail(p.line, "unknown rule '" + p.name + "'");
  }
  try {
    validate_rule(rule);
  } catch (const ContractError& e) {
    fail(p.line, e.what());
  }
  return rule;
}

}  // namespace

std::vector<StepsizeRule> default_rule_matrix() {
  return {AdGD2{},           Armijo{1.2, 0.5}, Armijo{1.5, 0.8}, Armijo{1.1, 0.5}, Armijo{1.2, 0.9},
          Armijo{1.1, 0.9},  Armijo{1.5, 0.5}, Armijo{1.2, 0.8}, Armijo{1.1, 0.8}, Armijo{1.5, 0.9}};
}

std::vector<ProblemKind> experiment_problems() {
  return {ProblemKind::Mle, ProblemKind::Lrmc, ProblemKind::MinCurve, ProblemKind::Nmf, ProblemKind::DualEntropy};
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  for (auto k : experiment_problems()) c.problems.push_back({k, {}});
  c.rules = default_rule_matrix();
  c.run.max_iter = 200000;
  c.run.grad_tol = 1e-12;
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg = default_config();
  cfg.problems.clear();
  cfg.rules.clear();

  std::vector<PendingRule> rules;
  std::vector<ProblemSelection> sections;  // [problem NAME] overrides
  std::vector<ProblemKind> listed;
  bool listed_seen = false;

  enum class Section { None, Experiment, Problem, Rule } section = Section::None;
  std::set<std::string> seen_experiment_keys;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;

    if (l.front() == '[') {
      if (l.back() != ']') fail(line, "unterminated section header");
      std::istringstream hs(trim(l.substr(1, l.size() - 2)));
      std::string head, arg, extra;
      hs >> head >> arg >> extra;
      head = lower(head);
      if (!extra.empty()) fail(line, "too many words in section header");
      if (head == "experiment" && arg.empty()) {
        section = Section::Experiment;
      } else if (head == "problem" && !arg.empty()) {
        section = Section::Problem;
        try {
          sections.push_back({parse_problem_kind(lower(arg)), {}});
        } catch (const ContractError& e) {
          fail(line, e.what());
        }
      } else if (head == "rule" && arg.empty()) {
        section = Section::Rule;
        rules.push_back({});
        rules.back().line = line;
      } else {
        fail(line, "unknown section '" + l + "'");
      }
      continue;
    }

    const auto eq = l.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = lower(trim(l.substr(0, eq)));
    const std::string value = trim(l.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line, "empty key or value");

    switch (section) {
      case Section::None: fail(line, "key outside of a section");
      case Section::Experiment: {
        if (!seen_experiment_keys.insert(key).second) fail(line, "duplicate key '" + key + "'");
        if (key == "problems" || key == "problem") {
          listed_seen = true;
          std::istringstream ls(value);
          std::string item;
          while (std::getline(ls, item, ',')) {
            item = lower(trim(item));
            if (item == "all") {
              for (auto k : experiment_problems()) listed.push_back(k);
              continue;
            }
            try {
              listed.push_back(parse_problem_kind(item));
            } catch (const ContractError& e) {
              fail(line, e.what());
            }
          }
        } else if (key == "seed") {
          const auto s = to_int(value, line);
          if (s < 0) fail(line, "seed must be nonnegative");
          cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "scale") {
          const std::string v = lower(value);
          if (v == "desk") cfg.scale = Scale::Desk;
          else if (v == "paper") cfg.scale = Scale::Paper;
          else fail(line, "scale must be desk or paper");
        } else if (key == "out") {
          cfg.out_dir = value;
        } else if (key == "plot") {
          cfg.plot = to_bool(value, line);
        } else if (key == "max_iter") {
          cfg.run.max_iter = to_int(value, line);
        } else if (key == "grad_tol") {
          cfg.run.grad_tol = to_double(value, line);
        } else if (key == "alpha0") {
          cfg.run.alpha0 = to_double(value, line);
        } else if (key == "alpha0_policy") {
          const std::string v = lower(value);
          if (v == "search") cfg.run.alpha0_policy = Alpha0Policy::Search;
          else if (v == "given") cfg.run.alpha0_policy = Alpha0Policy::Given;
          else fail(line, "alpha0_policy must be search or given");
        } else if (key == "search_cap") {
          cfg.run.search_cap = to_double(value, line);
        } else if (key == "jobs") {
          const auto j = to_int(value, line);
          if (j < 1 || j > 256) fail(line, "jobs must lie in [1, 256]");
          cfg.jobs = static_cast<int>(j);
        } else if (key == "stop_at_target") {
          cfg.stop_at_target = to_bool(value, line);
        } else if (key == "target") {
          cfg.target = to_double(value, line);
          if (!(cfg.target > 0.0)) fail(line, "target must be positive");
        } else {
          fail(line, "unknown key '" + key + "' in [experiment]");
        }
        break;
      }
      case Section::Problem: {
        auto& params = sections.back().parameters;
        const ParameterMap defaults = default_parameters(sections.back().kind, Scale::Desk);
        if (!defaults.contains(key))
          fail(line, "unknown parameter '" + key + "' for problem " + problem_name(sections.back().kind));
        if (!params.emplace(key, to_double(value, line)).second) fail(line, "duplicate key '" + key + "'");
        break;
      }
      case Section::Rule: {
        auto& r = rules.back();
        auto set = [&](std::optional<double>& slot) {
          if (slot) fail(line, "duplicate key '" + key + "'");
          slot = to_double(value, line);
        };
        if (key == "name") {
          if (!r.name.empty()) fail(line, "duplicate key 'name'");
          r.name = value;
        } else if (key == "s") set(r.s);
        else if (key == "r") set(r.r);
        else if (key == "alpha") set(r.alpha);
        else if (key == "c") set(r.c);
        else if (key == "l") set(r.L);
        else fail(line, "unknown key '" + key + "' in [rule]");
        break;
      }
    }
  }

  // Problems: the explicit list, else every [problem] section, else all five.
  if (listed_seen) {
    for (auto k : listed) cfg.problems.push_back({k, {}});
  } else {
    for (const auto& s : sections) cfg.problems.push_back({s.kind, {}});
  }
  if (cfg.problems.empty())
    for (auto k : experiment_problems()) cfg.problems.push_back({k, {}});
  for (auto& p : cfg.problems)
    for (const auto& s : sections)
      if (s.kind == p.kind)
        for (const auto& [k, v] : s.parameters) p.parameters[k] = v;

  for (const auto& r : rules) cfg.rules.push_back(finish_rule(r));
  if (cfg.rules.empty()) cfg.rules = default_rule_matrix();

  try {
    validate_config(cfg.run);
  } catch (const ContractError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace adprox
