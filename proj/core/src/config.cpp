#include "compopt/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace compopt {

namespace {

const std::vector<std::string> kAlgorithmNames = {
    "scdf", "scdf-svrg", "scdf-saga", "sgd", "sgd-exact", "scgd", "c-svrg"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Parser {
  std::vector<ParseError> errors;

  void err(int line, std::string msg) { errors.push_back({line, std::move(msg)}); }

  std::optional<double> as_double(int line, const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      err(line, "invalid number for '" + key + "': " + v);
      return std::nullopt;
    }
  }

  std::optional<long long> as_int(int line, const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long long i = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return i;
    } catch (...) {
      err(line, "invalid integer for '" + key + "': " + v);
      return std::nullopt;
    }
  }

  std::optional<bool> as_bool(int line, const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "no") return false;
    err(line, "invalid boolean for '" + key + "' (use on/off): " + v);
    return std::nullopt;
  }
};

}  // namespace

ParseResult parse_config(const std::string& text) {
  Parser p;
  ExperimentConfig cfg;
  bool have_problem_seed = false;

  AlgorithmSpec* current = nullptr;
  std::map<std::string, int> label_lines;
  std::map<std::string, bool> algo_seed_seen;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        p.err(lineno, "malformed section header: " + raw);
        continue;
      }
      const std::string label = trim(line.substr(1, line.size() - 2));
      if (label.empty()) {
        p.err(lineno, "empty section label");
        continue;
      }
      const auto prev = label_lines.find(label);
      if (prev != label_lines.end()) {
        p.err(lineno, "duplicate algorithm label '" + label + "' (first defined at line " +
                          std::to_string(prev->second) + ")");
        current = nullptr;
        continue;
      }
      label_lines[label] = lineno;
      AlgorithmSpec spec;
      spec.label = label;
      spec.line = lineno;
      cfg.algorithms.push_back(std::move(spec));
      current = &cfg.algorithms.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.err(lineno, "expected 'key = value': " + raw);
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      p.err(lineno, "empty key or value: " + raw);
      continue;
    }

    if (!current) {
      // Global problem/harness keys.
      if (key == "problem") {
        if (value == "mean-variance")
          cfg.problem.family = ProblemFamily::kMeanVariance;
        else if (value == "bellman")
          cfg.problem.family = ProblemFamily::kBellman;
        else if (value == "split-quadratic")
          cfg.problem.family = ProblemFamily::kSplitQuadratic;
        else
          p.err(lineno, "unknown problem family: " + value);
      } else if (key == "n") {
        if (auto v = p.as_int(lineno, key, value)) cfg.problem.n = static_cast<int>(*v);
      } else if (key == "m") {
        if (auto v = p.as_int(lineno, key, value)) cfg.problem.m = static_cast<int>(*v);
      } else if (key == "N") {
        if (auto v = p.as_int(lineno, key, value)) cfg.problem.N = static_cast<int>(*v);
      } else if (key == "M") {
        if (auto v = p.as_int(lineno, key, value)) cfg.problem.M = static_cast<int>(*v);
      } else if (key == "kappa") {
        cfg.problem.kappas.clear();
        for (const auto& item : split_list(value))
          if (auto v = p.as_double(lineno, key, item)) cfg.problem.kappas.push_back(*v);
      } else if (key == "lambda") {
        if (auto v = p.as_double(lineno, key, value)) cfg.problem.lambda = *v;
      } else if (key == "seed") {
        if (auto v = p.as_int(lineno, key, value)) {
          cfg.problem.seed = static_cast<std::uint64_t>(*v);
          have_problem_seed = true;
        }
      } else if (key == "explicit_strong_convexity") {
        if (auto v = p.as_bool(lineno, key, value)) cfg.problem.explicit_strong_convexity = *v;
      } else if (key == "batch") {
        cfg.batches.clear();
        for (const auto& item : split_list(value))
          if (auto v = p.as_int(lineno, key, item)) cfg.batches.push_back(static_cast<int>(*v));
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "record_every") {
        if (auto v = p.as_int(lineno, key, value)) cfg.record_every = static_cast<int>(*v);
      } else if (key == "plot") {
        if (auto v = p.as_bool(lineno, key, value)) cfg.plot = *v;
      } else if (key == "timing") {
        if (auto v = p.as_bool(lineno, key, value)) cfg.timing = *v;
      } else if (key == "x0") {
        if (value == "zero" || value == "gaussian")
          cfg.x0 = value;
        else
          p.err(lineno, "x0 must be 'zero' or 'gaussian'");
      } else {
        p.err(lineno, "unknown key '" + key + "'");
      }
      continue;
    }

    // Per-algorithm keys.
    AlgorithmSpec& a = *current;
    if (key == "algorithm") {
      if (std::find(kAlgorithmNames.begin(), kAlgorithmNames.end(), value) ==
          kAlgorithmNames.end())
        p.err(lineno, "invalid algorithm name '" + value + "'");
      else
        a.name = value;
    } else if (key == "eta") {
      if (auto v = p.as_double(lineno, key, value)) a.run.eta = *v;
    } else if (key == "epochs") {
      if (auto v = p.as_int(lineno, key, value)) a.run.epochs = static_cast<int>(*v);
    } else if (key == "inner_iters") {
      if (auto v = p.as_int(lineno, key, value)) a.run.inner_iters = static_cast<int>(*v);
    } else if (key == "batch") {
      if (auto v = p.as_int(lineno, key, value)) {
        a.run.batch = static_cast<int>(*v);
        a.batch_from_cell = false;
      }
    } else if (key == "seed") {
      if (auto v = p.as_int(lineno, key, value)) {
        a.run.seed = static_cast<std::uint64_t>(*v);
        algo_seed_seen[a.label] = true;
      }
    } else if (key == "max_queries") {
      if (auto v = p.as_int(lineno, key, value))
        a.run.max_g_queries = static_cast<std::uint64_t>(*v);
    } else if (key == "inner_mode") {
      if (value == "single")
        a.sgd_mode = SgdInnerMode::kSingleSample;
      else if (value == "exact")
        a.sgd_mode = SgdInnerMode::kExactInner;
      else
        p.err(lineno, "inner_mode must be 'single' or 'exact'");
    } else if (key == "schedule") {
      if (value == "constant")
        a.scgd.kind = ScgdSchedule::kConstant;
      else if (value == "polynomial")
        a.scgd.kind = ScgdSchedule::kPolynomial;
      else
        p.err(lineno, "schedule must be 'constant' or 'polynomial'");
    } else if (key == "alpha" || key == "a") {
      if (auto v = p.as_double(lineno, key, value)) a.scgd.alpha = *v;
    } else if (key == "beta_y" || key == "b") {
      if (auto v = p.as_double(lineno, key, value)) a.scgd.beta = *v;
    } else {
      p.err(lineno, "unknown key '" + key + "' in section [" + a.label + "]");
    }
  }

  // Cross-field validation.
  if (!have_problem_seed) p.err(0, "missing required global 'seed'");
  if (cfg.algorithms.empty()) p.err(0, "config declares no algorithms");
  if (cfg.problem.kappas.empty()) p.err(0, "empty kappa list");
  if (cfg.batches.empty()) p.err(0, "empty batch list");
  for (const auto& a : cfg.algorithms) {
    if (a.name.empty())
      p.err(a.line, "section [" + a.label + "] is missing 'algorithm'");
    if (!algo_seed_seen.count(a.label))
      p.err(a.line, "section [" + a.label + "] is missing 'seed' (seeds must be explicit)");
  }
  switch (cfg.problem.family) {
    case ProblemFamily::kMeanVariance:
      if (cfg.problem.n < 2) p.err(0, "mean-variance requires n >= 2");
      if (cfg.problem.N < 1) p.err(0, "mean-variance requires N >= 1");
      for (double k : cfg.problem.kappas)
        if (k < 1.0) p.err(0, "kappa must be >= 1");
      break;
    case ProblemFamily::kBellman:
      if (cfg.problem.m < 1) p.err(0, "bellman requires m >= 1");
      if (cfg.problem.M < 1 || cfg.problem.N < 1)
        p.err(0, "bellman requires M >= 1 and N >= 1");
      break;
    case ProblemFamily::kSplitQuadratic:
      if (cfg.problem.N < 1) p.err(0, "split-quadratic requires N >= 1");
      break;
  }

  ParseResult result;
  result.errors = std::move(p.errors);
  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

}  // namespace compopt
