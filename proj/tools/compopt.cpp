// compopt: configuration-driven experiment runner for composition
// optimization. Subcommands:
//   run <config>        execute every (problem cell, algorithm) run
//   check <config>      validate the config and exit
//   gradcheck           finite-difference check of a built-in problem
//   bounds              evaluate the step/batch-size bound evaluators
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "compopt/config.hpp"
#include "compopt/oracles.hpp"
#include "compopt/rng.hpp"
#include "compopt/runner.hpp"
#include "compopt/theory.hpp"

namespace {

int default_jobs() {
  if (const char* env = std::getenv("COMPOPT_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void print_errors(const std::string& path, const std::vector<compopt::ParseError>& errors) {
  for (const auto& e : errors) {
    if (e.line > 0)
      std::cerr << path << ":" << e.line << ": " << e.message << "\n";
    else
      std::cerr << path << ": " << e.message << "\n";
  }
}

// Constants file: flat `key = value` lines with keys B_F, L_F, B_G, L_G,
// L_f, R_x (missing keys default to 0).
compopt::ProblemConstants load_constants(const std::string& path) {
  compopt::ProblemConstants c;
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("cannot open constants file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::string key, eq;
    double value;
    if (!(ss >> key)) continue;
    if (!(ss >> eq >> value) || eq != "=")
      throw CLI::ValidationError(path + ":" + std::to_string(lineno) +
                                 ": expected 'key = value'");
    if (key == "B_F") c.B_F = value;
    else if (key == "L_F") c.L_F = value;
    else if (key == "B_G") c.B_G = value;
    else if (key == "L_G") c.L_G = value;
    else if (key == "L_f") c.L_f = value;
    else if (key == "R_x") c.R_x = value;
    else
      throw CLI::ValidationError(path + ":" + std::to_string(lineno) +
                                 ": unknown constant '" + key + "'");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composition optimization experiment harness"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  std::string run_config_path;
  int jobs = default_jobs();
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool have_seed_override = false;

  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  run_cmd->add_option("config", run_config_path, "config file")->required();
  run_cmd->add_option("--jobs", jobs, "parallel cells (env COMPOPT_JOBS)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out_override, "override the output directory");
  run_cmd->add_option("--seed-override", seed_override,
                      "override the problem seed")
      ->each([&](const std::string&) { have_seed_override = true; });

  // --- check -------------------------------------------------------------
  std::string check_config_path;
  auto* check_cmd = app.add_subcommand("check", "validate a config and exit");
  check_cmd->add_option("config", check_config_path, "config file")->required();

  // --- gradcheck ----------------------------------------------------------
  std::string gc_problem = "mean-variance";
  std::uint64_t gc_seed = 1;
  int gc_n = 10, gc_m = 10, gc_N = 5, gc_M = 3, gc_points = 20;
  double gc_lambda = 0.1, gc_kappa = 10.0, gc_tol = 1e-5;
  auto* gc_cmd = app.add_subcommand(
      "gradcheck", "finite-difference check of a built-in problem");
  gc_cmd->add_option("--problem", gc_problem, "problem family")
      ->check(CLI::IsMember({"mean-variance", "bellman", "split-quadratic"}));
  gc_cmd->add_option("--seed", gc_seed, "generator seed")->required();
  gc_cmd->add_option("--n", gc_n, "outer components");
  gc_cmd->add_option("--m", gc_m, "inner components (bellman)");
  gc_cmd->add_option("--N", gc_N, "decision dimension");
  gc_cmd->add_option("--M", gc_M, "inner output dimension (bellman)");
  gc_cmd->add_option("--kappa", gc_kappa, "covariance condition number");
  gc_cmd->add_option("--lambda", gc_lambda, "regularization");
  gc_cmd->add_option("--points", gc_points, "number of random trial points");
  gc_cmd->add_option("--tol", gc_tol, "relative tolerance");

  // --- bounds ---------------------------------------------------------------
  int bd_theorem = 1;
  std::string bd_constants_path;
  double bd_lambda = 1.0, bd_eta = 0.0, bd_d = 0.5;
  int bd_n = 10, bd_A = 0, bd_K = 0;
  bool bd_have_eta = false, bd_have_A = false;
  auto* bd_cmd = app.add_subcommand("bounds", "evaluate step/batch-size bounds");
  bd_cmd->add_option("--theorem", bd_theorem, "which bound (1-4)")
      ->required()
      ->check(CLI::Range(1, 4));
  bd_cmd->add_option("--constants", bd_constants_path, "constants file")
      ->required();
  bd_cmd->add_option("--lambda", bd_lambda, "regularization")->required();
  bd_cmd->add_option("--n", bd_n, "outer components")->required();
  bd_cmd->add_option("--A", bd_A, "mini-batch size")
      ->each([&](const std::string&) { bd_have_A = true; });
  bd_cmd->add_option("--eta", bd_eta, "step size")
      ->each([&](const std::string&) { bd_have_eta = true; });
  bd_cmd->add_option("--K", bd_K, "inner iterations (contraction factor)");
  bd_cmd->add_option("--d", bd_d, "split parameter d in (0,1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd || *check_cmd) {
      const std::string& path = *run_cmd ? run_config_path : check_config_path;
      const auto parsed = compopt::parse_config(read_file(path));
      if (!parsed.config) {
        print_errors(path, parsed.errors);
        return 1;
      }
      if (*check_cmd) {
        std::cout << "ok: " << parsed.config->algorithms.size()
                  << " algorithm(s), "
                  << parsed.config->problem.kappas.size() *
                         parsed.config->batches.size()
                  << " cell(s)\n";
        return 0;
      }
      compopt::ExperimentConfig cfg = *parsed.config;
      if (!out_override.empty()) cfg.out_dir = out_override;
      if (have_seed_override) cfg.problem.seed = seed_override;
      const auto summary = compopt::run_experiment(cfg, jobs);
      std::cout << compopt::format_summary(summary);
      return summary.all_ok ? 0 : 2;
    }

    if (*gc_cmd) {
      compopt::ProblemSpec spec;
      if (gc_problem == "mean-variance")
        spec.family = compopt::ProblemFamily::kMeanVariance;
      else if (gc_problem == "bellman")
        spec.family = compopt::ProblemFamily::kBellman;
      else
        spec.family = compopt::ProblemFamily::kSplitQuadratic;
      spec.n = gc_n;
      spec.m = gc_m;
      spec.N = gc_N;
      spec.M = gc_M;
      spec.lambda = gc_lambda;
      spec.seed = gc_seed;
      const auto problem = compopt::build_problem(spec, gc_kappa);

      compopt::Xoshiro256 rng(gc_seed, "gradcheck-points");
      std::vector<compopt::Vector> points;
      for (int k = 0; k < gc_points; ++k) {
        compopt::Vector x(problem->dim_x());
        for (int i = 0; i < x.size(); ++i) x[i] = rng.next_normal();
        points.push_back(std::move(x));
      }
      const auto report = compopt::check_gradients(*problem, points, gc_tol);
      std::printf("%s  max relative error %.3e over %d points\n",
                  report.passed ? "PASS" : "FAIL", report.max_rel_error,
                  gc_points);
      for (const auto& e : report.worst) {
        if (e.rel_error <= gc_tol && e.finite) continue;
        std::printf("  %s[%d] point %d entry (%d,%d): rel error %.3e%s\n",
                    e.kind.c_str(), e.index, e.point, e.row, e.col, e.rel_error,
                    e.finite ? "" : " (non-finite)");
      }
      return report.passed ? 0 : 1;
    }

    if (*bd_cmd) {
      const auto c = load_constants(bd_constants_path);
      const bool convex = (bd_theorem == 2 || bd_theorem == 4);
      const std::optional<double> d =
          convex ? std::optional<double>(bd_d) : std::nullopt;
      if (bd_theorem <= 2) {
        if (!bd_have_A) {
          std::cerr << "bounds: --A is required for the epoch-variant bounds\n";
          return 1;
        }
        const auto b = compopt::svrg_step_bound(c, bd_lambda, bd_n, bd_A, convex, d);
        if (b.vacuous || !b.eta_max) {
          std::printf("eta_max: vacuous (numerator non-positive for these constants)\n");
        } else {
          std::printf("eta_max = %.12g\n", *b.eta_max);
          std::printf("q = %.12g, a/b interval = [%.12g, %.12g], %s = %.12g\n",
                      b.q, b.ab_lo, b.ab_hi, convex ? "e2" : "d2", b.d2_or_e2);
          if (!b.batch_ok) std::printf("warning: A below the batch lower bound\n");
        }
        if (bd_K > 0 && b.eta_max) {
          const double eta = bd_have_eta ? bd_eta : *b.eta_max / 2;
          const auto f = compopt::svrg_contraction_factor(c, bd_lambda, bd_n,
                                                          bd_K, bd_A, eta, convex, d);
          if (!f.factor)
            std::printf("contraction: infeasible (empty a/b interval)\n");
          else
            std::printf("contraction factor at eta=%.6g, K=%d: %.12g%s\n", eta,
                        bd_K, *f.factor, f.contractive ? "" : " (not contractive)");
        }
      } else {
        const std::optional<int> A =
            bd_have_A ? std::optional<int>(bd_A) : std::nullopt;
        const std::optional<double> eta =
            bd_have_eta ? std::optional<double>(bd_eta) : std::nullopt;
        if (bd_have_A == bd_have_eta) {
          std::cerr << "bounds: give exactly one of --A / --eta for the table-variant bounds\n";
          return 1;
        }
        const auto b = compopt::saga_bounds(c, bd_lambda, bd_n, A, eta, convex, d);
        if (!b.feasible) {
          std::printf("infeasible: no admissible (A, eta) pair for these constants\n");
          return 1;
        }
        std::printf("A_min = %.12g\n", b.A_min);
        if (b.eta_max) std::printf("eta_max = %.12g\n", *b.eta_max);
        if (convex)
          std::printf("Y = %.12g\n", b.Y);
        else
          std::printf("Y1 = %.12g, Y2 = %.12g, Y3 = %.12g\n", b.Y1, b.Y2, b.Y3);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
