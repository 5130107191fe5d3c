#include "compopt/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "compopt/algorithms.hpp"
#include "compopt/problems.hpp"
#include "compopt/rng.hpp"
#include "compopt/trace_io.hpp"

namespace compopt {

namespace {

std::string format_number(double v) {
  char buf[64];
  if (v == std::floor(v) && std::abs(v) < 1e15)
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
  else
    std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string cell_name(double kappa, int batch) {
  return "k" + format_number(kappa) + "_A" + std::to_string(batch);
}

Vector make_x0(const ExperimentConfig& cfg, int dim) {
  if (cfg.x0 == "gaussian") {
    Xoshiro256 rng(cfg.problem.seed, "x0");
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.next_normal();
    return x;
  }
  return Vector::Zero(dim);
}

Trace dispatch(const AlgorithmSpec& a, const CompositionProblem& p, const Vector& x0,
               const RunConfig& run) {
  if (a.name == "scdf") return run_scdf(p, x0, run);
  if (a.name == "scdf-svrg") return run_scdf_svrg(p, x0, run);
  if (a.name == "scdf-saga") return run_scdf_saga(p, x0, run);
  if (a.name == "sgd") return run_sgd(p, x0, run, SgdInnerMode::kSingleSample);
  if (a.name == "sgd-exact") return run_sgd(p, x0, run, SgdInnerMode::kExactInner);
  if (a.name == "scgd") return run_scgd(p, x0, run, a.scgd);
  if (a.name == "c-svrg") return run_compositional_svrg(p, x0, run);
  throw ConfigError("unknown algorithm: " + a.name);
}

struct CellOutput {
  std::vector<RunResult> results;
  std::string svg;  // empty unless plotting
  std::string svg_path;
};

CellOutput run_cell(const ExperimentConfig& cfg, double kappa, int batch,
                    const std::filesystem::path& out_dir) {
  CellOutput out;
  const std::string cell = cell_name(kappa, batch);
  const auto problem = build_problem(cfg.problem, kappa);

  std::optional<double> p_star;
  if (auto opt = problem->compute_optimum()) p_star = opt->p_star;

  const Vector x0 = make_x0(cfg, problem->dim_x());
  std::vector<PlotSeries> series;

  for (const auto& a : cfg.algorithms) {
    RunResult res;
    res.cell = cell;
    res.label = a.label;

    RunConfig run = a.run;
    if (a.batch_from_cell) run.batch = batch;
    run.record_every = cfg.record_every;
    run.timing = cfg.timing;
    run.p_star = p_star;

    Trace trace;
    try {
      trace = dispatch(a, *problem, x0, run);
    } catch (const DivergenceError& e) {
      res.diverged = true;
      res.error = std::string(e.what()) + " (iteration " +
                  std::to_string(e.iteration) + ")";
    }

    if (!trace.rows.empty()) {
      const std::string fname = cell + "_" + a.label + ".csv";
      const auto path = out_dir / fname;
      std::ofstream os(path);
      write_trace_csv(trace, os);
      if (!os) {
        res.diverged = true;
        res.error = "failed to write " + path.string();
      } else {
        res.csv_path = path.string();
      }
      const auto& last = trace.rows.back();
      res.final_objective = last.objective;
      res.final_gap = last.gap;
      res.g_queries = trace.counter.g_oracle();
      res.total_queries = trace.counter.total();
      series.push_back({a.label, trace.rows});
    } else {
      res.final_objective = std::numeric_limits<double>::quiet_NaN();
      res.final_gap = std::numeric_limits<double>::quiet_NaN();
    }
    out.results.push_back(std::move(res));
  }

  if (cfg.plot && !series.empty()) {
    out.svg = render_convergence_svg(cell, series);
    out.svg_path = (out_dir / (cell + ".svg")).string();
  }
  return out;
}

}  // namespace

std::unique_ptr<CompositionProblem> build_problem(const ProblemSpec& spec, double kappa) {
  switch (spec.family) {
    case ProblemFamily::kMeanVariance:
      return std::make_unique<MeanVarianceProblem>(generate_mean_variance(
          spec.n, spec.N, kappa, spec.seed, spec.lambda,
          spec.explicit_strong_convexity));
    case ProblemFamily::kBellman:
      return std::make_unique<BellmanToyProblem>(
          generate_bellman_toy(spec.m, spec.M, spec.N, spec.lambda, spec.seed));
    case ProblemFamily::kSplitQuadratic:
      return std::make_unique<SplitQuadraticProblem>(
          generate_split_quadratic(spec.N, spec.lambda, spec.seed));
  }
  throw ConfigError("unknown problem family");
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, int jobs) {
  const std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);

  struct Cell {
    double kappa;
    int batch;
  };
  std::vector<Cell> cells;
  for (double k : cfg.problem.kappas)
    for (int a : cfg.batches) cells.push_back({k, a});

  std::vector<CellOutput> outputs(cells.size());
  std::vector<std::string> cell_errors(cells.size());

  auto worker_body = [&](std::size_t c) {
    try {
      outputs[c] = run_cell(cfg, cells[c].kappa, cells[c].batch, out_dir);
    } catch (const std::exception& e) {
      cell_errors[c] = e.what();
    }
  };

  if (jobs <= 1 || cells.size() <= 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) worker_body(c);
  } else {
    std::atomic<std::size_t> next{0};
    const int nthreads = std::min<std::size_t>(jobs, cells.size());
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < cells.size();
             c = next.fetch_add(1))
          worker_body(c);
      });
    for (auto& th : pool) th.join();
  }

  ExperimentSummary summary;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!cell_errors[c].empty()) {
      RunResult res;
      res.cell = cell_name(cells[c].kappa, cells[c].batch);
      res.label = "*";
      res.diverged = true;
      res.error = cell_errors[c];
      summary.results.push_back(std::move(res));
      summary.all_ok = false;
      continue;
    }
    for (auto& r : outputs[c].results) {
      if (r.diverged) summary.all_ok = false;
      summary.results.push_back(std::move(r));
    }
    if (!outputs[c].svg.empty()) {
      std::ofstream os(outputs[c].svg_path);
      os << outputs[c].svg;
    }
  }

  std::ofstream os(out_dir / "summary.txt");
  os << format_summary(summary);
  return summary;
}

std::string format_summary(const ExperimentSummary& summary) {
  std::ostringstream os;
  os << "cell\tlabel\tstatus\tobjective\tgap\tg_queries\ttotal_queries\n";
  for (const auto& r : summary.results) {
    char obj[64], gap[64];
    std::snprintf(obj, sizeof(obj), "%.10g", r.final_objective);
    std::snprintf(gap, sizeof(gap), "%.10g", r.final_gap);
    os << r.cell << '\t' << r.label << '\t'
       << (r.diverged ? ("DIVERGED: " + r.error) : std::string("ok")) << '\t'
       << obj << '\t' << gap << '\t' << r.g_queries << '\t' << r.total_queries
       << '\n';
  }
  return os.str();
}

}  // namespace compopt
