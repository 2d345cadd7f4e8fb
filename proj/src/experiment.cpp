#include "mdbt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <thread>

#include "mdbt/errors.hpp"
#include "mdbt/linalg.hpp"
#include "mdbt/oracle.hpp"
#include "mdbt/trace.hpp"

namespace mdbt {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t thread_cap() {
  if (const char* env = std::getenv("MDBT_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  BuiltProblem out;
  out.f_star = std::numeric_limits<double>::quiet_NaN();

  if (cfg.objective == "quadratic") {
    auto quad = std::make_unique<QuadraticObjective>(synth_quadratic(*cfg.synth));
    // Exact optimum: solve A x = b (for synthetic problems b = 0).
    const Vec xs = linalg::cg_solve(quad->matrix(), quad->linear_term());
    out.f_star = quad->value(xs);
    out.x0 = cfg.init_kind == "gaussian"
                 ? gaussian_vector(quad->dim(), cfg.init_seed)
                 : Vec(quad->dim(), 1.0);
    out.objective = std::move(quad);
    return out;
  }

  const Task task = cfg.objective == "logreg" ? Task::classification : Task::regression;
  Dataset ds = prepend_bias(parse_libsvm_file(cfg.dataset_path, task));
  InitSpec init;
  init.kind = cfg.init_kind == "gaussian" ? InitSpec::Kind::gaussian
                                          : InitSpec::Kind::bias;
  init.seed = cfg.init_seed;
  if (cfg.init_kind == "ones") throw ConfigError("dataset objectives use bias or gaussian init");
  out.x0 = initialize(ds, init);
  if (cfg.objective == "logreg")
    out.objective = std::make_unique<LogisticRegressionL2>(std::move(ds.X), std::move(ds.y));
  else
    out.objective = std::make_unique<LinearRegressionL2>(std::move(ds.X), std::move(ds.y));
  return out;
}

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg) {
  const BuiltProblem problem = build_problem(cfg);
  const Objective& obj = *problem.objective;

  // Resolve p_star requests once, from the oracle.
  std::vector<RunConfig> run_cfgs;
  run_cfgs.reserve(cfg.methods.size());
  for (const MethodSpec& spec : cfg.methods) {
    RunConfig rc = spec.cfg;
    if (spec.p_star) {
      const auto* quad = dynamic_cast<const QuadraticObjective*>(&obj);
      if (!quad) throw ConfigError("p_star needs a quadratic objective");
      const auto report =
          oracle::optimal_diag_precond(linalg::dense_from_csr(quad->matrix()));
      rc.p_fixed = report.p_star;
    }
    run_cfgs.push_back(std::move(rc));
  }

  const std::size_t workers = std::min(thread_cap(), cfg.methods.size());
  std::vector<RunTrace> traces(cfg.methods.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.methods.size(); ++i)
      traces[i] = run(obj, problem.x0, run_cfgs[i]);
  } else {
    std::vector<std::future<RunTrace>> futures;
    futures.reserve(cfg.methods.size());
    // std::async with a deferred-safe cap: launch in waves of `workers`.
    for (std::size_t base = 0; base < cfg.methods.size(); base += workers) {
      const std::size_t end = std::min(base + workers, cfg.methods.size());
      for (std::size_t i = base; i < end; ++i)
        futures.push_back(std::async(std::launch::async, [&, i] {
          return run(obj, problem.x0, run_cfgs[i]);
        }));
      for (std::size_t i = base; i < end; ++i) traces[i] = futures[i].get();
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  std::vector<ExperimentResult> results;
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    RunTrace& trace = traces[i];
    trace.meta.emplace_back("experiment", cfg.name);
    trace.meta.emplace_back("objective", cfg.objective);
    if (!cfg.dataset_path.empty()) trace.meta.emplace_back("dataset", cfg.dataset_path);
    trace.meta.emplace_back("init", cfg.init_kind);
    trace.meta.emplace_back("init_seed", std::to_string(cfg.init_seed));
    if (std::isfinite(problem.f_star))
      trace.meta.emplace_back("f_star", fmt17(problem.f_star));

    const std::string path =
        (std::filesystem::path(cfg.out_dir) / (cfg.name + "_" + cfg.methods[i].name + ".csv"))
            .string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace: " + path);
    write_trace(trace, out);

    results.push_back(ExperimentResult{cfg.methods[i].name, path, trace.status,
                                       trace.f_final, trace.counter.total()});
  }
  return results;
}

}  // namespace mdbt
