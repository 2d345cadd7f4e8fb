#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mdbt/config.hpp"
#include "mdbt/objectives.hpp"
#include "mdbt/solvers.hpp"

namespace mdbt {

struct ExperimentResult {
  std::string method;
  std::string trace_path;
  RunStatus status;
  double f_final = 0.0;
  std::uint64_t oracle_calls = 0;
};

struct BuiltProblem {
  std::unique_ptr<Objective> objective;
  Vec x0;
  // Exact optimum value when computable (quadratics, via conjugate
  // gradients); NaN otherwise.
  double f_star;
};

BuiltProblem build_problem(const ExperimentConfig& cfg);

/// Runs every configured method and writes one trace CSV per method into
/// cfg.out_dir (created if missing). Methods run in parallel up to the
/// MDBT_THREADS cap (default: hardware concurrency); files are written by
/// the calling thread in configuration order.
std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg);

}  // namespace mdbt
