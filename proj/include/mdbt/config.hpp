#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdbt/dataio.hpp"
#include "mdbt/solvers.hpp"

namespace mdbt {

/// Experiment definition, parsed from a flat `key = value` text file with
/// `[method.<name>]` sections. Example:
///
///   name = demo
///   objective = quadratic          # quadratic | linreg | logreg
///   synth_kind = diagonal          # diagonal | rotated (quadratic only)
///   synth_d = 10
///   synth_cond = 1e6
///   synth_seed = 0
///   # dataset = datasets/tiny_reg.libsvm   (linreg/logreg)
///   init = ones                    # ones | gaussian | bias
///   init_seed = 0
///   budget = 10000
///   out_dir = out
///
///   [method.gd_ls]
///   [method.mb_ellipsoid]
///   forward_step = true
///
/// Per-method keys: gamma, c0, forward_step, refine_lambda, budget,
/// grad_tol, seed, p_fixed (comma-separated, precond_given_ls only),
/// p_star (true resolves p_fixed from the optimal-preconditioner oracle;
/// quadratic objectives only).
struct MethodSpec {
  std::string name;  // method id, doubles as the trace file stem
  RunConfig cfg;
  bool p_star = false;
};

struct ExperimentConfig {
  std::string name;
  std::string objective;  // quadratic | linreg | logreg
  std::optional<SynthSpec> synth;
  std::string dataset_path;
  std::string init_kind;  // ones | gaussian | bias
  std::uint64_t init_seed = 0;
  std::uint64_t budget = 0;
  std::string out_dir;
  std::vector<MethodSpec> methods;
};

ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace mdbt
