#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdbt/objectives.hpp"
#include "mdbt/sets.hpp"
#include "mdbt/vec.hpp"

namespace mdbt {

enum class Method {
  gd_ls,             // gradient descent + Armijo backtracking
  mb_box,            // multidimensional backtracking, box sets
  mb_ellipsoid,      // multidimensional backtracking, ellipsoid sets
  precond_given_ls,  // fixed diagonal preconditioner + line-search
  precond_hessian_ls,  // diagonal Hessian direction + line-search
  adagrad_ls,        // AdaGrad diagonal scaling + line-search
  diag_bb,           // diagonal Barzilai-Borwein, non-monotone line-search
  rprop,
  gd_hd,             // GD with multiplicative hypergradient step-size
};

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct RunConfig {
  Method method = Method::gd_ls;
  // 0 means "per-method default": 1/2 for scalar searches, 1/(2d) box,
  // 1/sqrt(2d) ellipsoid.
  double gamma = 0.0;
  // Initial set scale; 0 means the per-method default. Line-searched
  // methods use 2e10 so the first trial step-size is 1e10; mb_box uses
  // d*1e10 and mb_ellipsoid sqrt(d)*1e10 (first candidate on the order of
  // 1e10). For gd_hd this is the initial step-size (default 1e-10); for
  // diag_bb the first scalar step (default 1e-6).
  double c0 = 0.0;
  bool forward_step = true;
  bool refine_lambda = true;
  std::uint64_t max_oracle_calls = 10000;
  double grad_tol = 1e-10;  // on ||grad||_inf
  std::uint64_t seed = 0;
  Vec p_fixed;  // precond_given_ls only
};

enum class RunStatus { converged, budget_exhausted, set_collapsed, diverged };
std::string status_name(RunStatus s);

enum class EventKind { accept, reject, forward, fallback_shrink };
std::string event_kind_name(EventKind k);
std::optional<EventKind> event_kind_from_name(const std::string& name);

struct TraceEvent {
  std::uint64_t index = 0;
  std::uint64_t n_value_evals = 0;
  std::uint64_t n_grad_evals = 0;
  double f_value = 0.0;
  EventKind kind = EventKind::accept;
  double set_log_volume = 0.0;  // NaN for methods without a candidate set
  double step_sqnorm = 0.0;     // ||g||^2_P of the probe (in-memory only)
  std::uint64_t total_oracle_calls() const { return n_value_evals + n_grad_evals; }
};

struct RunTrace {
  std::vector<std::pair<std::string, std::string>> meta;  // ordered key=value
  std::vector<TraceEvent> events;
  RunStatus status = RunStatus::converged;
  Vec x_final;
  double f_final = 0.0;
  OracleCounter counter;
  // Terminal candidate set of the set-based methods (not serialized).
  std::optional<CandidateSet> final_set;

  const std::string* find_meta(const std::string& key) const;
};

/// Test/diagnostic instrumentation; all optional.
struct RunHooks {
  std::function<void(std::span<const double> u)> on_cut;
};

RunTrace run_mb(const Objective& obj, std::span<const double> x0,
                const RunConfig& cfg, const RunHooks& hooks = {});
RunTrace run_gd_ls(const Objective& obj, std::span<const double> x0,
                   const RunConfig& cfg);
RunTrace run_fixed_precond_ls(const Objective& obj, std::span<const double> x0,
                              const RunConfig& cfg);
RunTrace run_diag_bb(const Objective& obj, std::span<const double> x0,
                     const RunConfig& cfg);
RunTrace run_rprop(const Objective& obj, std::span<const double> x0,
                   const RunConfig& cfg);
RunTrace run_gdhd(const Objective& obj, std::span<const double> x0,
                  const RunConfig& cfg);

/// Dispatch on cfg.method.
RunTrace run(const Objective& obj, std::span<const double> x0,
             const RunConfig& cfg, const RunHooks& hooks = {});

/// Multiplicative hypergradient step-size update:
/// alpha * (1 + beta * <g_new, g_old> / (||g_new|| ||g_old|| + eps)).
double gdhd_alpha_update(double alpha, std::span<const double> g_new,
                         std::span<const double> g_old, double beta);

/// Sliding window over accepted f-values for the non-monotone
/// line-search (capacity 15 by default).
class FValueWindow {
 public:
  explicit FValueWindow(std::size_t capacity = 15) : capacity_(capacity) {}
  void push(double f);
  double max() const;
  std::size_t size() const { return values_.size(); }

 private:
  std::size_t capacity_;
  std::vector<double> values_;  // ring buffer, oldest first
  std::size_t head_ = 0;
};

}  // namespace mdbt
