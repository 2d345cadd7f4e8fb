#include "mdbt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "mdbt/armijo.hpp"
#include "mdbt/errors.hpp"

namespace mdbt {

namespace {

constexpr double kSetFloor = 1e-18;       // min semi-axis before SetCollapsed
constexpr double kDivergeThreshold = 1e300;
const double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

struct Tracer {
  RunTrace trace;
  std::uint64_t next_index = 0;

  void meta(std::string key, std::string value) {
    trace.meta.emplace_back(std::move(key), std::move(value));
  }
  void event(const OracleCounter& ctr, double f, EventKind kind, double log_vol,
             double step_sqnorm) {
    trace.events.push_back(TraceEvent{next_index++, ctr.n_value_evals,
                                      ctr.n_grad_evals, f, kind, log_vol,
                                      step_sqnorm});
  }
  RunTrace finish(RunStatus status, Vec x, double f, const OracleCounter& ctr) {
    trace.status = status;
    trace.x_final = std::move(x);
    trace.f_final = f;
    trace.counter = ctr;
    meta("status", status_name(status));
    return std::move(trace);
  }
};

void common_meta(Tracer& t, const RunConfig& cfg, double gamma, double c0) {
  t.meta("method", method_name(cfg.method));
  t.meta("seed", fmt_u64(cfg.seed));
  t.meta("gamma", fmt17(gamma));
  t.meta("c0", fmt17(c0));
  t.meta("forward_step", cfg.forward_step ? "1" : "0");
  t.meta("refine_lambda", cfg.refine_lambda ? "1" : "0");
  t.meta("grad_tol", fmt17(cfg.grad_tol));
  t.meta("max_oracle_calls", fmt_u64(cfg.max_oracle_calls));
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::gd_ls: return "gd_ls";
    case Method::mb_box: return "mb_box";
    case Method::mb_ellipsoid: return "mb_ellipsoid";
    case Method::precond_given_ls: return "precond_given_ls";
    case Method::precond_hessian_ls: return "precond_hessian_ls";
    case Method::adagrad_ls: return "adagrad_ls";
    case Method::diag_bb: return "diag_bb";
    case Method::rprop: return "rprop";
    case Method::gd_hd: return "gd_hd";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : {Method::gd_ls, Method::mb_box, Method::mb_ellipsoid,
                   Method::precond_given_ls, Method::precond_hessian_ls,
                   Method::adagrad_ls, Method::diag_bb, Method::rprop,
                   Method::gd_hd})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::set_collapsed: return "set_collapsed";
    case RunStatus::diverged: return "diverged";
  }
  return "?";
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::accept: return "accept";
    case EventKind::reject: return "reject";
    case EventKind::forward: return "forward";
    case EventKind::fallback_shrink: return "fallback_shrink";
  }
  return "?";
}

std::optional<EventKind> event_kind_from_name(const std::string& name) {
  for (EventKind k : {EventKind::accept, EventKind::reject, EventKind::forward,
                      EventKind::fallback_shrink})
    if (event_kind_name(k) == name) return k;
  return std::nullopt;
}

const std::string* RunTrace::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

// -------------------------------------------------- multidimensional search

RunTrace run_mb(const Objective& obj, std::span<const double> x0,
                const RunConfig& cfg, const RunHooks& hooks) {
  if (cfg.method != Method::mb_box && cfg.method != Method::mb_ellipsoid)
    throw std::invalid_argument("run_mb: method must be mb_box or mb_ellipsoid");
  const std::size_t d = obj.dim();
  if (x0.size() != d) throw std::invalid_argument("run_mb: dimension mismatch");
  const SetKind kind =
      cfg.method == Method::mb_box ? SetKind::box : SetKind::ellipsoid;
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : default_gamma(kind, d);
  const double dd = static_cast<double>(d);
  const double c0 =
      cfg.c0 > 0.0 ? cfg.c0 : (kind == SetKind::box ? dd * 1e10 : std::sqrt(dd) * 1e10);

  OracleCounter ctr;
  Tracer t;
  common_meta(t, cfg, gamma, c0);

  CandidateSet set = init_set(kind, d, c0);
  Vec x(x0.begin(), x0.end());
  double f_x = eval_value(obj, x, ctr);
  t.meta("f_init", fmt17(f_x));

  RunStatus status = RunStatus::budget_exhausted;
  while (ctr.total() < cfg.max_oracle_calls) {
    Vec g;
    try {
      g = eval_gradient(obj, x, ctr);
    } catch (const NumericalOverflow&) {
      status = RunStatus::diverged;
      break;
    }
    if (linf_norm(g) <= cfg.grad_tol) {
      status = RunStatus::converged;
      break;
    }

    Vec p;
    try {
      p = candidate(set, gamma, g);
    } catch (const ZeroGradient&) {
      status = RunStatus::converged;
      break;
    }
    ProbeResult probe = probe_armijo(obj, x, f_x, g, p, ctr);

    bool abort_run = false;
    while (!probe.accepted) {
      // One rejection: try to cut with the separating hyperplane; any
      // numerical degeneracy falls back to a uniform shrink.
      bool cut_applied = false;
      if (!probe.overflowed) {
        bool have_gplus = true;
        Vec g_plus;
        try {
          g_plus = eval_gradient(obj, probe.x_plus, ctr);
        } catch (const NumericalOverflow&) {
          have_gplus = false;
        }
        if (have_gplus) {
          const HyperplaneResult hr =
              separating_hyperplane(f_x, probe.f_plus, g, g_plus, p);
          if (hr.status == HyperplaneResult::Status::ok) {
            if (hooks.on_cut) hooks.on_cut(hr.u);
            CutOutcome out = cut(set, hr.u, cfg.refine_lambda, gamma);
            if (out.status == CutStatus::ok) {
              set = std::move(out.set);
              t.event(ctr, f_x, EventKind::reject, log_volume(set), probe.sq_norm_p);
              cut_applied = true;
            }
          }
        }
      }
      if (!cut_applied) {
        set = uniform_shrink(set);
        t.event(ctr, f_x, EventKind::fallback_shrink, log_volume(set),
                probe.sq_norm_p);
      }
      if (max_semi_axis(set) < kSetFloor) {
        status = RunStatus::set_collapsed;
        abort_run = true;
        break;
      }
      if (ctr.total() >= cfg.max_oracle_calls) {
        status = RunStatus::budget_exhausted;
        abort_run = true;
        break;
      }
      p = candidate(set, gamma, g);
      probe = probe_armijo(obj, x, f_x, g, p, ctr);
    }
    if (abort_run) break;

    x = std::move(probe.x_plus);
    f_x = probe.f_plus;
    t.event(ctr, f_x, EventKind::accept, log_volume(set), probe.sq_norm_p);
    if (cfg.forward_step) {
      set = forward_step(set);
      t.event(ctr, f_x, EventKind::forward, log_volume(set), 0.0);
    }
  }

  t.trace.final_set = std::move(set);
  return t.finish(status, std::move(x), f_x, ctr);
}

// ------------------------------------------------- scalar-step line-search

namespace {

// Shared skeleton for gd_ls and the fixed/derived preconditioner
// baselines: maintain an interval of step-sizes, probe alpha = gamma *
// alpha_max along direction m .* g, cut on rejection, forward on accept.
// The generic Armijo test f(x - alpha m.*g) <= f(x) - alpha/2 <g, m.*g>
// is the preconditioned condition with p = alpha * m.
template <typename DirectionScale>
RunTrace scalar_ls_loop(const Objective& obj, std::span<const double> x0,
                        const RunConfig& cfg, DirectionScale&& direction_scale,
                        const char* extra_meta_key = nullptr,
                        const char* extra_meta_value = nullptr) {
  const std::size_t d = obj.dim();
  if (x0.size() != d) throw std::invalid_argument("dimension mismatch");
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : 0.5;
  const double c0 = cfg.c0 > 0.0 ? cfg.c0 : 2e10;

  OracleCounter ctr;
  Tracer t;
  common_meta(t, cfg, gamma, c0);
  if (extra_meta_key) t.meta(extra_meta_key, extra_meta_value);

  CandidateSet set = init_set(SetKind::interval, d, c0);
  Vec x(x0.begin(), x0.end());
  double f_x = eval_value(obj, x, ctr);
  t.meta("f_init", fmt17(f_x));

  Vec m(d, 1.0), p(d);
  RunStatus status = RunStatus::budget_exhausted;
  while (ctr.total() < cfg.max_oracle_calls) {
    Vec g;
    try {
      g = eval_gradient(obj, x, ctr);
    } catch (const NumericalOverflow&) {
      status = RunStatus::diverged;
      break;
    }
    if (linf_norm(g) <= cfg.grad_tol) {
      status = RunStatus::converged;
      break;
    }
    direction_scale(x, g, m);
    // Plumbing safeguard: a direction with no descent component resets
    // to plain gradient.
    if (!(weighted_sqnorm(g, m) > 0.0)) m.assign(d, 1.0);

    bool abort_run = false;
    for (;;) {
      const double alpha = gamma * std::get<Interval>(set).alpha_max;
      for (std::size_t i = 0; i < d; ++i) p[i] = alpha * m[i];
      const ProbeResult probe = probe_armijo(obj, x, f_x, g, p, ctr);
      if (probe.accepted) {
        x = probe.x_plus;
        f_x = probe.f_plus;
        t.event(ctr, f_x, EventKind::accept, log_volume(set), probe.sq_norm_p);
        if (cfg.forward_step) {
          set = forward_step(set);
          t.event(ctr, f_x, EventKind::forward, log_volume(set), 0.0);
        }
        break;
      }
      set = cut(set, {}, false, gamma).set;
      t.event(ctr, f_x, EventKind::reject, log_volume(set), probe.sq_norm_p);
      if (max_semi_axis(set) < kSetFloor) {
        status = RunStatus::set_collapsed;
        abort_run = true;
        break;
      }
      if (ctr.total() >= cfg.max_oracle_calls) {
        status = RunStatus::budget_exhausted;
        abort_run = true;
        break;
      }
    }
    if (abort_run) break;
  }

  t.trace.final_set = std::move(set);
  return t.finish(status, std::move(x), f_x, ctr);
}

}  // namespace

RunTrace run_gd_ls(const Objective& obj, std::span<const double> x0,
                   const RunConfig& cfg) {
  if (cfg.method != Method::gd_ls)
    throw std::invalid_argument("run_gd_ls: wrong method id");
  return scalar_ls_loop(obj, x0, cfg, [](const Vec&, const Vec&, Vec& m) {
    std::fill(m.begin(), m.end(), 1.0);
  });
}

RunTrace run_fixed_precond_ls(const Objective& obj, std::span<const double> x0,
                              const RunConfig& cfg) {
  switch (cfg.method) {
    case Method::precond_given_ls: {
      if (cfg.p_fixed.size() != obj.dim())
        throw std::invalid_argument("precond_given_ls: p_fixed has wrong size");
      for (double v : cfg.p_fixed)
        if (!(v >= 0.0))
          throw std::invalid_argument("precond_given_ls: p_fixed must be >= 0");
      const Vec fixed = cfg.p_fixed;
      return scalar_ls_loop(
          obj, x0, cfg, [&fixed](const Vec&, const Vec&, Vec& m) { m = fixed; },
          "precond", "given");
    }
    case Method::precond_hessian_ls: {
      if (!obj.has_hessian_diag())
        throw Unsupported("precond_hessian_ls: objective has no Hessian diagonal");
      Vec h;
      return scalar_ls_loop(
          obj, x0, cfg,
          [&h, &obj](const Vec& x, const Vec&, Vec& m) {
            obj.hessian_diagonal(x, h);
            for (std::size_t i = 0; i < m.size(); ++i)
              m[i] = (h[i] > 0.0 && std::isfinite(h[i])) ? 1.0 / h[i] : 1.0;
          },
          "precond", "hessian_diag");
    }
    case Method::adagrad_ls: {
      Vec accum;
      return scalar_ls_loop(
          obj, x0, cfg,
          [&accum](const Vec&, const Vec& g, Vec& m) {
            if (accum.empty()) accum.assign(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
              accum[i] += g[i] * g[i];
              m[i] = 1.0 / std::sqrt(accum[i] + 1e-10);
            }
          },
          "precond", "adagrad");
    }
    default:
      throw std::invalid_argument("run_fixed_precond_ls: wrong method id");
  }
}

// --------------------------------------------------- diagonal BB baseline

void FValueWindow::push(double f) {
  if (values_.size() < capacity_) {
    values_.push_back(f);
  } else {
    values_[head_] = f;
    head_ = (head_ + 1) % capacity_;
  }
}

double FValueWindow::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

RunTrace run_diag_bb(const Objective& obj, std::span<const double> x0,
                     const RunConfig& cfg) {
  if (cfg.method != Method::diag_bb)
    throw std::invalid_argument("run_diag_bb: wrong method id");
  const std::size_t d = obj.dim();
  if (x0.size() != d) throw std::invalid_argument("run_diag_bb: dimension mismatch");
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : 0.5;  // backtracking factor
  const double c0 = cfg.c0 > 0.0 ? cfg.c0 : 1e-6;          // first scalar step
  constexpr double kMu = 1e-6;
  constexpr std::size_t kWindow = 15;

  OracleCounter ctr;
  Tracer t;
  common_meta(t, cfg, gamma, c0);
  t.meta("mu", fmt17(kMu));
  t.meta("window", std::to_string(kWindow));

  Vec x(x0.begin(), x0.end());
  double f_x = eval_value(obj, x, ctr);
  t.meta("f_init", fmt17(f_x));
  FValueWindow window(kWindow);
  window.push(f_x);

  Vec p(d, c0);
  Vec x_prev, g_prev;
  RunStatus status = RunStatus::budget_exhausted;
  while (ctr.total() < cfg.max_oracle_calls) {
    Vec g;
    try {
      g = eval_gradient(obj, x, ctr);
    } catch (const NumericalOverflow&) {
      status = RunStatus::diverged;
      break;
    }
    if (linf_norm(g) <= cfg.grad_tol) {
      status = RunStatus::converged;
      break;
    }

    if (!x_prev.empty()) {
      // Proximal diagonal secant: per coordinate,
      //   p[i] = (s[i] y[i] + mu ||y||^2 p_prev[i]) / (y[i]^2 + mu ||y||^2),
      // the minimizer of (s[i] - p y[i])^2 + mu ||y||^2 (p - p_prev[i])^2;
      // negative coordinates are clamped to zero.
      double ynorm2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double yi = g[i] - g_prev[i];
        ynorm2 += yi * yi;
      }
      if (ynorm2 > 0.0) {
        Vec p_new(d);
        bool any_positive = false;
        for (std::size_t i = 0; i < d; ++i) {
          const double si = x[i] - x_prev[i];
          const double yi = g[i] - g_prev[i];
          double v = (si * yi + kMu * ynorm2 * p[i]) / (yi * yi + kMu * ynorm2);
          if (v < 0.0) v = 0.0;
          if (v > 0.0) any_positive = true;
          p_new[i] = v;
        }
        if (any_positive) p = std::move(p_new);
      }
    }

    const double f_ref = window.max();
    Vec trial = p;
    bool abort_run = false;
    for (;;) {
      // Non-monotone Armijo: accept when
      // f(x - P g) <= max(last 15 f) - 1/2 ||g||^2_P.
      const ProbeResult probe = probe_armijo(obj, x, f_ref, g, trial, ctr);
      if (probe.accepted) {
        x_prev = x;
        g_prev = g;
        p = trial;
        x = probe.x_plus;
        f_x = probe.f_plus;
        window.push(f_x);
        t.event(ctr, f_x, EventKind::accept, kNan, probe.sq_norm_p);
        break;
      }
      for (auto& v : trial) v *= gamma;
      t.event(ctr, f_x, EventKind::reject, kNan, probe.sq_norm_p);
      if (linf_norm(trial) < 1e-280) {
        status = RunStatus::set_collapsed;
        abort_run = true;
        break;
      }
      if (ctr.total() >= cfg.max_oracle_calls) {
        status = RunStatus::budget_exhausted;
        abort_run = true;
        break;
      }
    }
    if (abort_run) break;
  }

  return t.finish(status, std::move(x), f_x, ctr);
}

// ----------------------------------------------------------------- RPROP

RunTrace run_rprop(const Objective& obj, std::span<const double> x0,
                   const RunConfig& cfg) {
  if (cfg.method != Method::rprop)
    throw std::invalid_argument("run_rprop: wrong method id");
  const std::size_t d = obj.dim();
  if (x0.size() != d) throw std::invalid_argument("run_rprop: dimension mismatch");
  const double step0 = cfg.c0 > 0.0 ? cfg.c0 : 1e-1;
  constexpr double kEtaPlus = 1.2;
  constexpr double kEtaMinus = 0.5;
  constexpr double kStepMin = 1e-6;
  constexpr double kStepMax = 50.0;

  OracleCounter ctr;
  Tracer t;
  common_meta(t, cfg, 0.5, step0);
  t.meta("eta_plus", fmt17(kEtaPlus));
  t.meta("eta_minus", fmt17(kEtaMinus));
  t.meta("step_min", fmt17(kStepMin));
  t.meta("step_max", fmt17(kStepMax));

  Vec x(x0.begin(), x0.end());
  // RPROP never consumes f; values are recorded for the trace without
  // touching the oracle counter.
  double f_trace = obj.value(x);
  t.meta("f_init", fmt17(f_trace));

  Vec step(d, step0), g_prev(d, 0.0);
  RunStatus status = RunStatus::budget_exhausted;
  while (ctr.total() < cfg.max_oracle_calls) {
    Vec g;
    try {
      g = eval_gradient(obj, x, ctr);
    } catch (const NumericalOverflow&) {
      status = RunStatus::diverged;
      break;
    }
    if (linf_norm(g) <= cfg.grad_tol) {
      status = RunStatus::converged;
      break;
    }
    for (std::size_t i = 0; i < d; ++i) {
      const double prod = g_prev[i] * g[i];
      if (prod > 0.0) {
        step[i] = std::min(step[i] * kEtaPlus, kStepMax);
      } else if (prod < 0.0) {
        step[i] = std::max(step[i] * kEtaMinus, kStepMin);
        g[i] = 0.0;  // skip this coordinate for one round
      }
      x[i] -= sign_of(g[i]) * step[i];
    }
    g_prev = g;
    f_trace = obj.value(x);
    if (!std::isfinite(f_trace)) {
      status = RunStatus::diverged;
      break;
    }
    t.event(ctr, f_trace, EventKind::accept, kNan, 0.0);
  }

  return t.finish(status, std::move(x), f_trace, ctr);
}

// ----------------------------------------------------------------- GD-HD

double gdhd_alpha_update(double alpha, std::span<const double> g_new,
                         std::span<const double> g_old, double beta) {
  const double num = dot(g_new, g_old);
  const double den =
      std::sqrt(dot(g_new, g_new)) * std::sqrt(dot(g_old, g_old)) + 1e-300;
  return alpha * (1.0 + beta * num / den);
}

RunTrace run_gdhd(const Objective& obj, std::span<const double> x0,
                  const RunConfig& cfg) {
  if (cfg.method != Method::gd_hd)
    throw std::invalid_argument("run_gdhd: wrong method id");
  const std::size_t d = obj.dim();
  if (x0.size() != d) throw std::invalid_argument("run_gdhd: dimension mismatch");
  double alpha = cfg.c0 > 0.0 ? cfg.c0 : 1e-10;
  constexpr double kBeta = 0.02;

  OracleCounter ctr;
  Tracer t;
  common_meta(t, cfg, 0.5, alpha);
  t.meta("beta", fmt17(kBeta));

  Vec x(x0.begin(), x0.end());
  double f_trace = obj.value(x);  // trace only, not an oracle call
  t.meta("f_init", fmt17(f_trace));

  Vec g;
  try {
    g = eval_gradient(obj, x, ctr);
  } catch (const NumericalOverflow&) {
    return t.finish(RunStatus::diverged, std::move(x), f_trace, ctr);
  }

  RunStatus status = RunStatus::budget_exhausted;
  while (ctr.total() < cfg.max_oracle_calls) {
    if (linf_norm(g) <= cfg.grad_tol) {
      status = RunStatus::converged;
      break;
    }
    kernels::active().axpy(x.data(), -alpha, g.data(), d);
    f_trace = obj.value(x);
    if (!std::isfinite(f_trace) || std::fabs(f_trace) > kDivergeThreshold) {
      status = RunStatus::diverged;
      break;
    }
    t.event(ctr, f_trace, EventKind::accept, kNan, 0.0);

    Vec g_new;
    try {
      g_new = eval_gradient(obj, x, ctr);
    } catch (const NumericalOverflow&) {
      status = RunStatus::diverged;
      break;
    }
    alpha = gdhd_alpha_update(alpha, g_new, g, kBeta);
    g = std::move(g_new);
  }

  return t.finish(status, std::move(x), f_trace, ctr);
}

RunTrace run(const Objective& obj, std::span<const double> x0,
             const RunConfig& cfg, const RunHooks& hooks) {
  switch (cfg.method) {
    case Method::gd_ls:
      return run_gd_ls(obj, x0, cfg);
    case Method::mb_box:
    case Method::mb_ellipsoid:
      return run_mb(obj, x0, cfg, hooks);
    case Method::precond_given_ls:
    case Method::precond_hessian_ls:
    case Method::adagrad_ls:
      return run_fixed_precond_ls(obj, x0, cfg);
    case Method::diag_bb:
      return run_diag_bb(obj, x0, cfg);
    case Method::rprop:
      return run_rprop(obj, x0, cfg);
    case Method::gd_hd:
      return run_gdhd(obj, x0, cfg);
  }
  throw std::invalid_argument("run: unknown method");
}

}  // namespace mdbt
