#pragma once

#include <span>

#include "mdbt/objectives.hpp"
#include "mdbt/vec.hpp"

namespace mdbt {

/// Outcome of testing one diagonal preconditioner p against the
/// preconditioned Armijo condition f(x - Pg) <= f(x) - 1/2 ||g||^2_P.
/// gap = f_plus - f_x + 1/2 ||g||^2_P; accepted iff gap <= 0.
/// A non-finite trial value is reported as rejected with gap = +inf.
struct ProbeResult {
  Vec x_plus;
  double f_x = 0.0;
  double f_plus = 0.0;
  double sq_norm_p = 0.0;  // ||g||^2_P
  double gap = 0.0;
  bool accepted = false;
  bool overflowed = false;  // f(x_plus) was NaN/Inf
};

/// One value evaluation; f_x and g must already be computed for x (they
/// are never re-evaluated here).
ProbeResult probe_armijo(const Objective& obj, std::span<const double> x,
                         double f_x, std::span<const double> g,
                         std::span<const double> p, OracleCounter& ctr);

/// Separating hyperplane built from a rejected probe. The half-space
/// {q >= 0 : <u, q> > 1} contains only invalid preconditioners; u is the
/// non-negative truncation of
///   v = ((1/2 g - g_plus) .* g) / (f_x - <g_plus, P g> - f_plus).
struct HyperplaneResult {
  enum class Status {
    ok,
    degenerate,  // denominator not safely positive (rounding artifact)
    shallow,     // <u, p> <= 1 - tol after truncation: cut would not bite
  };
  Status status = Status::ok;
  Vec u;             // truncated direction (valid when status == ok)
  Vec v;             // untruncated direction, kept for diagnostics/tests
  double u_dot_p = 0.0;
};

/// g_plus is the gradient at x_plus, freshly evaluated by the caller
/// (exactly one extra gradient per rejected candidate). Boundary cuts
/// with <u,p> in (1 - 1e-9, 1] are treated as touching and reported ok.
HyperplaneResult separating_hyperplane(double f_x, double f_plus,
                                       std::span<const double> g,
                                       std::span<const double> g_plus,
                                       std::span<const double> p);

}  // namespace mdbt
