#include "mdbt/armijo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mdbt/errors.hpp"

namespace mdbt {

ProbeResult probe_armijo(const Objective& obj, std::span<const double> x,
                         double f_x, std::span<const double> g,
                         std::span<const double> p, OracleCounter& ctr) {
  if (x.size() != g.size() || x.size() != p.size())
    throw std::invalid_argument("probe_armijo: dimension mismatch");

  ProbeResult r;
  r.f_x = f_x;
  r.sq_norm_p = weighted_sqnorm(g, p);
  r.x_plus.resize(x.size());
  kernels::active().step(r.x_plus.data(), x.data(), p.data(), g.data(), x.size());

  try {
    r.f_plus = eval_value(obj, r.x_plus, ctr);
  } catch (const NumericalOverflow&) {
    r.f_plus = std::numeric_limits<double>::infinity();
    r.gap = std::numeric_limits<double>::infinity();
    r.overflowed = true;
    r.accepted = false;
    return r;
  }
  r.gap = r.f_plus - r.f_x + 0.5 * r.sq_norm_p;
  r.accepted = r.gap <= 0.0;
  return r;
}

HyperplaneResult separating_hyperplane(double f_x, double f_plus,
                                       std::span<const double> g,
                                       std::span<const double> g_plus,
                                       std::span<const double> p) {
  if (g.size() != g_plus.size() || g.size() != p.size())
    throw std::invalid_argument("separating_hyperplane: dimension mismatch");
  const std::size_t d = g.size();

  HyperplaneResult hr;
  // <g_plus, P g> = sum_i g_plus[i] * p[i] * g[i]
  const Vec pg = ew_mul(p, g);
  const double denom = f_x - dot(g_plus, pg) - f_plus;
  // Positive for convex f; rounding can only push it to ~0 when the probe
  // barely failed. Never fabricate a cut from a non-positive denominator.
  const double eps_den = 1e-300 * (1.0 + std::fabs(f_x));
  if (!(denom > eps_den)) {
    hr.status = HyperplaneResult::Status::degenerate;
    return hr;
  }

  hr.v.resize(d);
  hr.u.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    hr.v[i] = (0.5 * g[i] - g_plus[i]) * g[i] / denom;
    hr.u[i] = hr.v[i] > 0.0 ? hr.v[i] : 0.0;
  }
  hr.u_dot_p = dot(hr.u, p);
  // The probed p must be (at least touching) the invalid side.
  if (!(hr.u_dot_p > 1.0 - 1e-9)) {
    hr.status = HyperplaneResult::Status::shallow;
    return hr;
  }
  hr.status = HyperplaneResult::Status::ok;
  return hr;
}

}  // namespace mdbt
