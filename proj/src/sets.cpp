#include "mdbt/sets.hpp"

#include <cmath>
#include <stdexcept>

#include "mdbt/errors.hpp"

namespace mdbt {

SetKind kind_of(const CandidateSet& s) {
  if (std::holds_alternative<Interval>(s)) return SetKind::interval;
  if (std::holds_alternative<Box>(s)) return SetKind::box;
  return SetKind::ellipsoid;
}

std::size_t set_dim(const CandidateSet& s) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Interval>)
          return v.d;
        else if constexpr (std::is_same_v<T, Box>)
          return v.b.size();
        else
          return v.a.size();
      },
      s);
}

CandidateSet init_set(SetKind kind, std::size_t d, double c0) {
  if (!(c0 > 0.0)) throw std::invalid_argument("init_set: c0 must be > 0");
  if (d == 0) throw std::invalid_argument("init_set: d must be >= 1");
  switch (kind) {
    case SetKind::interval:
      return Interval{c0, d};
    case SetKind::box:
      return Box{Vec(d, c0)};
    case SetKind::ellipsoid:
      return Ellipsoid{Vec(d, 1.0 / (static_cast<double>(d) * c0 * c0))};
  }
  throw std::logic_error("init_set: bad kind");
}

double default_gamma(SetKind kind, std::size_t d) {
  switch (kind) {
    case SetKind::interval:
      return 0.5;
    case SetKind::box:
      return 1.0 / (2.0 * static_cast<double>(d));
    case SetKind::ellipsoid:
      return 1.0 / std::sqrt(2.0 * static_cast<double>(d));
  }
  throw std::logic_error("default_gamma: bad kind");
}

Vec candidate(const CandidateSet& s, double gamma, std::span<const double> g) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("candidate: gamma must be in (0,1)");
  if (const auto* iv = std::get_if<Interval>(&s)) {
    return Vec(iv->d, gamma * iv->alpha_max);
  }
  if (const auto* box = std::get_if<Box>(&s)) {
    Vec p(box->b.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = gamma * box->b[i];
    return p;
  }
  const auto& ell = std::get<Ellipsoid>(s);
  const std::size_t d = ell.a.size();
  if (g.size() != d) throw std::invalid_argument("candidate: dimension mismatch");
  const Vec g2 = ew_square(g);
  // ||g^2||_{A^{-1}} = sqrt(sum g^4 / a)
  double norm2 = 0.0;
  Vec p(d);
  for (std::size_t i = 0; i < d; ++i) {
    p[i] = g2[i] / ell.a[i];
    norm2 += g2[i] * p[i];
  }
  if (norm2 == 0.0) throw ZeroGradient("ellipsoid candidate at a stationary point");
  const double scale = gamma / std::sqrt(norm2);
  for (auto& pi : p) pi *= scale;
  return p;
}

namespace {

// phi(lambda) = -sum log(lambda a[i] + (1-lambda) u2[i]); convex on (0,1).
double phi(double lambda, const Vec& a, const Vec& u2) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s -= std::log(lambda * a[i] + (1.0 - lambda) * u2[i]);
  return s;
}

double phi_prime(double lambda, const Vec& a, const Vec& u2) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s -= (a[i] - u2[i]) / (lambda * a[i] + (1.0 - lambda) * u2[i]);
  return s;
}

// Bisection on phi' over [lo, hi]; phi is convex so this is exact up to
// the interval width.
double refine_lambda(const Vec& a, const Vec& u2, double lambda0) {
  double lo = 1e-12, hi = 1.0 - 1e-12;
  if (phi_prime(lo, a, u2) >= 0.0) return lo;
  if (phi_prime(hi, a, u2) <= 0.0) return hi;
  double mid = std::min(std::max(lambda0, lo), hi);
  for (int it = 0; it < 100; ++it) {
    if (phi_prime(mid, a, u2) > 0.0)
      hi = mid;
    else
      lo = mid;
    mid = 0.5 * (lo + hi);
  }
  return mid;
}

CutOutcome cut_box(const Box& box, std::span<const double> u) {
  CutOutcome out;
  Box next{Vec(box.b.size())};
  double drop = 0.0;
  for (std::size_t i = 0; i < box.b.size(); ++i) {
    const double cap = u[i] > 0.0 ? 1.0 / u[i] : box.b[i];
    next.b[i] = cap < box.b[i] ? cap : box.b[i];
    drop += std::log(box.b[i]) - std::log(next.b[i]);
  }
  if (!(drop > 0.0)) {
    out.status = CutStatus::shallow;
    return out;
  }
  out.set = std::move(next);
  out.log_volume_drop = drop;
  return out;
}

CutOutcome cut_ellipsoid(const Ellipsoid& ell, std::span<const double> u,
                         bool refine) {
  CutOutcome out;
  const std::size_t d = ell.a.size();
  const Vec u2 = ew_square(u);

  if (d == 1) {
    // The lambda formula is 0/0 at d=1; take the tight interval cut.
    if (!(u2[0] > ell.a[0])) {
      out.status = CutStatus::shallow;
      return out;
    }
    out.set = Ellipsoid{Vec{u2[0]}};
    out.log_volume_drop = 0.5 * (std::log(u2[0]) - std::log(ell.a[0]));
    out.lambda_used = 0.0;
    return out;
  }

  double ell_norm = 0.0;  // ||u||^2_{A^{-1}}
  for (std::size_t i = 0; i < d; ++i) ell_norm += u2[i] / ell.a[i];
  const double dd = static_cast<double>(d);
  if (!(ell_norm > dd * (1.0 + 1e-9))) {
    out.status = CutStatus::shallow;
    return out;
  }

  const double lambda_cf = (ell_norm / dd) * (dd - 1.0) / (ell_norm - 1.0);
  double lambda = lambda_cf;
  bool refined = false;
  if (refine) {
    const double lambda_r = refine_lambda(ell.a, u2, lambda_cf);
    // Keep the refinement only when it does not increase the volume.
    if (phi(lambda_r, ell.a, u2) <= phi(lambda_cf, ell.a, u2)) {
      lambda = lambda_r;
      refined = true;
    }
  }

  Ellipsoid next{Vec(d)};
  double drop = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    next.a[i] = lambda * ell.a[i] + (1.0 - lambda) * u2[i];
    drop += 0.5 * (std::log(next.a[i]) - std::log(ell.a[i]));
  }
  if (!(drop > 0.0)) {
    out.status = CutStatus::shallow;
    return out;
  }
  out.set = std::move(next);
  out.log_volume_drop = drop;
  out.lambda_used = lambda;
  out.refined = refined;
  return out;
}

}  // namespace

CutOutcome cut(const CandidateSet& s, std::span<const double> u, bool refine,
               double gamma) {
  if (const auto* iv = std::get_if<Interval>(&s)) {
    CutOutcome out;
    out.set = Interval{gamma * iv->alpha_max, iv->d};
    out.log_volume_drop = -std::log(gamma);
    return out;
  }
  if (u.size() != set_dim(s)) throw std::invalid_argument("cut: dimension mismatch");
  bool any_positive = false;
  for (double ui : u) {
    if (ui < 0.0) throw std::invalid_argument("cut: u must be non-negative");
    if (ui > 0.0) any_positive = true;
  }
  if (!any_positive) throw std::invalid_argument("cut: u must be non-zero");
  if (const auto* box = std::get_if<Box>(&s)) return cut_box(*box, u);
  return cut_ellipsoid(std::get<Ellipsoid>(s), u, refine);
}

CandidateSet forward_step(const CandidateSet& s) {
  if (const auto* iv = std::get_if<Interval>(&s))
    return Interval{1.1 * iv->alpha_max, iv->d};
  if (const auto* box = std::get_if<Box>(&s)) {
    Box next{box->b};
    for (auto& bi : next.b) bi *= 1.1;
    return next;
  }
  const auto& ell = std::get<Ellipsoid>(s);
  Ellipsoid next{ell.a};
  const double shrink = 1.0 / std::sqrt(1.1);
  for (auto& ai : next.a) ai *= shrink;
  return next;
}

CandidateSet uniform_shrink(const CandidateSet& s) {
  if (const auto* iv = std::get_if<Interval>(&s))
    return Interval{0.5 * iv->alpha_max, iv->d};
  if (const auto* box = std::get_if<Box>(&s)) {
    Box next{box->b};
    for (auto& bi : next.b) bi *= 0.5;
    return next;
  }
  const auto& ell = std::get<Ellipsoid>(s);
  Ellipsoid next{ell.a};
  for (auto& ai : next.a) ai *= 4.0;
  return next;
}

double log_volume(const CandidateSet& s) {
  if (const auto* iv = std::get_if<Interval>(&s)) return std::log(iv->alpha_max);
  if (const auto* box = std::get_if<Box>(&s)) {
    double lv = 0.0;
    for (double bi : box->b) lv += std::log(bi);
    return lv;
  }
  const auto& ell = std::get<Ellipsoid>(s);
  double lv = 0.0;
  for (double ai : ell.a) lv -= 0.5 * std::log(ai);
  return lv;
}

double max_semi_axis(const CandidateSet& s) {
  if (const auto* iv = std::get_if<Interval>(&s)) return iv->alpha_max;
  if (const auto* box = std::get_if<Box>(&s)) {
    double m = 0.0;
    for (double bi : box->b) m = std::max(m, bi);
    return m;
  }
  const auto& ell = std::get<Ellipsoid>(s);
  double m = 0.0;
  for (double ai : ell.a) m = std::max(m, 1.0 / std::sqrt(ai));
  return m;
}

bool contains(const CandidateSet& s, std::span<const double> p, double tol) {
  for (double pi : p)
    if (pi < -tol) return false;
  if (const auto* iv = std::get_if<Interval>(&s)) {
    for (double pi : p)
      if (pi > iv->alpha_max * (1.0 + tol)) return false;
    return true;
  }
  if (const auto* box = std::get_if<Box>(&s)) {
    if (p.size() != box->b.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > box->b[i] * (1.0 + tol)) return false;
    return true;
  }
  const auto& ell = std::get<Ellipsoid>(s);
  if (p.size() != ell.a.size()) return false;
  double q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) q += ell.a[i] * p[i] * p[i];
  return q <= 1.0 + tol;
}

}  // namespace mdbt
