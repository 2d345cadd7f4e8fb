#pragma once

#include <span>
#include <variant>

#include "mdbt/vec.hpp"

namespace mdbt {

/// Candidate regions over diagonal preconditioners.
///   Interval:  {alpha * 1 : alpha in [0, alpha_max]}
///   Box:       {p >= 0 : p <= b}
///   Ellipsoid: {p >= 0 : sum_i a[i] p[i]^2 <= 1}  (centered, axis-aligned)
struct Interval {
  double alpha_max = 0.0;
  std::size_t d = 1;
};
struct Box {
  Vec b;
};
struct Ellipsoid {
  Vec a;
};
using CandidateSet = std::variant<Interval, Box, Ellipsoid>;

enum class SetKind { interval, box, ellipsoid };

SetKind kind_of(const CandidateSet& s);
std::size_t set_dim(const CandidateSet& s);

/// interval: [0, c0]; box: b = c0 * 1; ellipsoid: a = 1/(d c0^2) * 1,
/// putting c0 * 1 on the boundary. c0 must dominate the optimal
/// preconditioner (caller's responsibility).
CandidateSet init_set(SetKind kind, std::size_t d, double c0);

/// 1/2 (interval), 1/(2d) (box), 1/sqrt(2d) (ellipsoid).
double default_gamma(SetKind kind, std::size_t d);

/// Candidate diagonal backtracked into the set by gamma. Interval and box
/// ignore g; the ellipsoid returns gamma * argmax_{p in E(a)} <g^2, p>,
/// i.e. gamma * A^{-1}g^2 / ||g^2||_{A^{-1}}, which satisfies
/// ||p||_A = gamma exactly. Throws ZeroGradient for the ellipsoid if g=0.
Vec candidate(const CandidateSet& s, double gamma, std::span<const double> g);

enum class CutStatus {
  ok,
  shallow,  // cut would not shrink the set (ellipsoid: ell <= d)
};

struct CutOutcome {
  CutStatus status = CutStatus::ok;
  CandidateSet set;
  double log_volume_drop = 0.0;  // > 0 for every successful cut
  double lambda_used = 0.0;      // ellipsoid only
  bool refined = false;
};

/// Shrinks the set by the half-space {p : <u, p> <= 1}:
///   box:       b+ = min(b, 1/u) elementwise (minimum-volume box)
///   ellipsoid: a+ = lambda a + (1-lambda) u^2 with
///              lambda = (ell/d)(d-1)/(ell-1), ell = ||u||^2_{A^{-1}};
///              refine=true additionally minimizes the new volume over
///              lambda (1-D convex problem, bisection), keeping the
///              closed form when it is no worse
///   interval:  alpha_max *= gamma (u is ignored)
/// d=1 ellipsoids take the tight 1-D cut a+ = u^2.
CutOutcome cut(const CandidateSet& s, std::span<const double> u, bool refine,
               double gamma = 0.5);

/// Enlarges the set after an accepted step: box *= 1.1,
/// ellipsoid a /= sqrt(1.1), interval *= 1.1.
CandidateSet forward_step(const CandidateSet& s);

/// Fallback when no usable hyperplane exists: halve every semi-axis
/// (box b/2, ellipsoid a*4, interval alpha_max/2).
CandidateSet uniform_shrink(const CandidateSet& s);

/// Up to an additive constant: box sum log b[i]; ellipsoid
/// -1/2 sum log a[i]; interval log alpha_max.
double log_volume(const CandidateSet& s);

/// Largest semi-axis; runs abort with SetCollapsed when this drops
/// under 1e-18.
double max_semi_axis(const CandidateSet& s);

bool contains(const CandidateSet& s, std::span<const double> p, double tol = 1e-12);

}  // namespace mdbt
