#include "mdbt/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mdbt/dataio.hpp"

namespace mdbt::oracle {

namespace {

void require_symmetric(const linalg::DenseMatrix& A) {
  double scale = 0.0;
  for (double v : A.a) scale = std::max(scale, std::fabs(v));
  for (std::size_t i = 0; i < A.n; ++i)
    for (std::size_t j = i + 1; j < A.n; ++j)
      if (std::fabs(A.at(i, j) - A.at(j, i)) > 1e-12 * (1.0 + scale))
        throw std::invalid_argument("oracle: matrix is not symmetric");
}

linalg::DenseMatrix conjugate_by_sqrt_diag(const linalg::DenseMatrix& A,
                                           std::span<const double> p) {
  linalg::DenseMatrix m(A.n);
  std::vector<double> sq(A.n);
  for (std::size_t i = 0; i < A.n; ++i) {
    if (p[i] < 0.0) throw std::invalid_argument("oracle: preconditioner must be >= 0");
    sq[i] = std::sqrt(p[i]);
  }
  for (std::size_t i = 0; i < A.n; ++i)
    for (std::size_t j = 0; j < A.n; ++j) m.at(i, j) = sq[i] * A.at(i, j) * sq[j];
  return m;
}

// Rank of a PSD matrix from its spectrum (relative zero threshold).
// Conjugation by a positive diagonal preserves this rank, so the rank is
// computed once from A and reused for every preconditioned spectrum;
// per-point thresholding would alias badly scaled PD matrices to
// low-rank ones.
std::size_t psd_rank(const std::vector<double>& eig) {
  const double lmax = eig.back();
  if (lmax <= 0.0) return 0;
  if (eig.front() < -1e-12 * lmax)
    throw std::invalid_argument("oracle: matrix is not positive semidefinite");
  std::size_t r = 0;
  for (double l : eig)
    if (l > lmax * 1e-10) ++r;
  return r;
}

// kappa = lambda_max / lambda_min restricted to the (known) rank-r range.
double kappa_of_eigs(const std::vector<double>& eig, std::size_t rank) {
  if (rank == 0) return 1.0;
  const double lmax = eig.back();
  const double lmin = eig[eig.size() - rank];
  if (!(lmin > 0.0) || !(lmax > 0.0))
    return std::numeric_limits<double>::infinity();
  return lmax / lmin;
}

double kappa_preconditioned(const linalg::DenseMatrix& A, std::span<const double> p,
                            std::size_t rank) {
  return kappa_of_eigs(linalg::jacobi_eigenvalues(conjugate_by_sqrt_diag(A, p)), rank);
}

}  // namespace

double smoothness_L(const linalg::DenseMatrix& A) {
  require_symmetric(A);
  if (A.n == 0) throw std::invalid_argument("oracle: empty matrix");
  return linalg::jacobi_eigenvalues(A).back();
}

double kappa(const linalg::DenseMatrix& A) {
  require_symmetric(A);
  const auto eig = linalg::jacobi_eigenvalues(A);
  return kappa_of_eigs(eig, psd_rank(eig));
}

double preconditioned_lambda_max(const linalg::DenseMatrix& A,
                                 std::span<const double> p) {
  return linalg::jacobi_eigenvalues(conjugate_by_sqrt_diag(A, p)).back();
}

bool is_valid_preconditioner(const linalg::DenseMatrix& A, std::span<const double> p) {
  require_symmetric(A);
  if (A.n != p.size()) throw std::invalid_argument("oracle: dimension mismatch");
  return preconditioned_lambda_max(A, p) <= 1.0 + 1e-9;
}

namespace {

// One golden-section minimization of kappa along coordinate c of log p.
double golden_coordinate(const linalg::DenseMatrix& A, std::size_t rank, Vec& logp,
                         std::size_t c, double span) {
  constexpr double inv_phi = 0.6180339887498949;
  double lo = logp[c] - span, hi = logp[c] + span;
  Vec p(logp.size());
  auto eval = [&](double z) {
    logp[c] = z;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(logp[i]);
    return kappa_preconditioned(A, p, rank);
  };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    }
  }
  const double best = f1 < f2 ? x1 : x2;
  logp[c] = best;
  return f1 < f2 ? f1 : f2;
}

OptimalPrecondReport finalize_report(const linalg::DenseMatrix& A, std::size_t rank,
                                     Vec p, std::string method) {
  // Scale so lambda_max(P^{1/2} A P^{1/2}) = 1, the tight upper
  // constraint; the feasible set is scale-redundant.
  const double lmax = preconditioned_lambda_max(A, p);
  if (lmax > 0.0)
    for (auto& pi : p) pi /= lmax;
  OptimalPrecondReport rep;
  const auto eig = linalg::jacobi_eigenvalues(conjugate_by_sqrt_diag(A, p));
  rep.kappa_star = kappa_of_eigs(eig, rank);
  const double lmax_after = eig.back();
  const double lmin_range = rank > 0 ? eig[eig.size() - rank] : lmax_after;
  rep.residual = std::max(std::fabs(lmax_after - 1.0),
                          std::fabs(rep.kappa_star * lmin_range - lmax_after));
  rep.p_star = std::move(p);
  rep.method = std::move(method);
  return rep;
}

}  // namespace

OptimalPrecondReport optimal_diag_precond(const linalg::DenseMatrix& A, double tol) {
  require_symmetric(A);
  const std::size_t d = A.n;
  if (d == 0) throw std::invalid_argument("oracle: empty matrix");
  std::size_t rank = 0;
  {
    const auto eig = linalg::jacobi_eigenvalues(A);
    if (eig.front() < -1e-12 * std::max(eig.back(), 0.0) || eig.back() <= 0.0)
      throw std::invalid_argument("oracle: matrix must be PSD and non-zero");
    rank = psd_rank(eig);
  }

  bool diagonal = true;
  for (std::size_t i = 0; i < d && diagonal; ++i)
    for (std::size_t j = 0; j < d && diagonal; ++j)
      if (i != j && A.at(i, j) != 0.0) diagonal = false;
  if (diagonal) {
    Vec p(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (A.at(i, i) <= 0.0)
        throw std::invalid_argument("oracle: diagonal matrix must be positive");
      p[i] = 1.0 / A.at(i, i);
    }
    return finalize_report(A, rank, std::move(p), "closed_form_diagonal");
  }

  if (d > 6)
    throw std::invalid_argument("oracle: numeric search supports d <= 6");

  Vec center(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double aii = A.at(i, i);
    center[i] = aii > 0.0 ? -std::log(aii) : 0.0;
  }

  Vec best_logp;
  double best_kappa = std::numeric_limits<double>::infinity();
  Xoshiro256pp rng(0x9d1f0c5u);
  for (int restart = 0; restart < 8; ++restart) {
    Vec logp = center;
    if (restart > 0)
      for (auto& z : logp) z += uniform_in(rng, -2.0, 2.0);

    double current = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < 200; ++sweep) {
      double after = current;
      for (std::size_t c = 0; c < d; ++c) after = golden_coordinate(A, rank, logp, c, 3.0);
      if (std::isfinite(current) && current - after < tol * (1.0 + after)) {
        current = after;
        break;
      }
      current = after;
    }
    // Strict improvement keeps the first (centered) solution on ties, so
    // flat ridges resolve to the 1/diag(A) representative.
    if (current < best_kappa * (1.0 - 1e-12)) {
      best_kappa = current;
      best_logp = logp;
    } else if (best_logp.empty()) {
      best_kappa = current;
      best_logp = logp;
    }
  }

  Vec p(d);
  for (std::size_t i = 0; i < d; ++i) p[i] = std::exp(best_logp[i]);
  return finalize_report(A, rank, std::move(p), "numeric_search");
}

OptimalPrecondReport optimal_diag_precond_grid(const linalg::DenseMatrix& A,
                                               int points_per_axis, double decades) {
  require_symmetric(A);
  const std::size_t d = A.n;
  if (d == 0 || d > 3)
    throw std::invalid_argument("oracle grid: supports 1 <= d <= 3");
  const std::size_t rank = psd_rank(linalg::jacobi_eigenvalues(A));

  Vec center(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double aii = A.at(i, i);
    center[i] = aii > 0.0 ? -std::log(aii) : 0.0;
  }
  const double half_span = decades * std::log(10.0);

  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(points_per_axis);

  Vec p(d), best_p;
  double best_kappa = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t gi = rest % points_per_axis;
      rest /= points_per_axis;
      const double frac =
          points_per_axis == 1
              ? 0.5
              : static_cast<double>(gi) / static_cast<double>(points_per_axis - 1);
      p[i] = std::exp(center[i] + (2.0 * frac - 1.0) * half_span);
    }
    const double k = kappa_preconditioned(A, p, rank);
    if (k < best_kappa) {
      best_kappa = k;
      best_p = p;
    }
  }
  return finalize_report(A, rank, std::move(best_p), "grid");
}

}  // namespace mdbt::oracle
