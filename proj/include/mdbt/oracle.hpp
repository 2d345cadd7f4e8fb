#pragma once

#include <span>
#include <string>

#include "mdbt/linalg.hpp"
#include "mdbt/vec.hpp"

namespace mdbt::oracle {

/// lambda_max of a symmetric matrix (d <= 64, dense Jacobi eigensolve).
double smoothness_L(const linalg::DenseMatrix& A);

/// Condition number lambda_max / lambda_min+ of a symmetric PSD matrix,
/// where lambda_min+ is the smallest eigenvalue above a relative zero
/// threshold. Singular PSD matrices thus get the condition number of
/// their range restriction. Throws on clearly indefinite input.
double kappa(const linalg::DenseMatrix& A);

/// Valid iff lambda_max(P^{1/2} A P^{1/2}) <= 1, with 1e-9 boundary
/// tolerance (touching counts as valid).
bool is_valid_preconditioner(const linalg::DenseMatrix& A, std::span<const double> p);

/// lambda_max(P^{1/2} A P^{1/2}) for diagnostics.
double preconditioned_lambda_max(const linalg::DenseMatrix& A, std::span<const double> p);

struct OptimalPrecondReport {
  Vec p_star;
  double kappa_star = 1.0;
  std::string method;     // "closed_form_diagonal" or "numeric_search"
  double residual = 0.0;  // certificate slack
};

/// Brute-force optimal diagonal preconditioner: minimizes
/// kappa(P^{1/2} A P^{1/2}) over log-diagonals by coordinate-wise
/// golden-section sweeps with seeded random restarts (d <= 6 for the
/// numeric search; diagonal A of any size has the closed form 1/diag(A)).
/// The result is scaled so lambda_max(P^{1/2} A P^{1/2}) = 1.
OptimalPrecondReport optimal_diag_precond(const linalg::DenseMatrix& A,
                                          double tol = 1e-6);

/// Exhaustive log-space grid search (points_per_axis^d evaluations over
/// +-decades around 1/diag(A)); cross-check oracle for d <= 3.
OptimalPrecondReport optimal_diag_precond_grid(const linalg::DenseMatrix& A,
                                               int points_per_axis = 41,
                                               double decades = 6.0);

}  // namespace mdbt::oracle
