#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdbt/vec.hpp"

namespace mdbt::linalg {

/// Row-major dense square matrix, used for the small (d <= 64) problems
/// handled by the ground-truth utilities.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;  // n*n, row-major

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

DenseMatrix dense_from_csr(const CsrMatrix& m);

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method,
/// returned in ascending order. Converges to ~1e-15 * max|a_ij|.
std::vector<double> jacobi_eigenvalues(DenseMatrix m);

/// Random orthogonal matrix from the QR factorization of a Gaussian
/// matrix (Householder reflections), deterministic in the seed.
DenseMatrix random_rotation(std::size_t n, std::uint64_t seed);

/// Conjugate gradients for symmetric positive definite A x = b.
/// Iterates until ||Ax-b|| <= rtol * ||b|| or 10n iterations.
Vec cg_solve(const CsrMatrix& A, std::span<const double> b, double rtol = 1e-14);

}  // namespace mdbt::linalg
