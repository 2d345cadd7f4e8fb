#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mdbt/kernels.hpp"

namespace mdbt {

using Vec = std::vector<double>;

bool all_finite(std::span<const double> v);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels::active().dot(a.data(), b.data(), a.size());
}

/// ||g||^2_P = sum_i p[i] * g[i]^2 for a diagonal preconditioner p >= 0.
double weighted_sqnorm(std::span<const double> g, std::span<const double> p);

inline double linf_norm(std::span<const double> v) {
  return kernels::active().max_abs(v.data(), v.size());
}

Vec ew_mul(std::span<const double> a, std::span<const double> b);
Vec ew_min(std::span<const double> a, std::span<const double> b);
Vec ew_max(std::span<const double> a, std::span<const double> b);
Vec ew_square(std::span<const double> a);
/// a[i]/b[i] with the convention x/0 = +inf.
Vec ew_div_guarded(std::span<const double> a, std::span<const double> b);

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row. Dense matrices are stored as CSR with full rows.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_offsets;  // rows + 1 entries
  std::vector<std::uint32_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  /// Throws std::invalid_argument if the structural invariants are broken.
  void validate() const;

  static CsrMatrix identity(std::size_t n);
  static CsrMatrix from_dense(std::size_t rows, std::size_t cols,
                              const double* row_major);
  std::vector<double> to_dense() const;  // row-major, rows*cols

  bool is_symmetric(double rtol = 1e-12) const;
  bool is_diagonal() const;
};

Vec spmv(const CsrMatrix& A, std::span<const double> x);

}  // namespace mdbt
