#include "mdbt/vec.hpp"

#include <cmath>
#include <stdexcept>

namespace mdbt {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double weighted_sqnorm(std::span<const double> g, std::span<const double> p) {
  if (g.size() != p.size())
    throw std::invalid_argument("weighted_sqnorm: dimension mismatch");
  return kernels::active().weighted_sqnorm(g.data(), p.data(), g.size());
}

namespace {
Vec binary_op(std::span<const double> a, std::span<const double> b,
              void (*op)(double*, const double*, const double*, std::size_t),
              const char* name) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(name) + ": dimension mismatch");
  Vec out(a.size());
  op(out.data(), a.data(), b.data(), a.size());
  return out;
}
}  // namespace

Vec ew_mul(std::span<const double> a, std::span<const double> b) {
  return binary_op(a, b, kernels::active().mul, "ew_mul");
}
Vec ew_min(std::span<const double> a, std::span<const double> b) {
  return binary_op(a, b, kernels::active().vmin, "ew_min");
}
Vec ew_max(std::span<const double> a, std::span<const double> b) {
  return binary_op(a, b, kernels::active().vmax, "ew_max");
}
Vec ew_div_guarded(std::span<const double> a, std::span<const double> b) {
  return binary_op(a, b, kernels::active().div_guarded, "ew_div_guarded");
}
Vec ew_square(std::span<const double> a) {
  Vec out(a.size());
  kernels::active().square(out.data(), a.data(), a.size());
  return out;
}

void CsrMatrix::validate() const {
  if (row_offsets.size() != rows + 1)
    throw std::invalid_argument("csr: row_offsets size mismatch");
  if (row_offsets.front() != 0 || row_offsets.back() != values.size())
    throw std::invalid_argument("csr: row_offsets endpoints");
  if (col_indices.size() != values.size())
    throw std::invalid_argument("csr: col_indices size mismatch");
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1])
      throw std::invalid_argument("csr: decreasing row_offsets");
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] >= cols)
        throw std::invalid_argument("csr: column index out of range");
      if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1])
        throw std::invalid_argument("csr: column indices not strictly increasing");
    }
  }
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) m.row_offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) m.col_indices[i] = static_cast<std::uint32_t>(i);
  return m;
}

CsrMatrix CsrMatrix::from_dense(std::size_t rows, std::size_t cols,
                                const double* row_major) {
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.resize(rows + 1, 0);
  m.col_indices.reserve(rows * cols);
  m.values.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m.col_indices.push_back(static_cast<std::uint32_t>(j));
      m.values.push_back(row_major[i * cols + j]);
    }
    m.row_offsets[i + 1] = m.values.size();
  }
  return m;
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> d(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      d[i * cols + col_indices[k]] = values[k];
  return d;
}

bool CsrMatrix::is_symmetric(double rtol) const {
  if (rows != cols) return false;
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::fabs(v));
  const auto d = to_dense();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i + 1; j < cols; ++j)
      if (std::fabs(d[i * cols + j] - d[j * cols + i]) > rtol * (1.0 + scale))
        return false;
  return true;
}

bool CsrMatrix::is_diagonal() const {
  if (rows != cols) return false;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      if (col_indices[k] != i && values[k] != 0.0) return false;
  return true;
}

Vec spmv(const CsrMatrix& A, std::span<const double> x) {
  if (A.cols != x.size()) throw std::invalid_argument("spmv: dimension mismatch");
  const auto& ops = kernels::active();
  Vec y(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    const std::size_t begin = A.row_offsets[i];
    y[i] = ops.csr_row_dot(A.values.data() + begin, A.col_indices.data() + begin,
                           A.row_offsets[i + 1] - begin, x.data());
  }
  return y;
}

}  // namespace mdbt
