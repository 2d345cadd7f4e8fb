#include "mdbt/kernels.hpp"

#include <cmath>
#include <limits>

namespace mdbt::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

double weighted_sqnorm_scalar(const double* g, const double* p, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gg = g[i] * g[i];
    acc = std::fma(gg, p[i], acc);
  }
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double max_abs_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void step_scalar(double* out, const double* x, const double* p, const double* g,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(-p[i], g[i], x[i]);
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void mul_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void vmin_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void vmax_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

void square_scalar(double* out, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * a[i];
}

void div_guarded_scalar(double* out, const double* a, const double* b,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = b[i] == 0.0 ? std::numeric_limits<double>::infinity() : a[i] / b[i];
}

double csr_row_dot_scalar(const double* vals, const std::uint32_t* cols,
                          std::size_t nnz, const double* x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < nnz; ++k) acc = std::fma(vals[k], x[cols[k]], acc);
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar",         dot_scalar,  weighted_sqnorm_scalar,
      sum_scalar,       max_abs_scalar, step_scalar,
      axpy_scalar,      mul_scalar,  vmin_scalar,
      vmax_scalar,      square_scalar, div_guarded_scalar,
      csr_row_dot_scalar};
  return ops;
}

}  // namespace mdbt::kernels
