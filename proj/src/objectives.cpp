#include "mdbt/objectives.hpp"

#include <cmath>
#include <stdexcept>

#include "mdbt/errors.hpp"

namespace mdbt {

void Objective::hessian_diagonal(std::span<const double>, Vec&) const {
  throw Unsupported("objective does not expose a Hessian diagonal");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

namespace {
void check_dim(std::size_t expected, std::size_t got, const char* who) {
  if (expected != got)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace

// ---------------------------------------------------------------- quadratic

QuadraticObjective::QuadraticObjective(CsrMatrix A, Vec b, double c)
    : A_(std::move(A)), b_(std::move(b)), c_(c) {
  A_.validate();
  if (A_.rows != A_.cols)
    throw std::invalid_argument("quadratic: matrix must be square");
  if (!A_.is_symmetric())
    throw std::invalid_argument("quadratic: matrix must be symmetric");
  if (b_.empty()) b_.assign(A_.rows, 0.0);
  check_dim(A_.rows, b_.size(), "quadratic");
}

double QuadraticObjective::value(std::span<const double> x) const {
  check_dim(dim(), x.size(), "quadratic::value");
  const Vec ax = spmv(A_, x);
  return 0.5 * dot(x, ax) - dot(b_, x) + c_;
}

void QuadraticObjective::gradient(std::span<const double> x, Vec& out) const {
  check_dim(dim(), x.size(), "quadratic::gradient");
  out = spmv(A_, x);
  kernels::active().axpy(out.data(), -1.0, b_.data(), out.size());
}

double QuadraticObjective::value_and_gradient(std::span<const double> x,
                                              Vec& out) const {
  check_dim(dim(), x.size(), "quadratic::value_and_gradient");
  const Vec ax = spmv(A_, x);
  const double f = 0.5 * dot(x, ax) - dot(b_, x) + c_;
  out = ax;
  kernels::active().axpy(out.data(), -1.0, b_.data(), out.size());
  return f;
}

void QuadraticObjective::hessian_diagonal(std::span<const double> x, Vec& out) const {
  check_dim(dim(), x.size(), "quadratic::hessian_diagonal");
  out.assign(dim(), 0.0);
  for (std::size_t i = 0; i < A_.rows; ++i)
    for (std::size_t k = A_.row_offsets[i]; k < A_.row_offsets[i + 1]; ++k)
      if (A_.col_indices[k] == i) out[i] = A_.values[k];
}

// ------------------------------------------------------- linear regression

LinearRegressionL2::LinearRegressionL2(CsrMatrix X, Vec y)
    : X_(std::move(X)), y_(std::move(y)) {
  X_.validate();
  check_dim(X_.rows, y_.size(), "linreg");
  if (X_.rows == 0) throw std::invalid_argument("linreg: empty dataset");
}

double LinearRegressionL2::value(std::span<const double> w) const {
  check_dim(dim(), w.size(), "linreg::value");
  Vec r = spmv(X_, w);
  kernels::active().axpy(r.data(), -1.0, y_.data(), r.size());
  const double n = static_cast<double>(X_.rows);
  return (0.5 * dot(r, r) + 0.5 * dot(w, w)) / n;
}

void LinearRegressionL2::gradient(std::span<const double> w, Vec& out) const {
  value_and_gradient(w, out);
}

double LinearRegressionL2::value_and_gradient(std::span<const double> w,
                                              Vec& out) const {
  check_dim(dim(), w.size(), "linreg::gradient");
  Vec r = spmv(X_, w);
  kernels::active().axpy(r.data(), -1.0, y_.data(), r.size());
  const double n = static_cast<double>(X_.rows);
  out.assign(dim(), 0.0);
  // X^T r, accumulated row by row.
  for (std::size_t i = 0; i < X_.rows; ++i) {
    const double ri = r[i];
    if (ri == 0.0) continue;
    for (std::size_t k = X_.row_offsets[i]; k < X_.row_offsets[i + 1]; ++k)
      out[X_.col_indices[k]] += X_.values[k] * ri;
  }
  for (std::size_t j = 0; j < dim(); ++j) out[j] = (out[j] + w[j]) / n;
  return (0.5 * dot(r, r) + 0.5 * dot(w, w)) / n;
}

void LinearRegressionL2::hessian_diagonal(std::span<const double> w, Vec& out) const {
  check_dim(dim(), w.size(), "linreg::hessian_diagonal");
  out.assign(dim(), 0.0);
  for (std::size_t k = 0; k < X_.nnz(); ++k)
    out[X_.col_indices[k]] += X_.values[k] * X_.values[k];
  const double n = static_cast<double>(X_.rows);
  for (std::size_t j = 0; j < dim(); ++j) out[j] = (out[j] + 1.0) / n;
}

// ----------------------------------------------------- logistic regression

LogisticRegressionL2::LogisticRegressionL2(CsrMatrix X, Vec y01)
    : X_(std::move(X)), y_(std::move(y01)) {
  X_.validate();
  check_dim(X_.rows, y_.size(), "logreg");
  if (X_.rows == 0) throw std::invalid_argument("logreg: empty dataset");
  for (double y : y_)
    if (y != 0.0 && y != 1.0)
      throw std::invalid_argument("logreg: labels must be 0 or 1");
}

double LogisticRegressionL2::value(std::span<const double> w) const {
  check_dim(dim(), w.size(), "logreg::value");
  const Vec z = spmv(X_, w);
  const double n = static_cast<double>(X_.rows);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    loss += y_[i] * softplus(-z[i]) + (1.0 - y_[i]) * softplus(z[i]);
  return (loss + 0.5 * dot(w, w)) / n;
}

void LogisticRegressionL2::gradient(std::span<const double> w, Vec& out) const {
  value_and_gradient(w, out);
}

double LogisticRegressionL2::value_and_gradient(std::span<const double> w,
                                                Vec& out) const {
  check_dim(dim(), w.size(), "logreg::gradient");
  const Vec z = spmv(X_, w);
  const double n = static_cast<double>(X_.rows);
  double loss = 0.0;
  out.assign(dim(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    loss += y_[i] * softplus(-z[i]) + (1.0 - y_[i]) * softplus(z[i]);
    const double si = sigmoid(z[i]) - y_[i];
    if (si == 0.0) continue;
    for (std::size_t k = X_.row_offsets[i]; k < X_.row_offsets[i + 1]; ++k)
      out[X_.col_indices[k]] += X_.values[k] * si;
  }
  for (std::size_t j = 0; j < dim(); ++j) out[j] = (out[j] + w[j]) / n;
  return (loss + 0.5 * dot(w, w)) / n;
}

void LogisticRegressionL2::hessian_diagonal(std::span<const double> w, Vec& out) const {
  check_dim(dim(), w.size(), "logreg::hessian_diagonal");
  const Vec z = spmv(X_, w);
  out.assign(dim(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double s = sigmoid(z[i]);
    const double si = s * (1.0 - s);
    for (std::size_t k = X_.row_offsets[i]; k < X_.row_offsets[i + 1]; ++k)
      out[X_.col_indices[k]] += si * X_.values[k] * X_.values[k];
  }
  const double n = static_cast<double>(X_.rows);
  for (std::size_t j = 0; j < dim(); ++j) out[j] = (out[j] + 1.0) / n;
}

// -------------------------------------------------------- counted wrappers

double eval_value(const Objective& obj, std::span<const double> x,
                  OracleCounter& ctr) {
  ctr.n_value_evals += 1;
  const double f = obj.value(x);
  if (!std::isfinite(f)) throw NumericalOverflow("objective value is not finite");
  return f;
}

Vec eval_gradient(const Objective& obj, std::span<const double> x,
                  OracleCounter& ctr) {
  ctr.n_grad_evals += 1;
  Vec g;
  obj.gradient(x, g);
  if (!all_finite(g)) throw NumericalOverflow("gradient is not finite");
  return g;
}

double eval_value_and_gradient(const Objective& obj, std::span<const double> x,
                               Vec& grad, OracleCounter& ctr) {
  ctr.n_value_evals += 1;
  ctr.n_grad_evals += 1;
  const double f = obj.value_and_gradient(x, grad);
  if (!std::isfinite(f)) throw NumericalOverflow("objective value is not finite");
  if (!all_finite(grad)) throw NumericalOverflow("gradient is not finite");
  return f;
}

}  // namespace mdbt
