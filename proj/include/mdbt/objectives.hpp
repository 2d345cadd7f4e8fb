#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "mdbt/vec.hpp"

namespace mdbt {

/// Counts f / grad(f) evaluations, the cost unit of all convergence
/// traces. One counter per run, single writer.
struct OracleCounter {
  std::uint64_t n_value_evals = 0;
  std::uint64_t n_grad_evals = 0;
  std::uint64_t total() const { return n_value_evals + n_grad_evals; }
};

/// Smooth convex objective over dense parameter vectors. Implementations
/// are immutable and safe to share across concurrent runs.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t dim() const = 0;
  virtual bool has_hessian_diag() const { return false; }

  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, Vec& out) const = 0;
  /// Fused evaluation; callers still account for one value and one
  /// gradient call.
  virtual double value_and_gradient(std::span<const double> x, Vec& out) const {
    gradient(x, out);
    return value(x);
  }
  /// diag(hess f(x)); throws Unsupported unless has_hessian_diag().
  virtual void hessian_diagonal(std::span<const double> x, Vec& out) const;
};

/// f(x) = 1/2 <x, Ax> - <b, x> + c with A symmetric PSD.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(CsrMatrix A, Vec b = {}, double c = 0.0);
  std::size_t dim() const override { return A_.rows; }
  bool has_hessian_diag() const override { return true; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, Vec& out) const override;
  double value_and_gradient(std::span<const double> x, Vec& out) const override;
  void hessian_diagonal(std::span<const double> x, Vec& out) const override;

  const CsrMatrix& matrix() const { return A_; }
  const Vec& linear_term() const { return b_; }
  double constant_term() const { return c_; }

 private:
  CsrMatrix A_;
  Vec b_;
  double c_;
};

/// f(w) = (1/n) (1/2 ||Xw - y||^2 + 1/2 ||w||^2)
class LinearRegressionL2 final : public Objective {
 public:
  LinearRegressionL2(CsrMatrix X, Vec y);
  std::size_t dim() const override { return X_.cols; }
  bool has_hessian_diag() const override { return true; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, Vec& out) const override;
  double value_and_gradient(std::span<const double> x, Vec& out) const override;
  void hessian_diagonal(std::span<const double> x, Vec& out) const override;

 private:
  CsrMatrix X_;
  Vec y_;
};

/// Regularized logistic loss with labels in {0,1}:
/// f(w) = (1/n) sum_i [y_i softplus(-z_i) + (1-y_i) softplus(z_i)]
///        + (1/n) 1/2 ||w||^2,  z = Xw.
/// softplus is evaluated in its overflow-safe branch form.
class LogisticRegressionL2 final : public Objective {
 public:
  LogisticRegressionL2(CsrMatrix X, Vec y01);
  std::size_t dim() const override { return X_.cols; }
  bool has_hessian_diag() const override { return true; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, Vec& out) const override;
  double value_and_gradient(std::span<const double> x, Vec& out) const override;
  void hessian_diagonal(std::span<const double> x, Vec& out) const override;

 private:
  CsrMatrix X_;
  Vec y_;
};

/// Counting wrappers. The counter is bumped exactly once per evaluation,
/// including evaluations that overflow; a non-finite result raises
/// NumericalOverflow after counting.
double eval_value(const Objective& obj, std::span<const double> x, OracleCounter& ctr);
Vec eval_gradient(const Objective& obj, std::span<const double> x, OracleCounter& ctr);
double eval_value_and_gradient(const Objective& obj, std::span<const double> x,
                               Vec& grad, OracleCounter& ctr);

double sigmoid(double z);
double softplus(double z);

}  // namespace mdbt
