#include "mdbt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdbt/dataio.hpp"

namespace mdbt::linalg {

DenseMatrix dense_from_csr(const CsrMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("dense_from_csr: not square");
  DenseMatrix d(m.rows);
  d.a = m.to_dense();
  return d;
}

std::vector<double> jacobi_eigenvalues(DenseMatrix m) {
  const std::size_t n = m.n;
  if (n == 0) return {};
  if (n == 1) return {m.at(0, 0)};

  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::fabs(v));
  const double tol = (scale == 0.0 ? 0.0 : scale * 1e-15);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(m.at(p, q)));
    if (off <= tol) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m.at(p, q);
        if (std::fabs(apq) <= tol) continue;
        const double app = m.at(p, p);
        const double aqq = m.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        // Smaller-angle rotation root for numerical stability.
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m.at(k, p);
          const double akq = m.at(k, q);
          m.at(k, p) = c * akp - s * akq;
          m.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m.at(p, k);
          const double aqk = m.at(q, k);
          m.at(p, k) = c * apk - s * aqk;
          m.at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

DenseMatrix random_rotation(std::size_t n, std::uint64_t seed) {
  // QR of a Gaussian matrix via Householder reflections; Q is accumulated
  // explicitly. Sign of R's diagonal is fixed so Q is unique.
  DenseMatrix g(n);
  {
    Vec entries = gaussian_vector(n * n, seed);
    g.a = std::move(entries);
  }
  DenseMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) q.at(i, i) = 1.0;

  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += g.at(i, k) * g.at(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = g.at(k, k) >= 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      v[i] = g.at(i, k) - (i == k ? alpha : 0.0);
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    // Apply H = I - 2 v v^T / (v^T v) to G (left) and accumulate into Q.
    for (std::size_t j = k; j < n; ++j) {
      double proj = 0.0;
      for (std::size_t i = k; i < n; ++i) proj += v[i] * g.at(i, j);
      proj *= 2.0 / vnorm2;
      for (std::size_t i = k; i < n; ++i) g.at(i, j) -= proj * v[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      double proj = 0.0;
      for (std::size_t i = k; i < n; ++i) proj += v[i] * q.at(i, j);
      proj *= 2.0 / vnorm2;
      for (std::size_t i = k; i < n; ++i) q.at(i, j) -= proj * v[i];
    }
  }
  // Rows of q now hold Q^T from the factorization; return it directly
  // (any fixed orthogonal matrix works as a rotation).
  return q;
}

Vec cg_solve(const CsrMatrix& A, std::span<const double> b, double rtol) {
  if (A.rows != A.cols || A.cols != b.size())
    throw std::invalid_argument("cg_solve: dimension mismatch");
  const std::size_t n = b.size();
  Vec x(n, 0.0);
  Vec r(b.begin(), b.end());
  Vec p = r;
  double rr = dot(r, r);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return x;
  const auto& ops = kernels::active();
  for (std::size_t it = 0; it < 10 * n + 20; ++it) {
    if (std::sqrt(rr) <= rtol * bnorm) break;
    const Vec ap = spmv(A, p);
    const double pap = dot(p, ap);
    if (pap <= 0.0) break;  // not SPD (or converged to rounding)
    const double alpha = rr / pap;
    ops.axpy(x.data(), alpha, p.data(), n);
    ops.axpy(r.data(), -alpha, ap.data(), n);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  return x;
}

}  // namespace mdbt::linalg
