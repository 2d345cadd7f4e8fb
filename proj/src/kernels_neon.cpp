#include "mdbt/kernels.hpp"

#if defined(__aarch64__)
#define MDBT_HAVE_NEON 1
#include <arm_neon.h>
#else
#define MDBT_HAVE_NEON 0
#endif

#include <cmath>
#include <limits>

namespace mdbt::kernels {

#if MDBT_HAVE_NEON

namespace {

inline double hsum(float64x2_t v, double tail) {
  return (vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1)) + tail;
}

inline double hmax(float64x2_t v, double tail) {
  const double a = vgetq_lane_f64(v, 0);
  const double b = vgetq_lane_f64(v, 1);
  double m = a > b ? a : b;
  return tail > m ? tail : m;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double tail = 0.0;
  for (; i < n; ++i) tail = std::fma(a[i], b[i], tail);
  return hsum(acc, tail);
}

double weighted_sqnorm_neon(const double* g, const double* p, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gv = vld1q_f64(g + i);
    const float64x2_t gg = vmulq_f64(gv, gv);
    acc = vfmaq_f64(acc, gg, vld1q_f64(p + i));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double gg = g[i] * g[i];
    tail = std::fma(gg, p[i], tail);
  }
  return hsum(acc, tail);
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return hsum(acc, tail);
}

double max_abs_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(a + i)));
  double tail = 0.0;
  for (; i < n; ++i) tail = std::max(tail, std::fabs(a[i]));
  return hmax(acc, tail);
}

void step_neon(double* out, const double* x, const double* p, const double* g,
               std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vfmsq_f64(vld1q_f64(x + i), vld1q_f64(p + i), vld1q_f64(g + i)));
  for (; i < n; ++i) out[i] = std::fma(-p[i], g[i], x[i]);
}

void axpy_neon(double* y, double alpha, const double* x, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void mul_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

// Compare-and-select rather than FMIN/FMAX so the result matches the
// scalar a<b?a:b rounding of signed zeros and NaNs bit-for-bit.
void vmin_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t av = vld1q_f64(a + i);
    const float64x2_t bv = vld1q_f64(b + i);
    vst1q_f64(out + i, vbslq_f64(vcltq_f64(av, bv), av, bv));
  }
  for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void vmax_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t av = vld1q_f64(a + i);
    const float64x2_t bv = vld1q_f64(b + i);
    vst1q_f64(out + i, vbslq_f64(vcgtq_f64(av, bv), av, bv));
  }
  for (; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

void square_neon(double* out, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(a + i);
    vst1q_f64(out + i, vmulq_f64(v, v));
  }
  for (; i < n; ++i) out[i] = a[i] * a[i];
}

void div_guarded_neon(double* out, const double* a, const double* b,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = b[i] == 0.0 ? std::numeric_limits<double>::infinity() : a[i] / b[i];
}

double csr_row_dot_neon(const double* vals, const std::uint32_t* cols,
                        std::size_t nnz, const double* x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < nnz; ++k) acc = std::fma(vals[k], x[cols[k]], acc);
  return acc;
}

const Ops neon_table{
    "neon",      dot_neon,  weighted_sqnorm_neon, sum_neon,    max_abs_neon,
    step_neon,   axpy_neon, mul_neon,             vmin_neon,   vmax_neon,
    square_neon, div_guarded_neon, csr_row_dot_neon};

}  // namespace

const Ops* neon_ops() { return &neon_table; }

#else

const Ops* neon_ops() { return nullptr; }

#endif  // MDBT_HAVE_NEON

}  // namespace mdbt::kernels
