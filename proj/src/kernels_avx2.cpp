#include "mdbt/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#define MDBT_HAVE_AVX2 1
#include <immintrin.h>
#else
#define MDBT_HAVE_AVX2 0
#endif

#include <cmath>
#include <limits>

namespace mdbt::kernels {

#if MDBT_HAVE_AVX2

namespace {

// Horizontal reductions use a fixed association: ((l0+l1)+(l2+l3))+tail.
inline double hsum(__m256d v, double tail) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

inline double hmax(__m256d v, double tail) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  double m = lane[0] > lane[1] ? lane[0] : lane[1];
  const double m2 = lane[2] > lane[3] ? lane[2] : lane[3];
  if (m2 > m) m = m2;
  return tail > m ? tail : m;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double tail = 0.0;
  for (; i < n; ++i) tail = std::fma(a[i], b[i], tail);
  return hsum(acc, tail);
}

double weighted_sqnorm_avx2(const double* g, const double* p, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    const __m256d gg = _mm256_mul_pd(gv, gv);
    acc = _mm256_fmadd_pd(gg, _mm256_loadu_pd(p + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double gg = g[i] * g[i];
    tail = std::fma(gg, p[i], tail);
  }
  return hsum(acc, tail);
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return hsum(acc, tail);
}

double max_abs_avx2(const double* a, std::size_t n) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), abs_mask));
  double tail = 0.0;
  for (; i < n; ++i) tail = std::max(tail, std::fabs(a[i]));
  return hmax(acc, tail);
}

void step_avx2(double* out, const double* x, const double* p, const double* g,
               std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fnmadd_pd(_mm256_loadu_pd(p + i),
                                       _mm256_loadu_pd(g + i),
                                       _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = std::fma(-p[i], g[i], x[i]);
}

void axpy_avx2(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void mul_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void vmin_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void vmax_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

void square_avx2(double* out, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) out[i] = a[i] * a[i];
}

void div_guarded_avx2(double* out, const double* a, const double* b, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bv = _mm256_loadu_pd(b + i);
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(a + i), bv);
    const __m256d is_zero = _mm256_cmp_pd(bv, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(q, inf, is_zero));
  }
  for (; i < n; ++i)
    out[i] = b[i] == 0.0 ? std::numeric_limits<double>::infinity() : a[i] / b[i];
}

double csr_row_dot_avx2(const double* vals, const std::uint32_t* cols,
                        std::size_t nnz, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= nnz; k += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
    const __m256d xs = _mm256_i32gather_pd(x, idx, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xs, acc);
  }
  double tail = 0.0;
  for (; k < nnz; ++k) tail = std::fma(vals[k], x[cols[k]], tail);
  return hsum(acc, tail);
}

const Ops avx2_table{
    "avx2",      dot_avx2,  weighted_sqnorm_avx2, sum_avx2,    max_abs_avx2,
    step_avx2,   axpy_avx2, mul_avx2,             vmin_avx2,   vmax_avx2,
    square_avx2, div_guarded_avx2, csr_row_dot_avx2};

}  // namespace

namespace detail {
// Runtime CPU support is checked by the dispatcher, which is compiled
// without vector ISA flags.
const Ops* avx2_compiled_table() { return &avx2_table; }
}  // namespace detail

#else

namespace detail {
const Ops* avx2_compiled_table() { return nullptr; }
}  // namespace detail

#endif  // MDBT_HAVE_AVX2

}  // namespace mdbt::kernels
