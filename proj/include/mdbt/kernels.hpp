#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace mdbt::kernels {

/// Double-precision inner loops used throughout the library. Every
/// operation has a scalar reference implementation and optional SIMD
/// variants (AVX2 on x86-64, NEON on aarch64); the active set is picked
/// once at startup and can be forced with MDBT_KERNELS=scalar|avx2|neon.
///
/// Element-wise kernels are bit-identical across variants (same per-lane
/// rounding, fused multiply-add in all paths). Reductions accumulate
/// lane-parallel in the SIMD variants and may differ from the scalar
/// reference in the last ulps; the equivalence tests pin both behaviors.
struct Ops {
  std::string_view name;

  // reductions
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i p[i] * g[i]^2, with g[i]^2 rounded before the multiply so that
  // weighted_sqnorm(g, p) == dot(square(g), p) holds bit-exactly.
  double (*weighted_sqnorm)(const double* g, const double* p, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);

  // element-wise
  void (*step)(double* out, const double* x, const double* p, const double* g,
               std::size_t n);  // out = x - p.*g
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
  void (*mul)(double* out, const double* a, const double* b, std::size_t n);
  void (*vmin)(double* out, const double* a, const double* b, std::size_t n);
  void (*vmax)(double* out, const double* a, const double* b, std::size_t n);
  void (*square)(double* out, const double* a, std::size_t n);
  // a[i] / b[i] with the convention x/0 = +inf (division never traps)
  void (*div_guarded)(double* out, const double* a, const double* b,
                      std::size_t n);

  // sparse row product: sum_k vals[k] * x[cols[k]]
  double (*csr_row_dot)(const double* vals, const std::uint32_t* cols,
                        std::size_t nnz, const double* x);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // null when this build/CPU cannot run AVX2
const Ops* neon_ops();  // null off aarch64

/// Kernel set selected at startup (honors MDBT_KERNELS).
const Ops& active();

}  // namespace mdbt::kernels
