#include "mdbt/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace mdbt::kernels {

namespace detail {
const Ops* avx2_compiled_table();
}

namespace {

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* select() {
  const Ops* avx2 = avx2_ops();
  const Ops* neon = neon_ops();
  if (const char* env = std::getenv("MDBT_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_ops();
    if (want == "avx2" && avx2) return avx2;
    if (want == "neon" && neon) return neon;
    // Unknown or unavailable request falls through to auto-detection.
  }
  if (avx2) return avx2;
  if (neon) return neon;
  return &scalar_ops();
}

}  // namespace

const Ops* avx2_ops() {
  const Ops* table = detail::avx2_compiled_table();
  return (table && cpu_supports_avx2()) ? table : nullptr;
}

const Ops& active() {
  static const Ops* chosen = select();
  return *chosen;
}

}  // namespace mdbt::kernels
