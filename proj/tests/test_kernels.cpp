#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mdbt/dataio.hpp"
#include "mdbt/kernels.hpp"

using mdbt::Xoshiro256pp;
using mdbt::kernels::Ops;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo = -3.0,
                               double hi = 3.0) {
  Xoshiro256pp rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = mdbt::uniform_in(rng, lo, hi);
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 64, 257, 1000};

std::vector<const Ops*> available_ops() {
  std::vector<const Ops*> all{&mdbt::kernels::scalar_ops()};
  if (const Ops* avx2 = mdbt::kernels::avx2_ops()) all.push_back(avx2);
  if (const Ops* neon = mdbt::kernels::neon_ops()) all.push_back(neon);
  return all;
}

}  // namespace

TEST_CASE("elementwise kernels match the scalar reference bit for bit") {
  const Ops& ref = mdbt::kernels::scalar_ops();
  for (const Ops* ops : available_ops()) {
    for (std::size_t n : kSizes) {
      const auto a = random_vec(n, 11 * n + 1);
      const auto b = random_vec(n, 13 * n + 2);
      const auto x = random_vec(n, 17 * n + 3);

      std::vector<double> got(n), want(n);
      ops->mul(got.data(), a.data(), b.data(), n);
      ref.mul(want.data(), a.data(), b.data(), n);
      CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);

      ops->vmin(got.data(), a.data(), b.data(), n);
      ref.vmin(want.data(), a.data(), b.data(), n);
      CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);

      ops->vmax(got.data(), a.data(), b.data(), n);
      ref.vmax(want.data(), a.data(), b.data(), n);
      CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);

      ops->square(got.data(), a.data(), n);
      ref.square(want.data(), a.data(), n);
      CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);

      ops->step(got.data(), x.data(), a.data(), b.data(), n);
      ref.step(want.data(), x.data(), a.data(), b.data(), n);
      CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);

      got = x;
      want = x;
      ops->axpy(got.data(), 0.37, a.data(), n);
      ref.axpy(want.data(), 0.37, a.data(), n);
      CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("div_guarded maps zero denominators to +inf in every variant") {
  for (const Ops* ops : available_ops()) {
    const double a[] = {1.0, 2.0, 0.0, -4.0, 5.0, 6.0, 7.0, 8.0, 9.0};
    const double b[] = {2.0, 0.0, 0.0, 2.0, 0.0, 3.0, 0.0, 4.0, 0.0};
    double out[9];
    ops->div_guarded(out, a, b, 9);
    CHECK(out[0] == 0.5);
    CHECK(std::isinf(out[1]));
    CHECK(std::isinf(out[2]));  // 0/0 is +inf too, by convention
    CHECK(out[2] > 0.0);
    CHECK(out[3] == -2.0);
    CHECK(std::isinf(out[4]));
    CHECK(out[5] == 2.0);
    CHECK(std::isinf(out[6]));
    CHECK(out[7] == 2.0);
    CHECK(std::isinf(out[8]));
  }
}

TEST_CASE("reduction kernels agree with the scalar reference to rounding") {
  const Ops& ref = mdbt::kernels::scalar_ops();
  for (const Ops* ops : available_ops()) {
    for (std::size_t n : kSizes) {
      const auto a = random_vec(n, 23 * n + 5);
      const auto b = random_vec(n, 29 * n + 7);

      const double d_ref = ref.dot(a.data(), b.data(), n);
      const double d_got = ops->dot(a.data(), b.data(), n);
      CHECK(std::fabs(d_got - d_ref) <=
            1e-13 * (1.0 + static_cast<double>(n)));

      const double s_ref = ref.sum(a.data(), n);
      const double s_got = ops->sum(a.data(), n);
      CHECK(std::fabs(s_got - s_ref) <= 1e-13 * (1.0 + static_cast<double>(n)));

      // max_abs is order-insensitive: bitwise equal
      CHECK(ops->max_abs(a.data(), n) == ref.max_abs(a.data(), n));
    }
  }
}

TEST_CASE("weighted_sqnorm is exactly dot(square(g), p) within each variant") {
  for (const Ops* ops : available_ops()) {
    for (std::size_t n : kSizes) {
      const auto g = random_vec(n, 31 * n + 1);
      auto p = random_vec(n, 37 * n + 2, 0.0, 5.0);
      std::vector<double> gg(n);
      ops->square(gg.data(), g.data(), n);
      const double via_dot = ops->dot(gg.data(), p.data(), n);
      const double direct = ops->weighted_sqnorm(g.data(), p.data(), n);
      CHECK(direct == via_dot);
    }
  }
}

TEST_CASE("csr_row_dot gathers match the scalar reference") {
  const Ops& ref = mdbt::kernels::scalar_ops();
  Xoshiro256pp rng(99);
  for (const Ops* ops : available_ops()) {
    for (std::size_t nnz : kSizes) {
      const std::size_t width = 2 * nnz + 8;
      const auto vals = random_vec(nnz, 41 * nnz + 3);
      const auto x = random_vec(width, 43 * nnz + 4);
      std::vector<std::uint32_t> cols(nnz);
      for (std::size_t k = 0; k < nnz; ++k)
        cols[k] = static_cast<std::uint32_t>(rng() % width);
      const double want = ref.csr_row_dot(vals.data(), cols.data(), nnz, x.data());
      const double got = ops->csr_row_dot(vals.data(), cols.data(), nnz, x.data());
      CHECK(std::fabs(got - want) <= 1e-13 * (1.0 + static_cast<double>(nnz)));
    }
  }
}

TEST_CASE("active kernel set is one of the compiled variants") {
  const Ops& act = mdbt::kernels::active();
  bool known = act.name == "scalar";
  if (const Ops* avx2 = mdbt::kernels::avx2_ops()) known = known || act.name == avx2->name;
  if (const Ops* neon = mdbt::kernels::neon_ops()) known = known || act.name == neon->name;
  CHECK(known);
#if defined(__x86_64__)
  // This build carries the AVX2 lane; on hardware that supports it the
  // dispatcher must pick it up (unless overridden via MDBT_KERNELS).
  if (mdbt::kernels::avx2_ops() && !std::getenv("MDBT_KERNELS"))
    CHECK(act.name == "avx2");
#endif
}
