#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mdbt/dataio.hpp"
#include "mdbt/linalg.hpp"
#include "mdbt/vec.hpp"

using mdbt::CsrMatrix;
using mdbt::Vec;

TEST_CASE("weighted_sqnorm fixtures") {
  CHECK(mdbt::weighted_sqnorm(Vec{1, 2}, Vec{1, 1}) == 5.0);
  CHECK(mdbt::weighted_sqnorm(Vec{3, 4}, Vec{0, 0}) == 0.0);
  CHECK(mdbt::weighted_sqnorm(Vec{1, 1}, Vec{0.5, 0.25}) == 0.75);
  CHECK_THROWS_AS(mdbt::weighted_sqnorm(Vec{1}, Vec{1, 2}), std::invalid_argument);
}

TEST_CASE("weighted_sqnorm equals <g.*g, p> on random inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vec g = mdbt::gaussian_vector(33, seed);
    Vec p = mdbt::gaussian_vector(33, seed + 1000);
    for (auto& v : p) v = std::fabs(v);
    CHECK(mdbt::weighted_sqnorm(g, p) == mdbt::dot(mdbt::ew_square(g), p));
  }
}

TEST_CASE("spmv fixtures") {
  const CsrMatrix eye = CsrMatrix::identity(2);
  CHECK(mdbt::spmv(eye, Vec{3, -1}) == Vec{3, -1});

  const double pareto[] = {0.5, 0.1, 0.1, 1.0};
  const CsrMatrix A = CsrMatrix::from_dense(2, 2, pareto);
  const Vec y = mdbt::spmv(A, Vec{1, 0});
  CHECK(y[0] == 0.5);
  CHECK(y[1] == 0.1);

  const double singular[] = {1, -1, -1, 1};
  const CsrMatrix B = CsrMatrix::from_dense(2, 2, singular);
  const Vec z = mdbt::spmv(B, Vec{1, 1});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);

  CHECK_THROWS_AS(mdbt::spmv(A, Vec{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("spmv matches a dense reference on random 5x5 matrices") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Vec entries = mdbt::gaussian_vector(25, seed);
    // sprinkle structural zeros so the CSR is not fully dense
    for (std::size_t i = 0; i < entries.size(); i += 3) entries[i] = 0.0;
    CsrMatrix sparse;
    sparse.rows = sparse.cols = 5;
    sparse.row_offsets.push_back(0);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        if (entries[i * 5 + j] == 0.0) continue;
        sparse.col_indices.push_back(static_cast<std::uint32_t>(j));
        sparse.values.push_back(entries[i * 5 + j]);
      }
      sparse.row_offsets.push_back(sparse.values.size());
    }
    sparse.validate();

    const Vec x = mdbt::gaussian_vector(5, seed + 77);
    const Vec got = mdbt::spmv(sparse, x);
    for (std::size_t i = 0; i < 5; ++i) {
      double want = 0.0;
      for (std::size_t j = 0; j < 5; ++j) want += entries[i * 5 + j] * x[j];
      CHECK(std::fabs(got[i] - want) <= 1e-14 * (1.0 + std::fabs(want)));
    }
  }
}

TEST_CASE("elementwise fixtures") {
  CHECK(mdbt::ew_mul(Vec{1, 2}, Vec{3, 4}) == Vec{3, 8});
  CHECK(mdbt::ew_square(Vec{-2, 3}) == Vec{4, 9});
  CHECK(mdbt::ew_min(Vec{1, 1}, Vec{0.5, 2}) == Vec{0.5, 1});
  CHECK(mdbt::ew_max(Vec{1, 1}, Vec{0.5, 2}) == Vec{1, 2});
}

TEST_CASE("csr validation catches malformed structure") {
  CsrMatrix bad;
  bad.rows = bad.cols = 2;
  bad.row_offsets = {0, 2, 2};
  bad.col_indices = {1, 0};  // not increasing within row 0
  bad.values = {1.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad.col_indices = {0, 5};  // out of range
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("jacobi eigenvalues on known matrices") {
  mdbt::linalg::DenseMatrix d2(2);
  d2.at(0, 0) = 1;
  d2.at(1, 1) = 100;
  auto eig = mdbt::linalg::jacobi_eigenvalues(d2);
  CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig[1] == doctest::Approx(100.0).epsilon(1e-12));

  mdbt::linalg::DenseMatrix s(2);
  s.at(0, 0) = 1;
  s.at(0, 1) = -1;
  s.at(1, 0) = -1;
  s.at(1, 1) = 1;
  eig = mdbt::linalg::jacobi_eigenvalues(s);
  CHECK(std::fabs(eig[0]) <= 1e-14);
  CHECK(eig[1] == doctest::Approx(2.0).epsilon(1e-13));

  // 2x2 closed form for the pareto fixture: (1.5 +- sqrt(0.29))/2
  mdbt::linalg::DenseMatrix p(2);
  p.at(0, 0) = 0.5;
  p.at(0, 1) = p.at(1, 0) = 0.1;
  p.at(1, 1) = 1.0;
  eig = mdbt::linalg::jacobi_eigenvalues(p);
  const double disc = std::sqrt(0.25 * 0.25 + 0.01);
  CHECK(eig[1] == doctest::Approx(0.75 + disc).epsilon(1e-13));
  CHECK(eig[0] == doctest::Approx(0.75 - disc).epsilon(1e-13));
}

TEST_CASE("random rotations are orthogonal") {
  for (std::size_t n : {2u, 5u, 12u}) {
    const auto q = mdbt::linalg::random_rotation(n, 7 + n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += q.at(i, k) * q.at(j, k);
        CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("cg solves small SPD systems to tight residuals") {
  const double a[] = {4, 1, 0, 1, 3, 1, 0, 1, 2};
  const CsrMatrix A = CsrMatrix::from_dense(3, 3, a);
  const Vec b{1, -2, 7};
  const Vec x = mdbt::linalg::cg_solve(A, b);
  const Vec ax = mdbt::spmv(A, x);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::fabs(ax[i] - b[i]) <= 1e-12);
}
