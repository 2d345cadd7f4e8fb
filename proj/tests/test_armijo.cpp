#include <cmath>

#include "doctest.h"
#include "mdbt/armijo.hpp"
#include "mdbt/dataio.hpp"
#include "mdbt/linalg.hpp"
#include "mdbt/oracle.hpp"

using mdbt::CsrMatrix;
using mdbt::HyperplaneResult;
using mdbt::OracleCounter;
using mdbt::ProbeResult;
using mdbt::Vec;

namespace {

mdbt::QuadraticObjective quad1d(double L) {
  const double a[] = {L};
  return mdbt::QuadraticObjective(CsrMatrix::from_dense(1, 1, a));
}

// Armijo gap as a function of the preconditioner diagonal, for the
// finite-difference checks: h(q) = f(x - Qg) - f(x) + 1/2 ||g||_Q^2.
double gap_h(const mdbt::Objective& obj, const Vec& x, const Vec& g, const Vec& q) {
  Vec xq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xq[i] = x[i] - q[i] * g[i];
  return obj.value(xq) - obj.value(x) + 0.5 * mdbt::weighted_sqnorm(g, q);
}

Vec fd_hyperplane_direction(const mdbt::Objective& obj, const Vec& x, const Vec& g,
                            const Vec& q) {
  // v = grad h(q) / (<grad h(q), q> - h(q)) with grad h from central
  // differences; the independent route for Armijo-failure hyperplanes.
  Vec grad(q.size());
  Vec qp = q, qm = q;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double h = 1e-6 * (std::fabs(q[i]) + 1.0);
    qp[i] = q[i] + h;
    qm[i] = q[i] - h;
    grad[i] = (gap_h(obj, x, g, qp) - gap_h(obj, x, g, qm)) / (2.0 * h);
    qp[i] = q[i];
    qm[i] = q[i];
  }
  const double denom = mdbt::dot(grad, q) - gap_h(obj, x, g, q);
  Vec v(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) v[i] = grad[i] / denom;
  return v;
}

}  // namespace

TEST_CASE("probe accepts the 1/L step with equality") {
  const auto obj = quad1d(2.0);
  OracleCounter ctr;
  const Vec x{1.0}, g{2.0};
  const ProbeResult r = mdbt::probe_armijo(obj, x, 1.0, g, Vec{0.5}, ctr);
  CHECK(r.sq_norm_p == 2.0);
  CHECK(r.f_plus == 0.0);
  CHECK(r.gap == 0.0);
  CHECK(r.accepted);
  CHECK(ctr.n_value_evals == 1);
  CHECK(ctr.n_grad_evals == 0);
}

TEST_CASE("probe rejects an oversized step with the hand-computed gap") {
  const auto obj = quad1d(2.0);
  OracleCounter ctr;
  const ProbeResult r = mdbt::probe_armijo(obj, Vec{1.0}, 1.0, Vec{2.0}, Vec{1.0}, ctr);
  CHECK(r.x_plus == Vec{-1.0});
  CHECK(r.f_plus == 1.0);
  CHECK(r.sq_norm_p == 4.0);
  CHECK(r.gap == 2.0);
  CHECK_FALSE(r.accepted);
}

TEST_CASE("zero preconditioner probes are degenerate accepts") {
  const auto obj = quad1d(2.0);
  OracleCounter ctr;
  const ProbeResult r = mdbt::probe_armijo(obj, Vec{1.0}, 1.0, Vec{2.0}, Vec{0.0}, ctr);
  CHECK(r.x_plus == Vec{1.0});
  CHECK(r.gap == 0.0);
  CHECK(r.accepted);
}

TEST_CASE("overflowing probes are rejected with an infinite gap") {
  const double a[] = {1e200};
  const mdbt::QuadraticObjective obj(CsrMatrix::from_dense(1, 1, a));
  OracleCounter ctr;
  const Vec x{1.0};
  const Vec g{1e200};
  const ProbeResult r = mdbt::probe_armijo(obj, x, 5e199, g, Vec{1.0}, ctr);
  CHECK_FALSE(r.accepted);
  CHECK(r.overflowed);
  CHECK(std::isinf(r.gap));
  CHECK(ctr.n_value_evals == 1);
}

TEST_CASE("separating hyperplane reproduces the 1-D hand computation") {
  // f(x) = x^2/2 at x=1, probed with p=3: x+=-2, g=1, g+=-2,
  // denom = 0.5 - (-2*3*1) - 2 = 4.5, v = 2.5/4.5 = 5/9.
  const auto obj = quad1d(1.0);
  OracleCounter ctr;
  const Vec x{1.0}, g{1.0}, p{3.0};
  const ProbeResult r = mdbt::probe_armijo(obj, x, 0.5, g, p, ctr);
  CHECK_FALSE(r.accepted);
  const Vec g_plus = mdbt::eval_gradient(obj, r.x_plus, ctr);
  CHECK(g_plus == Vec{-2.0});
  const HyperplaneResult hr = mdbt::separating_hyperplane(0.5, r.f_plus, g, g_plus, p);
  REQUIRE(hr.status == HyperplaneResult::Status::ok);
  CHECK(hr.v[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(hr.u == hr.v);  // already non-negative: truncation is the identity
  CHECK(hr.u_dot_p == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("hyperplane direction matches the finite-difference oracle") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 100; ++seed) {
    mdbt::SynthSpec spec;
    spec.kind = mdbt::SynthSpec::Kind::rotated;
    spec.d = 2 + seed % 5;
    spec.cond = 10.0 + static_cast<double>(seed % 7) * 30.0;
    spec.seed = seed;
    const auto obj = mdbt::synth_quadratic(spec);

    const Vec x = mdbt::gaussian_vector(spec.d, seed + 1000);
    OracleCounter ctr;
    const double f_x = obj.value(x);
    Vec g;
    obj.gradient(x, g);

    // probe something large enough to fail
    mdbt::Xoshiro256pp rng(seed + 5000);
    Vec p(spec.d);
    for (auto& v : p) v = std::exp(mdbt::uniform_in(rng, -1.0, 3.0));
    const ProbeResult r = mdbt::probe_armijo(obj, x, f_x, g, p, ctr);
    if (!r.accepted && !r.overflowed) {
      Vec g_plus;
      obj.gradient(r.x_plus, g_plus);
      const HyperplaneResult hr =
          mdbt::separating_hyperplane(f_x, r.f_plus, g, g_plus, p);
      REQUIRE(hr.status == HyperplaneResult::Status::ok);
      const Vec v_fd = fd_hyperplane_direction(obj, x, g, p);
      for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(std::fabs(hr.v[i] - v_fd[i]) <= 1e-5 * (1.0 + std::fabs(v_fd[i])));
      ++checked;
    }
  }
}

TEST_CASE("hyperplanes exclude the probe and never cut valid diagonals") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 40; ++seed) {
    mdbt::SynthSpec spec;
    spec.kind = mdbt::SynthSpec::Kind::rotated;
    spec.d = 2 + seed % 5;
    spec.cond = 5.0 + static_cast<double>(seed % 11) * 20.0;
    spec.seed = seed + 31;
    const auto obj = mdbt::synth_quadratic(spec);
    const auto dense = mdbt::linalg::dense_from_csr(obj.matrix());

    const Vec x = mdbt::gaussian_vector(spec.d, seed + 2000);
    const double f_x = obj.value(x);
    Vec g;
    obj.gradient(x, g);

    mdbt::Xoshiro256pp rng(seed + 7000);
    Vec p(spec.d);
    for (auto& v : p) v = std::exp(mdbt::uniform_in(rng, -1.0, 2.5));
    OracleCounter ctr;
    const ProbeResult r = mdbt::probe_armijo(obj, x, f_x, g, p, ctr);
    if (r.accepted || r.overflowed) continue;
    Vec g_plus;
    obj.gradient(r.x_plus, g_plus);
    const HyperplaneResult hr = mdbt::separating_hyperplane(f_x, r.f_plus, g, g_plus, p);
    REQUIRE(hr.status == HyperplaneResult::Status::ok);

    // (i) the failed probe is excluded (up to boundary tolerance)
    CHECK(hr.u_dot_p > 1.0 - 1e-9);
    // (ii) truncation really is non-negative
    for (double ui : hr.u) CHECK(ui >= 0.0);
    // (iii) sampled valid diagonals all stay on the feasible side
    for (int s = 0; s < 1000; ++s) {
      Vec pv(spec.d);
      for (auto& v : pv) v = std::exp(mdbt::uniform_in(rng, -3.0, 3.0));
      const double lmax = mdbt::oracle::preconditioned_lambda_max(dense, pv);
      for (auto& v : pv) v /= lmax;  // rescale onto the validity boundary
      CHECK(mdbt::dot(hr.u, pv) <= 1.0 + 1e-9);
    }
    ++checked;
  }
}

TEST_CASE("exact evaluation budget per rejection") {
  // one value eval per probe, one gradient eval per rejection for g+,
  // and the gradient at x is never recomputed
  const auto obj = quad1d(2.0);
  OracleCounter ctr;
  const Vec x{1.0};
  const double f_x = 1.0;
  const Vec g{2.0};
  const ProbeResult r = mdbt::probe_armijo(obj, x, f_x, g, Vec{5.0}, ctr);
  CHECK(ctr.n_value_evals == 1);
  CHECK(ctr.n_grad_evals == 0);
  CHECK_FALSE(r.accepted);
  const Vec g_plus = mdbt::eval_gradient(obj, r.x_plus, ctr);
  (void)mdbt::separating_hyperplane(f_x, r.f_plus, g, g_plus, Vec{5.0});
  CHECK(ctr.n_value_evals == 1);
  CHECK(ctr.n_grad_evals == 1);
}
