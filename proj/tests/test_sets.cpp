#include <cmath>

#include "doctest.h"
#include "mdbt/dataio.hpp"
#include "mdbt/errors.hpp"
#include "mdbt/sets.hpp"

using mdbt::Box;
using mdbt::CandidateSet;
using mdbt::CutOutcome;
using mdbt::CutStatus;
using mdbt::Ellipsoid;
using mdbt::Interval;
using mdbt::SetKind;
using mdbt::Vec;

namespace {

Vec random_positive(std::size_t d, mdbt::Xoshiro256pp& rng, double lo_exp = -2.0,
                    double hi_exp = 2.0) {
  Vec v(d);
  for (auto& x : v) x = std::exp(mdbt::uniform_in(rng, lo_exp, hi_exp));
  return v;
}

// uniform sample from the positive-orthant part of E(a)
Vec sample_in_ellipsoid(const Vec& a, mdbt::Xoshiro256pp& rng) {
  const std::size_t d = a.size();
  Vec z = mdbt::gaussian_vector(d, rng());
  double n2 = 0.0;
  for (double zi : z) n2 += zi * zi;
  const double radius =
      std::pow(mdbt::uniform_in(rng, 0.0, 1.0), 1.0 / static_cast<double>(d));
  Vec p(d);
  for (std::size_t i = 0; i < d; ++i)
    p[i] = std::fabs(z[i]) / std::sqrt(n2) * radius / std::sqrt(a[i]);
  return p;
}

}  // namespace

TEST_CASE("init_set fixtures") {
  const CandidateSet box = mdbt::init_set(SetKind::box, 2, 4.0);
  CHECK(std::get<Box>(box).b == Vec{4.0, 4.0});

  const CandidateSet ell = mdbt::init_set(SetKind::ellipsoid, 2, 4.0);
  CHECK(std::get<Ellipsoid>(ell).a == Vec{1.0 / 32.0, 1.0 / 32.0});
  // c0 * ones sits exactly on the boundary
  CHECK(mdbt::contains(ell, Vec{4.0, 4.0}, 1e-12));
  CHECK_FALSE(mdbt::contains(ell, Vec{4.0 * 1.001, 4.0}, 1e-12));

  const CandidateSet iv = mdbt::init_set(SetKind::interval, 3, 1e10);
  CHECK(std::get<Interval>(iv).alpha_max == 1e10);

  CHECK_THROWS_AS(mdbt::init_set(SetKind::box, 2, 0.0), std::invalid_argument);
}

TEST_CASE("default gammas") {
  CHECK(mdbt::default_gamma(SetKind::interval, 7) == 0.5);
  CHECK(mdbt::default_gamma(SetKind::box, 12) == 1.0 / 24.0);
  CHECK(mdbt::default_gamma(SetKind::ellipsoid, 2) == doctest::Approx(0.5));
}

TEST_CASE("candidate fixtures") {
  CHECK(mdbt::candidate(Box{Vec{4, 2}}, 0.25, Vec{}) == Vec{1.0, 0.5});
  CHECK(mdbt::candidate(Interval{8.0, 2}, 0.5, Vec{}) == Vec{4.0, 4.0});

  // axis case
  const Vec p1 = mdbt::candidate(Ellipsoid{Vec{1, 1}}, 0.999999, Vec{1, 0});
  CHECK(p1[0] == doctest::Approx(0.999999).epsilon(1e-12));
  CHECK(p1[1] == 0.0);

  // hand-evaluated direction: a=(4,1), g=(1,1)
  const double gamma = 0.75;
  const Vec p2 = mdbt::candidate(Ellipsoid{Vec{4, 1}}, gamma, Vec{1, 1});
  CHECK(p2[0] == doctest::Approx(gamma / (2.0 * std::sqrt(5.0))).epsilon(1e-14));
  CHECK(p2[1] == doctest::Approx(gamma * 2.0 / std::sqrt(5.0)).epsilon(1e-14));
  // ||p||_A = gamma exactly (up to rounding)
  CHECK(4.0 * p2[0] * p2[0] + p2[1] * p2[1] ==
        doctest::Approx(gamma * gamma).epsilon(1e-14));

  CHECK_THROWS_AS(mdbt::candidate(Ellipsoid{Vec{1, 1}}, 0.5, Vec{0, 0}),
                  mdbt::ZeroGradient);
}

TEST_CASE("ellipsoid candidate maximizes progress over the set") {
  mdbt::Xoshiro256pp rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t d = 2 + rep % 5;
    const Vec a = random_positive(d, rng);
    Vec g = mdbt::gaussian_vector(d, 1234 + rep);
    const Vec g2 = mdbt::ew_square(g);
    const double gamma = 0.31;
    const Vec p = mdbt::candidate(Ellipsoid{a}, gamma, g);
    const double best = mdbt::dot(g2, p) / gamma;
    for (int s = 0; s < 1000; ++s) {
      const Vec q = sample_in_ellipsoid(a, rng);
      CHECK(best >= mdbt::dot(g2, q) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("box cut fixtures") {
  // probe p=(1/4,1/4) excluded by u=(3,3): <u,p> = 1.5 > 1
  const CutOutcome c1 = mdbt::cut(Box{Vec{1, 1}}, Vec{3, 3}, false);
  REQUIRE(c1.status == CutStatus::ok);
  CHECK(std::get<Box>(c1.set).b == Vec{1.0 / 3.0, 1.0 / 3.0});
  // volume ratio 1/9 <= 1/(d+1)
  CHECK(std::exp(-c1.log_volume_drop) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  // zero-entry convention: 1/0 = +inf keeps the other coordinate
  const CutOutcome c2 = mdbt::cut(Box{Vec{1, 1}}, Vec{2, 0}, false);
  REQUIRE(c2.status == CutStatus::ok);
  CHECK(std::get<Box>(c2.set).b == Vec{0.5, 1.0});

  // a cut that does not bite is reported shallow
  const CutOutcome c3 = mdbt::cut(Box{Vec{1, 1}}, Vec{0.5, 0.5}, false);
  CHECK(c3.status == CutStatus::shallow);
}

TEST_CASE("ellipsoid cut fixture with the closed-form lambda") {
  // a=(1,1), u=(2,0): ell=4, lambda=2/3, a+=(2, 2/3)
  const CutOutcome c = mdbt::cut(Ellipsoid{Vec{1, 1}}, Vec{2, 0}, false);
  REQUIRE(c.status == CutStatus::ok);
  CHECK(c.lambda_used == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const Vec& a2 = std::get<Ellipsoid>(c.set).a;
  CHECK(a2[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(a2[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // vol ratio sqrt(det A / det A+) = sqrt(3)/2
  CHECK(std::exp(-c.log_volume_drop) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(std::exp(-c.log_volume_drop) <= std::exp(0.25) / std::sqrt(2.0));

  // ell <= d: shallow
  const CutOutcome s = mdbt::cut(Ellipsoid{Vec{1, 1}}, Vec{1.0, 0.9}, false);
  CHECK(s.status == CutStatus::shallow);
}

TEST_CASE("d=1 ellipsoid cuts degenerate to the tight interval cut") {
  const CutOutcome c = mdbt::cut(Ellipsoid{Vec{1.0}}, Vec{4.0}, true);
  REQUIRE(c.status == CutStatus::ok);
  CHECK(std::get<Ellipsoid>(c.set).a == Vec{16.0});
  CHECK(mdbt::cut(Ellipsoid{Vec{1.0}}, Vec{0.5}, false).status == CutStatus::shallow);
}

TEST_CASE("interval cut ignores u and scales by gamma") {
  const CutOutcome c = mdbt::cut(Interval{8.0, 1}, {}, false, 0.5);
  CHECK(std::get<Interval>(c.set).alpha_max == 4.0);
  CHECK(c.log_volume_drop == doctest::Approx(std::log(2.0)));
}

TEST_CASE("box containment: cuts keep the feasible intersection (1e4 samples)") {
  mdbt::Xoshiro256pp rng(23);
  int done = 0;
  while (done < 40) {
    const std::size_t d = 1 + rng() % 8;
    const Vec b = random_positive(d, rng);
    Vec u = random_positive(d, rng, -1.0, 1.0);
    // make the cut exclude the probe (1/(2d)) b so it always bites
    const Vec probe = mdbt::candidate(Box{b}, 1.0 / (2.0 * static_cast<double>(d)), {});
    const double up = mdbt::dot(u, probe);
    if (up <= 0.0) continue;
    const double scale = (1.0 + mdbt::uniform_in(rng, 0.1, 3.0)) / up;
    for (auto& ui : u) ui *= scale;
    const CutOutcome c = mdbt::cut(Box{b}, u, false);
    REQUIRE(c.status == CutStatus::ok);
    for (int s = 0; s < 250; ++s) {
      Vec p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = mdbt::uniform_in(rng, 0.0, b[i]);
      if (mdbt::dot(u, p) <= 1.0) CHECK(mdbt::contains(c.set, p, 1e-12));
    }
    ++done;
  }
}

TEST_CASE("box shrinkage: excluded probe implies 1/(d+1) volume drop") {
  mdbt::Xoshiro256pp rng(29);
  int done = 0;
  while (done < 1000) {
    const std::size_t d = 1 + rng() % 8;
    const Vec b = random_positive(d, rng);
    Vec u = random_positive(d, rng, -1.0, 1.0);
    const Vec probe = mdbt::candidate(Box{b}, 1.0 / (2.0 * static_cast<double>(d)), {});
    const double up = mdbt::dot(u, probe);
    if (up <= 0.0) continue;
    const double scale = (1.0 + mdbt::uniform_in(rng, 1e-6, 4.0)) / up;
    for (auto& ui : u) ui *= scale;
    const CutOutcome c = mdbt::cut(Box{b}, u, false);
    REQUIRE(c.status == CutStatus::ok);
    CHECK(std::exp(-c.log_volume_drop) <=
          1.0 / (static_cast<double>(d) + 1.0) + 1e-12);
    ++done;
  }
}

TEST_CASE("ellipsoid cut: containment and the worst-case volume ratio (1e4 samples)") {
  mdbt::Xoshiro256pp rng(31);
  int done = 0;
  while (done < 40) {
    const std::size_t d = 2 + rng() % 7;
    const Vec a = random_positive(d, rng);
    Vec u = random_positive(d, rng, -1.0, 1.0);
    // scale u so ell = ||u||^2_{A^{-1}} lands in [2d, 20d]
    double ell = 0.0;
    for (std::size_t i = 0; i < d; ++i) ell += u[i] * u[i] / a[i];
    const double target = (2.0 + mdbt::uniform_in(rng, 0.0, 18.0)) * static_cast<double>(d);
    const double scale = std::sqrt(target / ell);
    for (auto& ui : u) ui *= scale;

    const bool refine = (rng() & 1) != 0;
    const CutOutcome c = mdbt::cut(Ellipsoid{a}, u, refine);
    REQUIRE(c.status == CutStatus::ok);
    if (!refine)
      CHECK(std::exp(-c.log_volume_drop) <=
            std::exp(0.25) / std::sqrt(2.0) + 1e-12);

    for (int s = 0; s < 250; ++s) {
      const Vec p = sample_in_ellipsoid(a, rng);
      if (mdbt::dot(u, p) <= 1.0) {
        double q = 0.0;
        const Vec& a2 = std::get<Ellipsoid>(c.set).a;
        for (std::size_t i = 0; i < d; ++i) q += a2[i] * p[i] * p[i];
        CHECK(q <= 1.0 + 1e-9);
      }
    }
    ++done;
  }
}

TEST_CASE("refined lambda is never worse than the closed form") {
  mdbt::Xoshiro256pp rng(37);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 2 + rng() % 6;
    const Vec a = random_positive(d, rng);
    Vec u = random_positive(d, rng, -1.0, 1.0);
    double ell = 0.0;
    for (std::size_t i = 0; i < d; ++i) ell += u[i] * u[i] / a[i];
    const double scale =
        std::sqrt((2.5 + mdbt::uniform_in(rng, 0.0, 10.0)) * static_cast<double>(d) / ell);
    for (auto& ui : u) ui *= scale;

    const CutOutcome plain = mdbt::cut(Ellipsoid{a}, u, false);
    const CutOutcome refined = mdbt::cut(Ellipsoid{a}, u, true);
    REQUIRE(plain.status == CutStatus::ok);
    REQUIRE(refined.status == CutStatus::ok);
    CHECK(refined.log_volume_drop >= plain.log_volume_drop - 1e-10);
  }
}

TEST_CASE("forward step fixtures") {
  const CandidateSet b = mdbt::forward_step(Box{Vec{1, 1}});
  CHECK(std::get<Box>(b).b == Vec{1.1, 1.1});

  const CandidateSet e = mdbt::forward_step(Ellipsoid{Vec{1, 1}});
  CHECK(std::get<Ellipsoid>(e).a[0] == doctest::Approx(1.0 / std::sqrt(1.1)).epsilon(1e-15));

  const CandidateSet i = mdbt::forward_step(Interval{2.0, 1});
  CHECK(std::get<Interval>(i).alpha_max == doctest::Approx(2.2));

  // old set inside new set; volume grows by the documented increments
  CHECK(mdbt::log_volume(b) == doctest::Approx(2.0 * std::log(1.1)).epsilon(1e-12));
  CHECK(mdbt::log_volume(e) == doctest::Approx(0.5 * std::log(1.1)).epsilon(1e-12));
}

TEST_CASE("log volume fixtures") {
  CHECK(mdbt::log_volume(Box{Vec{2, 2}}) == doctest::Approx(std::log(4.0)));
  CHECK(mdbt::log_volume(Ellipsoid{Vec{1, 1}}) == 0.0);
  CHECK(mdbt::log_volume(Ellipsoid{Vec{4, 1}}) ==
        doctest::Approx(-0.5 * std::log(4.0)));
  CHECK(mdbt::log_volume(Interval{2.0, 3}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("uniform shrink halves every semi-axis") {
  CHECK(std::get<Box>(mdbt::uniform_shrink(Box{Vec{2, 4}})).b == Vec{1, 2});
  CHECK(std::get<Ellipsoid>(mdbt::uniform_shrink(Ellipsoid{Vec{1, 1}})).a == Vec{4, 4});
  CHECK(std::get<Interval>(mdbt::uniform_shrink(Interval{2.0, 1})).alpha_max == 1.0);
  CHECK(mdbt::max_semi_axis(Ellipsoid{Vec{4, 1}}) == 1.0);
}
