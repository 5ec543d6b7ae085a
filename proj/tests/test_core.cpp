#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latticeguide/core.hpp"

using namespace latticeguide;

namespace {
constexpr double kPi = std::numbers::pi;

LatticeParams params(double a1, double a2, double a3, double mu, double beta) {
  return normalize_params({a1, a2, a3, mu, beta});
}
}  // namespace

TEST_CASE("normalize_params folds beta and validates") {
  CHECK(params(1, 1, 1, 0.5, kPi / 2).beta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(params(1, 1, 1, 0.5, -kPi / 2).beta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(params(1, 1, 1, 0.5, 3 * kPi / 2).beta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(params(1, 1, 1, 0.5, 0).beta == 0.0);
  CHECK(params(1, 1, 1, 0.5, kPi).beta == doctest::Approx(kPi));

  CHECK_THROWS_AS(params(0, 1, 1, 0.5, 0), SpectralError);
  CHECK_THROWS_AS(params(1, 1, 1, -1, 0), SpectralError);
  CHECK_THROWS_AS(params(1, 1, 1, 0.5, std::nan("")), SpectralError);
  try {
    params(1, -2, 1, 0.5, 0);
    FAIL("expected throw");
  } catch (const SpectralError& e) {
    CHECK(e.code() == Errc::NonPositiveParameter);
  }
}

TEST_CASE("phi_beta values, poles and removable points") {
  const auto p = params(1, 1, 1, 1, kPi / 2);
  auto v = phi_beta(kPi / 2, p);
  CHECK(!v.pole);
  CHECK(v.value == doctest::Approx(0.0).epsilon(1e-14));

  const auto p0 = params(1, 1, 1, 1, 0);
  v = phi_beta(kPi / 4, p0);
  CHECK(!v.pole);
  CHECK(v.value == doctest::Approx(-std::tan(kPi / 8)).epsilon(1e-14));

  CHECK(phi_beta(kPi, p).pole);  // sin(pi) = 0, cos(pi) != cos(pi/2)

  v = phi_beta(2 * kPi, p0);  // removable: both numerator and denominator vanish
  CHECK(!v.pole);
  CHECK(v.value == 0.0);
}

TEST_CASE("phi_beta is even and 2pi-periodic in beta") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ub(-8.0, 8.0), uw(0.3, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double beta = ub(rng), om = uw(rng);
    const auto folded = params(1, 1, 1.7, 1, beta);
    const auto direct = LatticeParams{1, 1, 1.7, 1, beta};
    const auto a = phi_beta(om, folded);
    const auto b = phi_beta(om, direct);
    CHECK(a.pole == b.pole);
    if (!a.pole) CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  }
}

TEST_CASE("phi_beta continuity at a removable point") {
  const auto p0 = params(1, 1, 1, 1, 0);
  const double star = 2 * kPi;
  const double v0 = phi_beta(star, p0).value;
  const double d4 = std::fabs(phi_beta(star + 1e-4, p0).value - v0);
  const double d6 = std::fabs(phi_beta(star + 1e-6, p0).value - v0);
  CHECK(d4 < 1e-3);
  CHECK(d6 < 1e-5);
  CHECK(d6 < d4 / 50.0);  // roughly linear decay of the deviation
}

TEST_CASE("f_value matches the two-term sum") {
  const auto p = params(1, 1, 2, 1, 0.3);
  CHECK(f_value(kPi / 2, kPi / 2, kPi / 2, p) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(f_value(0, kPi, kPi / 2, p) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(f_value(0, 0, kPi / 2, p) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(f_value(0.3, 0.4, kPi, p), SpectralError);
}

TEST_CASE("f_range brackets f_value and contains zero") {
  const auto p = params(1, 1, 2, 1, 0.3);
  auto r = f_range(kPi / 2, p);
  CHECK(r.lo == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(r.hi == doctest::Approx(2.0).epsilon(1e-14));

  r = f_range(kPi / 3, p);
  CHECK(r.lo == doctest::Approx(-2.0 * std::sqrt(3.0)).epsilon(1e-13));
  CHECK(r.hi == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-13));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), uw(0.2, 6.0);
  int tested = 0;
  while (tested < 1000) {
    const double om = uw(rng);
    Interval ivl;
    try {
      ivl = f_range(om, p);
    } catch (const SpectralError&) {
      continue;
    }
    CHECK(ivl.lo <= 0.0);
    CHECK(ivl.hi >= 0.0);
    const double f = f_value(ang(rng), ang(rng), om, p);
    CHECK(f >= ivl.lo - 1e-10);
    CHECK(f <= ivl.hi + 1e-10);
    ++tested;
  }
}

TEST_CASE("f_range endpoints are attained over a dense grid") {
  const auto p = params(1.3, 0.8, 2, 1, 0.3);
  for (double om : {0.7, 1.9, 2.7}) {
    const auto r = f_range(om, p);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 400; ++i) {
      for (int j = 0; j <= 400; ++j) {
        const double f = f_value(2 * kPi * i / 400, 2 * kPi * j / 400, om, p);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    }
    CHECK(lo == doctest::Approx(r.lo).epsilon(1e-10));
    CHECK(hi == doctest::Approx(r.hi).epsilon(1e-10));
  }
}

TEST_CASE("g_beta sums the cotangents and phi") {
  const auto p = params(1, 1, 1, 1, kPi / 2);
  CHECK(g_beta(kPi / 2, p) == doctest::Approx(0.0).epsilon(1e-14));
  const auto p0 = params(1, 1, 1, 1, 0);
  CHECK(g_beta(kPi / 4, p0) == doctest::Approx(2.0 - std::tan(kPi / 8)).epsilon(1e-14));
  CHECK_THROWS_AS(g_beta(kPi, p0), SpectralError);
}

TEST_CASE("sigma_points enumerates the three families") {
  const auto p = params(1, 1, 2, 1, kPi / 2);
  const auto sp = sigma_points(p, {0.0, kPi});
  REQUIRE(sp.s1.size() == 1);
  CHECK(sp.s1[0] == doctest::Approx(kPi));
  REQUIRE(sp.s2.size() == 1);
  CHECK(sp.s2[0] == doctest::Approx(kPi));
  REQUIRE(sp.s3.size() == 2);
  CHECK(sp.s3[0] == doctest::Approx(kPi / 4));
  CHECK(sp.s3[1] == doctest::Approx(3 * kPi / 4));

  const auto p0 = params(1, 1, 1, 1, 0);
  const auto sp0 = sigma_points(p0, {0.0, 2 * kPi});
  REQUIRE(sp0.s3.size() == 1);
  CHECK(sp0.s3[0] == doctest::Approx(2 * kPi));

  const auto ppi = params(1, 1, 1, 1, kPi);
  const auto sppi = sigma_points(ppi, {0.0, 4 * kPi});
  REQUIRE(sppi.s3.size() == 2);
  CHECK(sppi.s3[0] == doctest::Approx(kPi));
  CHECK(sppi.s3[1] == doctest::Approx(3 * kPi));
}

TEST_CASE("w_points lists the non-removable poles") {
  const auto p = params(1, 1, 2, 1, kPi / 2);
  const auto w = w_points(p, {0.0, 2 * kPi});
  REQUIRE(w.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(w[i] == doctest::Approx((i + 1) * kPi / 2));

  const auto p0 = params(1, 1, 1, 1, 0);
  const auto w0 = w_points(p0, {0.0, 4 * kPi});
  REQUIRE(w0.size() == 2);
  CHECK(w0[0] == doctest::Approx(kPi));
  CHECK(w0[1] == doctest::Approx(3 * kPi));

  const auto ppi = params(1, 1, 1, 1, kPi);
  const auto wpi = w_points(ppi, {0.0, 4 * kPi});
  REQUIRE(wpi.size() == 2);
  CHECK(wpi[0] == doctest::Approx(2 * kPi));
  CHECK(wpi[1] == doctest::Approx(4 * kPi));

  for (double om : w) CHECK(phi_beta(om, p).pole);
  for (double om : w0) CHECK(phi_beta(om, p0).pole);
}

TEST_CASE("w_points equal the pole set of phi_beta on a fine grid") {
  const auto p = params(1.1, 0.9, 1.7, 1, 0.4);
  const FrequencyWindow win{0.1, 7.0};
  const auto w = w_points(p, win);
  // every grid point within 1e-6 of a listed pole must be the only place
  // phi_beta can report a pole
  std::size_t hits = 0;
  for (double om = win.lo; om <= win.hi; om += 1e-3) {
    if (phi_beta(om, p).pole) ++hits;  // grid rarely lands inside the 1e-12 pole tolerance
  }
  CHECK(hits == 0);
  for (double pole : w) {
    CHECK(phi_beta(pole, p).pole);
    CHECK(!phi_beta(pole + 1e-6, p).pole);
  }
}

TEST_CASE("sigma and w points are invariant under swapping a1, a2") {
  const auto p = params(1.3, 0.7, 2.1, 1, 1.1);
  const auto q = params(0.7, 1.3, 2.1, 1, 1.1);
  const FrequencyWindow win{0.2, 9.0};
  const auto sp = sigma_points(p, win), sq = sigma_points(q, win);
  CHECK(sp.s1 == sq.s2);
  CHECK(sp.s2 == sq.s1);
  CHECK(sp.s3 == sq.s3);
  CHECK(w_points(p, win) == w_points(q, win));
}
