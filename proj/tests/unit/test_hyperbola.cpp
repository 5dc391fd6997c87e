#include <cmath>
#include <random>

#include "bdpr/error.hpp"
#include "bdpr/hyperbola.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdpr;

TEST_CASE("quartic with four planted real roots") {
  const auto c = oracle::quartic_from_roots({-3.0, -0.5, 1.0, 4.0});
  const auto r = quartic_real_roots(c[0], c[1], c[2], c[3]);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r[3] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("quartic with no real roots") {
  const auto c = oracle::quartic_from_roots({Complex(1, 2), Complex(1, -2), Complex(-1, 0.5), Complex(-1, -0.5)});
  CHECK(quartic_real_roots(c[0], c[1], c[2], c[3]).empty());
}

TEST_CASE("quartic with a double root reports it once") {
  const auto c = oracle::quartic_from_roots({2.0, 2.0, Complex(0, 1), Complex(0, -1)});
  const auto r = quartic_real_roots(c[0], c[1], c[2], c[3]);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("quartic with widely scaled roots") {
  const auto c = oracle::quartic_from_roots({1e-3, 1e3, Complex(5, 1), Complex(5, -1)});
  const auto r = quartic_real_roots(c[0], c[1], c[2], c[3]);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(r[1] == doctest::Approx(1e3).epsilon(1e-12));
}

TEST_CASE("feasible targets are returned unchanged") {
  const auto r = project_hyperbola({2.0, 3.0, 5.0});
  CHECK(r.case_id == ProjectionCase::Interior);
  CHECK(r.u1 == 2.0);
  CHECK(r.u2 == 3.0);
  CHECK(r.kkt_residual == 0.0);
  CHECK(r.mu == 0.0);
}

TEST_CASE("symmetric target projects onto the diagonal point") {
  // (t, t) with t² < δ: by symmetry the projection is (√δ, √δ).
  const auto r = project_hyperbola({0.5, 0.5, 4.0});
  CHECK(r.case_id == ProjectionCase::Boundary);
  CHECK(r.u1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.u2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.mu == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("projection matches the brute-force boundary oracle") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> xi(-8.0, 8.0);
  std::uniform_real_distribution<double> ld(-4.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const double x1 = xi(g), x2 = xi(g), d = std::exp(ld(g));
    const auto r = project_hyperbola({x1, x2, d});
    CHECK(r.u1 >= 0.0);
    CHECK(r.u1 * r.u2 >= d - 1e-9 * std::max(1.0, d));
    if (x1 >= 0 && x1 * x2 >= d) continue;
    const auto o = oracle::hyperbola_grid_projection(x1, x2, d);
    CHECK(std::hypot(r.u1 - o.u1, r.u2 - o.u2) < 1e-6 * std::max(1.0, std::hypot(o.u1, o.u2)));
    CHECK(r.mu >= 0.0);
    CHECK(std::abs(r.u1 - x1 - r.mu * r.u2) <= 1e-8 * std::max({1.0, std::abs(x1), std::abs(x2)}));
    CHECK(std::abs(r.u2 - x2 - r.mu * r.u1) <= 1e-8 * std::max({1.0, std::abs(x1), std::abs(x2)}));
    CHECK(r.kkt_residual <= 1e-8 * std::max({1.0, std::abs(x1), std::abs(x2)}));
  }
}

TEST_CASE("projection is nonexpansive") {
  std::mt19937_64 g(22);
  std::uniform_real_distribution<double> xi(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double d = 1.5;
    const double a1 = xi(g), a2 = xi(g), b1 = xi(g), b2 = xi(g);
    const auto pa = project_hyperbola({a1, a2, d});
    const auto pb = project_hyperbola({b1, b2, d});
    CHECK(std::hypot(pa.u1 - pb.u1, pa.u2 - pb.u2) <= std::hypot(a1 - b1, a2 - b2) + 1e-10);
  }
}

TEST_CASE("delta = 0 projects onto the closed set u1 >= 0, u1 u2 >= 0 (nonconvex)") {
  auto r = project_hyperbola({1.0, 2.0, 0.0});
  CHECK(r.u1 == 1.0);
  CHECK(r.u2 == 2.0);
  // (1, -2): (1, 0) is at distance 2, the axis point (0, -2) at distance 1
  r = project_hyperbola({1.0, -2.0, 0.0});
  CHECK(r.u1 == 0.0);
  CHECK(r.u2 == -2.0);
  r = project_hyperbola({3.0, -1.0, 0.0});  // nearest: (3, 0)
  CHECK(r.u1 == 3.0);
  CHECK(r.u2 == 0.0);
  r = project_hyperbola({-1.0, 3.0, 0.0});  // nearest: (0, 3)
  CHECK(r.u1 == 0.0);
  CHECK(r.u2 == 3.0);
  r = project_hyperbola({-1.0, -2.0, 0.0});  // 0 * (-2) >= 0: nearest (0, -2)
  CHECK(r.u1 == 0.0);
  CHECK(r.u2 == -2.0);
}

TEST_CASE("invalid targets are rejected") {
  CHECK_THROWS_AS(project_hyperbola({1.0, 1.0, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(project_hyperbola({std::nan(""), 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(project_hyperbola({1.0, INFINITY, 1.0}), InvalidArgument);
}

TEST_CASE("project_set_C applies the scalar projection componentwise") {
  RVector x1(4), x2(4), d(4), u1, u2;
  x1 << 0.5, 2.0, -1.0, 3.0;
  x2 << 0.5, 3.0, -1.0, -2.0;
  d << 4.0, 5.0, 1.0, 0.0;
  project_set_C(x1, x2, d, u1, u2);
  for (int i = 0; i < 4; ++i) {
    const auto r = project_hyperbola({x1(i), x2(i), d(i)});
    CHECK(u1(i) == r.u1);
    CHECK(u2(i) == r.u2);
  }
  RVector short_d(2);
  CHECK_THROWS_AS(project_set_C(x1, x2, short_d, u1, u2), InvalidArgument);
}
