#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "roughkin/reference.hpp"
#include "support.hpp"

using namespace roughkin;
using roughkin::test::thrown_kind;

TEST_CASE("godunov flux for burgers") {
  const ConvexFlux f = burgers_flux();
  CHECK(godunov_flux(f, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(godunov_flux(f, -1.0, 1.0) == 0.0);
  CHECK(godunov_flux(f, 0.0, 1.0) == 0.0);
  CHECK(godunov_flux(f, -1.0, -2.0) == doctest::Approx(2.0));
  CHECK(godunov_flux(f, 2.0, -1.0) == doctest::Approx(2.0));
  CHECK(godunov_flux(f, 1.0, -2.0) == doctest::Approx(2.0));
}

TEST_CASE("godunov flux for linear transport is upwind") {
  const ConvexFlux f = linear_flux(2.0);
  CHECK(godunov_flux(f, 1.0, 3.0) == doctest::Approx(2.0));
  const ConvexFlux g = linear_flux(-1.0);
  CHECK(godunov_flux(g, 1.0, 3.0) == doctest::Approx(-3.0));
}

TEST_CASE("exact riemann solutions") {
  // shock with speed 1/2
  CHECK(exact_riemann_burgers(1.0, 0.0, 0.1, 0.25) == 1.0);
  CHECK(exact_riemann_burgers(1.0, 0.0, 0.2, 0.25) == 0.0);
  // rarefaction fan u = x / t
  CHECK(exact_riemann_burgers(0.0, 1.0, 0.1, 0.25) == doctest::Approx(0.4));
  CHECK(exact_riemann_burgers(0.0, 1.0, -0.1, 0.25) == 0.0);
  CHECK(exact_riemann_burgers(0.0, 1.0, 0.3, 0.25) == 1.0);
}

TEST_CASE("two jumps on the torus") {
  // u = 1 on [0, 1/2): fan at 0, shock from 1/2 with speed 1/2
  CHECK(exact_two_jump_burgers(1.0, 0.0, 0.0, 0.5, 1.0, 0.1, 0.25) == doctest::Approx(0.4));
  CHECK(exact_two_jump_burgers(1.0, 0.0, 0.0, 0.5, 1.0, 0.6, 0.25) == 1.0);
  CHECK(exact_two_jump_burgers(1.0, 0.0, 0.0, 0.5, 1.0, 0.7, 0.25) == 0.0);
  CHECK(exact_two_jump_burgers(1.0, 0.0, 0.0, 0.5, 1.0, 0.95, 0.25) == 0.0);
  CHECK(thrown_kind([] { (void)exact_two_jump_burgers(1.0, 0.0, 0.0, 0.5, 1.0, 0.5, 0.6); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("godunov steps conserve mass and respect the cfl bound") {
  const ConvexFlux f = burgers_flux();
  std::vector<double> u(32);
  for (std::size_t i = 0; i < 32; ++i) u[i] = std::sin(0.4 * static_cast<double>(i));
  const double m0 = std::accumulate(u.begin(), u.end(), 0.0);
  const auto v = godunov_step(u, f, 0.01, 1.0 / 32);
  CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(m0).epsilon(1e-12));
  CHECK(thrown_kind([&] { (void)godunov_step(u, f, 0.1, 1.0 / 32); }) == ErrorKind::Cfl);
}

TEST_CASE("godunov converges to the riemann shock") {
  const std::size_t n = 400;
  const double dx = 1.0 / n;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (static_cast<double>(i) + 0.5) * dx < 0.5 ? 1.0 : 0.0;
  const auto v = godunov_solve(u, burgers_flux(), dx, 0.25);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    err += std::abs(v[i] - exact_two_jump_burgers(1.0, 0.0, 0.0, 0.5, 1.0, x, 0.25)) * dx;
  }
  CHECK(err < 0.01);
}

TEST_CASE("time change reduces to godunov at the changed time") {
  const std::size_t n = 64;
  const double dx = 1.0 / n;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = 0.5 + 0.3 * std::sin(2 * 3.141592653589793 * (i + 0.5) * dx);
  const auto a = time_change_solve(u, burgers_flux(), dx, [](double t) { return t * t; }, 0.5);
  const auto b = godunov_solve(u, burgers_flux(), dx, 0.25);
  for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]));
  CHECK(thrown_kind([&] { (void)time_change_solve(u, burgers_flux(), dx, [](double t) { return std::sin(10 * t); }, 1.0); }) ==
        ErrorKind::NonMonotone);
}

TEST_CASE("convexity check") {
  CHECK_NOTHROW(check_convex(burgers_flux(), -2.0, 2.0));
  ConvexFlux cubic{[](double u) { return u * u * u; }, [](double u) { return 3 * u * u; }, 0.0};
  CHECK(thrown_kind([&] { check_convex(cubic, -1.0, 1.0); }) == ErrorKind::InvalidArgument);
}
