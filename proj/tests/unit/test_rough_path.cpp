#include <chrono>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "roughkin/rough_path.hpp"
#include "support.hpp"

using namespace roughkin;
using roughkin::test::thrown_kind;

namespace {

std::vector<double> sample(std::size_t n_fine, double t0, double t1, auto&& path, std::size_t dim) {
  std::vector<double> out((n_fine + 1) * dim);
  for (std::size_t m = 0; m <= n_fine; ++m) {
    const double t = t0 + (t1 - t0) * static_cast<double>(m) / static_cast<double>(n_fine);
    const auto v = path(t);
    for (std::size_t i = 0; i < dim; ++i) out[m * dim + i] = v[i];
  }
  return out;
}

DriverIncrement compose(const DriverIncrement& a, const DriverIncrement& b) {
  DriverIncrement c = a;
  c.dt = a.dt + b.dt;
  for (std::size_t i = 0; i < a.dim; ++i) c.level1[i] += b.level1[i];
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      c.level2[i * a.dim + j] += b.level2[i * a.dim + j] + a.level1[i] * b.level1[j];
  return c;
}

}  // namespace

TEST_CASE("time grid nodes and lookup") {
  const TimeGrid g(0.0, 1.0, 8);
  CHECK(g.step() == doctest::Approx(0.125));
  CHECK(g.index_of(0.5) == 4);
  CHECK(g.index_of(1.0) == 8);
  CHECK(thrown_kind([&] { (void)g.index_of(0.3); }) == ErrorKind::GridMismatch);
  CHECK(thrown_kind([] { TimeGrid(1.0, 0.0, 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("lift of (t, t^2) matches closed-form iterated integrals") {
  const TimeGrid grid(0.0, 1.0, 1);
  const auto s = sample(2048, 0.0, 1.0, [](double t) { return std::vector<double>{t, t * t}; }, 2);
  const GeometricRoughPath rp = lift_smooth_path(s, 2, 2.5, grid);
  const auto l1 = rp.level1(0);
  const auto l2 = rp.level2(0);
  CHECK(l1[0] == doctest::Approx(1.0));
  CHECK(l1[1] == doctest::Approx(1.0));
  // ∫t dt, ∫t d(t²) = 2/3, ∫t² dt = 1/3, ∫t² d(t²) = 1/2
  CHECK(std::abs(l2[0] - 0.5) < 1e-12);
  CHECK(std::abs(l2[1] - 2.0 / 3.0) < 1e-6);
  CHECK(std::abs(l2[2] - 1.0 / 3.0) < 1e-6);
  CHECK(std::abs(l2[3] - 0.5) < 1e-12);
}

TEST_CASE("smooth lifts satisfy Chen and shuffle") {
  const TimeGrid grid(0.0, 2.0, 64);
  const auto s = sample(64 * 8, 0.0, 2.0,
                        [](double t) { return std::vector<double>{std::sin(3 * t), std::cos(t), t * t * t}; }, 3);
  const GeometricRoughPath rp = lift_smooth_path(s, 3, 2.5, grid);
  const RoughPathDefect d = check_defects(rp);
  CHECK(d.ok());
  CHECK(d.chen_defect < 1e-12);
  CHECK(d.shuffle_defect < 1e-12);
}

TEST_CASE("holder norm of z = t on [0, 1] is one") {
  const TimeGrid grid(0.0, 1.0, 16);
  const auto s = sample(64, 0.0, 1.0, [](double t) { return std::vector<double>{t}; }, 1);
  CHECK(check_defects(lift_smooth_path(s, 1, 2.5, grid)).holder_norm == doctest::Approx(1.0));
}

TEST_CASE("lift rejects too coarse samples") {
  const TimeGrid grid(0.0, 1.0, 8);
  const auto s = sample(16, 0.0, 1.0, [](double t) { return std::vector<double>{t}; }, 1);
  CHECK(thrown_kind([&] { (void)lift_smooth_path(s, 1, 2.5, grid); }) == ErrorKind::ResolutionMismatch);
}

TEST_CASE("corrupted level-2 data is caught by the Chen check") {
  const TimeGrid grid(0.0, 1.0, 4);
  const auto s = sample(32, 0.0, 1.0, [](double t) { return std::vector<double>{t, t * t}; }, 2);
  const GeometricRoughPath rp = lift_smooth_path(s, 2, 2.5, grid);
  std::vector<double> a1, a2;
  for (std::size_t k = 0; k <= 4; ++k) {
    for (double v : rp.anchor1(k)) a1.push_back(v);
    for (double v : rp.anchor2(k)) a2.push_back(v);
  }
  std::vector<double> l2 = rp.level2_data();
  l2[2 * 4 + 1] += 0.5;
  const GeometricRoughPath bad(2, grid, 2.5, rp.level1_data(), l2, a1, a2);
  const RoughPathDefect d = check_defects(bad);
  CHECK(d.chen_defect >= 0.5 - 1e-12);
  CHECK_FALSE(d.ok());
}

TEST_CASE("reversed increment is the group inverse") {
  DriverIncrement x{2, {0.3, -0.7}, {0.045, 0.2, -0.41, 0.245}, 0.1};
  const DriverIncrement id = compose(x, x.reversed());
  for (double v : id.level1) CHECK(std::abs(v) < 1e-15);
  for (double v : id.level2) CHECK(std::abs(v) < 1e-15);
  CHECK(id.dt == 0.0);
}

TEST_CASE("log-linear pieces compose back to the increment") {
  DriverIncrement x{2, {0.3, -0.7}, {0.045, 0.2, -0.41, 0.245}, 0.1};
  const DriverIncrement p = x.piece(8);
  DriverIncrement acc = p;
  for (int r = 1; r < 8; ++r) acc = compose(acc, p);
  for (std::size_t i = 0; i < 2; ++i) CHECK(acc.level1[i] == doctest::Approx(x.level1[i]));
  for (std::size_t i = 0; i < 4; ++i) CHECK(acc.level2[i] == doctest::Approx(x.level2[i]));
  CHECK(acc.dt == doctest::Approx(0.1));
}

TEST_CASE("brownian lifts are reproducible and geometric") {
  const TimeGrid grid(0.0, 1.0, 128);
  const auto a = sample_brownian_lift(2, grid, 8, 42);
  const auto b = sample_brownian_lift(2, grid, 8, 42);
  const auto c = sample_brownian_lift(2, grid, 8, 43);
  CHECK(a.level2_data() == b.level2_data());
  CHECK(a.level1_data() != c.level1_data());
  CHECK(check_defects(a).ok());
}

TEST_CASE("levy area variance over [0, 1] is about 1/4") {
  const TimeGrid grid(0.0, 1.0, 1);
  const std::size_t n = 4000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto rp = sample_brownian_lift(2, grid, 64, derive_seed(11, 0, s));
    const auto l2 = rp.level2(0);
    const double area = 0.5 * (l2[1] - l2[2]);
    sum += area;
    sq += area * area;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(var - 0.25) < 0.025);
}

TEST_CASE("joint lift keeps the z block and the mixed-block identity") {
  const TimeGrid grid(0.0, 1.0, 32);
  const auto z = sample_brownian_lift(1, grid, 8, 5);
  const auto w = sample_brownian_path(1, grid, 8, 6);
  const auto joint = joint_lift(z, w, 1, grid);
  REQUIRE(joint.dim() == 2);
  for (std::size_t k = 0; k < 32; ++k) {
    const auto l1 = joint.level1(k);
    const auto l2 = joint.level2(k);
    CHECK(l1[0] == z.level1(k)[0]);
    CHECK(l2[0] == z.level2(k)[0]);
    CHECK(std::abs(l2[1] + l2[2] - l1[0] * l1[1]) < 1e-12);
  }
  CHECK(check_defects(joint).ok());
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, 1, 0) != derive_seed(1, 2, 0));
  CHECK(derive_seed(1, 1, 0) != derive_seed(1, 1, 1));
  CHECK(derive_seed(1, 1, 0) == derive_seed(1, 1, 0));
}

TEST_CASE("lift of 1024 steps runs well under a second") {
  const TimeGrid grid(0.0, 1.0, 1024);
  const auto start = std::chrono::steady_clock::now();
  const auto rp = sample_brownian_lift(2, grid, 4, 9);
  (void)check_defects(rp);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 1.0);
}
