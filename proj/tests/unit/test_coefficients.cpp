#include <cmath>
#include <numbers>

#include "doctest.h"
#include "roughkin/coefficients.hpp"
#include "support.hpp"

using namespace roughkin;
using roughkin::test::thrown_kind;

TEST_CASE("burgers coefficients") {
  const FluxModel m = make_model("burgers");
  CHECK(m.M == 1);
  CHECK(m.K == 0);
  CHECK(m.x_independent);
  CHECK(m.flux(0.3, 0.8, 0) == doctest::Approx(0.32));
  CHECK(m.a(0.3, 0.8, 0).v == doctest::Approx(0.8));
  CHECK(m.b(0.3, 0.8, 0).v == 0.0);
  const CoefficientReport r = validate(m, Box{0.0, 1.0, -2.0, 2.0}, 32);
  CHECK(r.null_condition_defect == 0.0);
  CHECK(r.derivative_defect < 1e-6);
  CHECK(r.divergence_defect < 1e-12);
  CHECK(r.bounds.a == doctest::Approx(2.0));
}

TEST_CASE("modulated burgers is consistent with its flux") {
  ModelParams p;
  p.c_amp = 0.4;
  p.c_period = 1.0;
  const FluxModel m = make_model("modulated_burgers", p);
  CHECK_FALSE(m.x_independent);
  const double x = 0.125, xi = 0.7;
  const double c = 1.0 + 0.4 * std::sin(2.0 * std::numbers::pi * x);
  CHECK(m.flux(x, xi, 0) == doctest::Approx(0.5 * c * xi * xi));
  CHECK(m.a(x, xi, 0).v == doctest::Approx(c * xi));
  const CoefficientReport r = validate(m, Box{0.0, 1.0, -2.0, 2.0}, 48);
  CHECK(r.null_condition_defect < 1e-12);
  CHECK(r.derivative_defect < 1e-6);
  CHECK(r.divergence_defect < 1e-12);
}

TEST_CASE("model construction errors") {
  ModelParams p;
  p.c_amp = 1.5;
  CHECK(thrown_kind([&] { (void)make_model("modulated_burgers", p); }) == ErrorKind::Config);
  CHECK(thrown_kind([] { (void)make_model("euler"); }) == ErrorKind::Config);
}

TEST_CASE("null condition violation is rejected") {
  FluxModel m = make_model("burgers");
  m.b = [](double, double, std::size_t) {
    ScalarJet j;
    j.v = 0.1;
    return j;
  };
  CHECK(thrown_kind([&] { (void)validate(m, Box{}, 16); }) == ErrorKind::NullCondition);
}

TEST_CASE("multiplicative noise and its drift correction") {
  const FluxModel m = make_model("linear_multiplicative_noise");
  CHECK(m.K == 1);
  CHECK(m.gsq(0.2, 0.5) == doctest::Approx(0.25));
  CHECK(m.dgsq_dxi(0.2, 0.5) == doctest::Approx(1.0));

  ModelParams p;
  p.lambda = 0.2;
  const FluxModel forced = make_model("burgers", p);
  CHECK(forced.K == 1);
  const CharacteristicFields f = assemble_characteristic_fields(forced);
  CHECK(f.unforced.columns == 1);
  CHECK(f.forced.columns == 2);
  CHECK(f.forced.has_drift);
  BundleEval ev;
  f.forced.evaluate({0.3, 0.5}, true, ev);
  // -¼ ∂_ξ (λξ)² = -λ²ξ/2
  CHECK(ev.drift.v[0] == 0.0);
  CHECK(ev.drift.v[1] == doctest::Approx(-0.02 * 0.5));
  CHECK(ev.drift.dv[3] == doctest::Approx(-0.02));
  CHECK(ev.columns[0].v[0] == doctest::Approx(0.5));
  CHECK(ev.columns[1].v[1] == doctest::Approx(0.1));
}

TEST_CASE("rough columns are (a, -b)") {
  ModelParams p;
  p.c_amp = 0.3;
  p.c_period = 1.0;
  const FluxModel m = make_model("modulated_burgers", p);
  const CharacteristicFields f = assemble_characteristic_fields(m);
  BundleEval ev;
  f.unforced.evaluate({0.1, -0.6}, true, ev);
  CHECK(ev.columns[0].v[0] == doctest::Approx(m.a(0.1, -0.6, 0).v));
  CHECK(ev.columns[0].v[1] == doctest::Approx(-m.b(0.1, -0.6, 0).v));
  // divergence free: ∂_x a - ∂_ξ b = 0
  CHECK(ev.columns[0].dv[0] + ev.columns[0].dv[3] == doctest::Approx(0.0));
}
