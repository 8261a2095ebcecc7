#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "roughkin/harness.hpp"
#include "support.hpp"

using namespace roughkin;
using roughkin::test::thrown_kind;

TEST_CASE("scenario parsing") {
  std::istringstream in(
      "# comment\n"
      "model = modulated_burgers\n"
      "c_amp = 0.25\n"
      "dt = 1/512\n"
      "t_end = 1/8\n"
      "driver = brownian\n"
      "seed = 12\n"
      "ladder = 1/32, 1/64\n");
  const Scenario s = parse_scenario(in);
  CHECK(s.model == "modulated_burgers");
  CHECK(s.params.c_amp == 0.25);
  CHECK(s.dt == 1.0 / 512);
  CHECK(s.n_steps() == 64);
  CHECK(s.stochastic());
  CHECK(s.seed == 12);
  CHECK(s.ladder == std::vector<double>{1.0 / 32, 1.0 / 64});
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("scenario errors") {
  std::istringstream unknown("colour = red\n");
  CHECK(thrown_kind([&] { (void)parse_scenario(unknown); }) == ErrorKind::Config);
  Scenario s;
  apply_override(s, "driver=brownian");
  CHECK(thrown_kind([&] { validate_scenario(s); }) == ErrorKind::Config);
  apply_override(s, "seed=3");
  CHECK_NOTHROW(validate_scenario(s));
  apply_override(s, "nxi=63");
  CHECK(thrown_kind([&] { validate_scenario(s); }) == ErrorKind::Config);
  CHECK(thrown_kind([&] { apply_override(s, "nx"); }) == ErrorKind::Config);
  CHECK(parse_number("3/4") == 0.75);
  CHECK(parse_number("-2.5e-1") == -0.25);
  CHECK(thrown_kind([] { (void)parse_number("1/0"); }) == ErrorKind::Config);
}

TEST_CASE("initial data") {
  const PhaseGrid g(8, 8, 1.0, 2.0);
  const auto r = sample_initial("riemann:1,0", g);
  CHECK(r[3] == 1.0);
  CHECK(r[4] == 0.0);
  const auto q = sample_initial("riemann:0.5,-0.5,0.25", g);
  CHECK(q[1] == 0.5);
  CHECK(q[2] == -0.5);
  const auto s = initial_profile("sine:0.5,0.25", 1.0);
  CHECK(s(0.25) == doctest::Approx(0.75));
  CHECK(sample_initial("constant:0.3", g)[5] == 0.3);
  CHECK(thrown_kind([&] { (void)sample_initial("gauss:1", g); }) == ErrorKind::Config);
}

TEST_CASE("contraction metric") {
  const std::size_t n = 512;
  const double torus = 2 * std::numbers::pi;
  const double dx = torus / n;
  std::vector<double> a(n), b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::sin((static_cast<double>(i) + 0.5) * dx);
  CHECK(contraction_metric(a, b, dx) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(contraction_metric(b, a, dx) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(contraction_metric(a, a, dx) == 0.0);
}

TEST_CASE("realizations are pure functions of the seed") {
  Scenario s;
  s.driver = "brownian";
  s.seed = 5;
  s.seed_set = true;
  s.params.lambda = 0.2;
  const FluxModel m = scenario_model(s);
  const Realization a = build_realization(s, m, 3);
  const Realization b = build_realization(s, m, 3);
  const Realization c = build_realization(s, m, 4);
  CHECK(a.z.level1_data() == b.z.level1_data());
  CHECK(a.w_increments == b.w_increments);
  CHECK(a.z.level1_data() != c.z.level1_data());
  REQUIRE(a.joint);
  CHECK(a.forced().dim() == 2);
  CHECK(a.w_increments.size() == s.n_steps());
  for (std::size_t k = 0; k < s.n_steps(); ++k) CHECK(a.joint->level1(k)[1] == a.w_increments[k]);
}

TEST_CASE("deterministic scenario passes every inline check") {
  Scenario s;
  s.nx = 32;
  s.nxi = 32;
  s.t_end = 1.0 / 16;
  const RunResult r = run_scenario(s);
  CHECK(r.diagnostics.ok());
  CHECK(r.diagnostics.rows.back().t == doctest::Approx(1.0 / 16));
  CHECK(r.diagnostics.rows.back().mass == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("runs are reproducible") {
  Scenario s;
  s.driver = "brownian";
  s.seed = 9;
  s.seed_set = true;
  s.nx = 16;
  s.nxi = 16;
  s.t_end = 1.0 / 32;
  s.params.lambda = 0.2;
  const RunResult a = run_scenario(s);
  const RunResult b = run_scenario(s);
  CHECK(a.trajectory.states.back().F == b.trajectory.states.back().F);
  CHECK(a.diagnostics.ok());
}

TEST_CASE("coupled ensembles start from the deterministic metric") {
  Scenario s;
  s.driver = "brownian";
  s.seed = 2;
  s.seed_set = true;
  s.nx = 16;
  s.nxi = 16;
  s.t_end = 1.0 / 32;
  s.stride = 4;
  s.n_paths = 3;
  s.initial2 = "riemann:0.5,0";
  const EnsembleSummary e = ensemble_contraction(s);
  const PhaseGrid g = scenario_grid(s);
  const double m0 = contraction_metric(sample_initial(s.initial, g), sample_initial(s.initial2, g), g.dx());
  CHECK(e.mean.front() == m0);
  CHECK(e.stderr_.front() == 0.0);
  CHECK(e.t.size() == 3);
}

TEST_CASE("reference density for linear transport is a translation") {
  Scenario s;
  s.model = "linear_transport";
  s.params.velocity = 1.0;
  s.initial = "sine:0,1";
  s.t_end = 0.25;
  const PhaseGrid g = scenario_grid(s);
  const auto ref = reference_density(s, g);
  for (std::size_t i = 0; i < g.nx(); ++i)
    CHECK(ref[i] == doctest::Approx(std::sin(2 * std::numbers::pi * (g.x(i) - 0.25))).epsilon(1e-9));
}
