#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roughkin/characteristics.hpp"
#include "roughkin/coefficients.hpp"
#include "roughkin/error.hpp"
#include "roughkin/harness.hpp"
#include "roughkin/io.hpp"
#include "roughkin/rough_path.hpp"

namespace fs = std::filesystem;
using namespace roughkin;

namespace {

struct ScenarioArgs {
  std::string file;
  std::vector<std::string> sets;
};

void add_scenario_options(CLI::App* sub, ScenarioArgs& args) {
  sub->add_option("--scenario", args.file, "key=value scenario file");
  sub->add_option("--set", args.sets, "override, key=value (repeatable)");
}

Scenario load(const ScenarioArgs& args) {
  Scenario scn = args.file.empty() ? Scenario{} : load_scenario(args.file);
  for (const std::string& s : args.sets) apply_override(scn, s);
  validate_scenario(scn);
  return scn;
}

bool report_checks(const DiagnosticsRecord& diag) {
  for (const InvariantCheck& c : diag.checks)
    std::printf("%-32s %-4s %.3e (tol %.3e)\n", c.name.c_str(), c.passed ? "ok" : "FAIL", c.value, c.tolerance);
  return diag.ok();
}

int cmd_lift(const std::string& input, std::size_t steps, double p, const std::string& out) {
  const SampleTable table = read_samples_csv(input);
  const double t0 = table.times.front();
  const double t1 = table.times.back();
  const std::size_t n_fine = table.times.size() - 1;
  const double h = (t1 - t0) / static_cast<double>(n_fine);
  for (std::size_t m = 0; m <= n_fine; ++m)
    require(std::abs(table.times[m] - (t0 + static_cast<double>(m) * h)) <= 1e-9 * (1.0 + std::abs(t1)),
            ErrorKind::ResolutionMismatch, "sample times must be uniform");
  const GeometricRoughPath rp = lift_smooth_path(table.values, table.dim, p, TimeGrid(t0, t1, steps));
  write_rough_path(out, rp);
  const RoughPathDefect d = check_defects(rp);
  std::printf("dim=%zu n_steps=%zu p=%.3f chen=%.3e shuffle=%.3e holder=%.6f tol=%.3e\n", rp.dim(), rp.n_steps(),
              rp.p(), d.chen_defect, d.shuffle_defect, d.holder_norm, d.tolerance());
  return d.ok() ? 0 : 1;
}

struct FlowArgs {
  std::string path;
  double t0 = 0.0, t1 = 1.0, s = 0.0, t = 1.0;
  std::string model = "burgers";
  double c_amp = 0.5, c_period = 6.283185307179586, velocity = 1.0, lambda = 0.0;
  std::size_t nx = 64, nxi = 64;
  double torus = 6.283185307179586, xi_max = 2.0, target = 0.05;
  bool inverse = false;
  std::string out;
};

int cmd_flow(const FlowArgs& a) {
  const GeometricRoughPath rp = read_rough_path(a.path, a.t0, a.t1);
  ModelParams params;
  params.c_amp = a.c_amp;
  params.c_period = a.c_period;
  params.velocity = a.velocity;
  if (a.lambda != 0.0) params.lambda = a.lambda;
  const FluxModel model = make_model(a.model, params);
  (void)validate(model, Box{0.0, a.torus, -a.xi_max, a.xi_max}, 32);
  const CharacteristicFields fields = assemble_characteristic_fields(model);
  const FieldBundle& bundle = rp.dim() == fields.forced.columns ? fields.forced : fields.unforced;
  require(rp.dim() == bundle.columns, ErrorKind::GridMismatch, "dump dimension matches neither bundle");
  const PhaseGrid grid(a.nx, a.nxi, a.torus, a.xi_max);
  FlowOptions opts;
  opts.substep_target = a.target;
  const FlowField flow = a.inverse ? inverse_flow(bundle, rp, a.s, a.t, grid, opts)
                                   : forward_flow(bundle, rp, a.s, a.t, grid, opts);
  const double inv = inverse_composition_defect(bundle, rp, a.s, a.t, grid, opts);
  const double sign = sign_preservation_check(flow);
  const double jac = flow.max_jacobian_defect();
  // Only flows without W columns are volume preserving.
  const bool volume = &bundle == &fields.unforced || model.K == 0;
  const bool ok = (!volume || jac <= 1e-3) && inv <= 1e-3 && sign == 0.0;
  char summary[256];
  std::snprintf(summary, sizeof summary,
                "jac_defect=%.3e inverse_defect=%.3e sign_violation=%.3e displacement=%.4f volume_checked=%d %s\n", jac,
                inv, sign, flow.max_displacement(), volume ? 1 : 0, ok ? "ok" : "FAIL");
  if (a.out.empty()) {
    write_flow_csv(std::cout, flow);
    std::cerr << summary;
  } else {
    std::ofstream out(a.out);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + a.out);
    write_flow_csv(out, flow);
    std::cout << summary;
  }
  return ok ? 0 : 1;
}

int cmd_solve(const ScenarioArgs& args, const std::string& out) {
  const Scenario scn = load(args);
  const RunResult run = run_scenario(scn);
  write_artifacts(run, out);
  const StepDiagnostics& last = run.diagnostics.rows.back();
  std::printf("t=%.6f mass=%.12f l1=%.6f measure=%.6e\n", last.t, last.mass, last.l1, run.diagnostics.measure_total);
  if (scn.residual) std::printf("weak residual %.6e\n", run.weak.residual);
  return report_checks(run.diagnostics) ? 0 : 1;
}

int cmd_ensemble(const ScenarioArgs& args, const std::string& out) {
  const Scenario scn = load(args);
  const EnsembleSummary sum = ensemble_contraction(scn);
  fs::create_directories(out);
  write_ensemble_csv(fs::path(out) / "ensemble.csv", sum);
  const PhaseGrid grid = scenario_grid(scn);
  const double indicator_tol = grid.dxi() * grid.torus_length();
  std::printf("paths=%zu first=%.6e last=%.6e floor=%.3e energy_ratio=%.4f\n", sum.n_paths, sum.mean.front(),
              sum.mean.back(), sum.tolerance_floor, sum.energy_ratio);
  std::printf("contraction %s, indicator defect %.3e (tol %.3e)\n", sum.nonincreasing ? "ok" : "FAIL",
              sum.max_indicator_defect, indicator_tol);
  return sum.nonincreasing && sum.max_indicator_defect <= indicator_tol ? 0 : 1;
}

int cmd_validate(const ScenarioArgs& args) {
  const Scenario scn = load(args);
  const FluxModel model = scenario_model(scn);
  const CoefficientReport rep = validate(model, Box{0.0, scn.torus, -scn.xi_max, scn.xi_max}, 64);
  std::printf("null=%.3e derivative=%.3e divergence=%.3e |a|<=%.4f |b|<=%.4f |g|<=%.4f\n", rep.null_condition_defect,
              rep.derivative_defect, rep.divergence_defect, rep.bounds.a, rep.bounds.b, rep.bounds.g);
  const RunResult run = run_scenario(scn);
  bool ok = report_checks(run.diagnostics);
  const bool smooth = scn.driver == "time" || scn.driver.rfind("smooth:", 0) == 0;
  if (smooth && model.K == 0 && model.x_independent) {
    const PhaseGrid grid = scenario_grid(scn);
    const auto ref = reference_density(scn, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.nx(); ++i) err += std::abs(run.trajectory.states.back().u[i] - ref[i]) * grid.dx();
    std::printf("l1 error vs reference at t=%.6f: %.6e\n", scn.t_end, err);
  } else {
    std::printf("no reference solution for this scenario\n");
  }
  return ok ? 0 : 1;
}

int cmd_study(const ScenarioArgs& args, const std::string& out) {
  const Scenario scn = load(args);
  const StudyTable table = convergence_study(scn);
  fs::create_directories(out);
  write_study_csv(fs::path(out) / "study.csv", table);
  std::printf("%10s %6s %6s %12s %12s %14s %14s\n", "dx", "nx", "nxi", "dt", "eps", "l1_error", "residual");
  for (const StudyRow& r : table.rows)
    std::printf("%10.6f %6zu %6zu %12.6e %12.6e %14.6e %14.6e\n", r.dx, r.nx, r.nxi, r.dt, r.eps, r.l1_error,
                r.residual);
  const bool have_errors = !table.rows.empty() && std::isfinite(table.rows.front().l1_error);
  bool ok = true;
  if (have_errors) {
    std::printf("errors %s\n", table.errors_decreasing ? "decreasing" : "NOT decreasing");
    ok = ok && table.errors_decreasing;
  }
  if (scn.residual) {
    std::printf("residuals %s\n", table.residuals_decreasing ? "decreasing" : "NOT decreasing");
    ok = ok && table.residuals_decreasing;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roughkin: rough-path driven kinetic BGK solver"};
  app.require_subcommand(1);

  std::string lift_in, lift_out;
  std::size_t lift_steps = 0;
  double lift_p = 2.5;
  auto* lift = app.add_subcommand("lift", "lift sampled (t, components) CSV to an RKRP1 dump");
  lift->add_option("--input", lift_in, "sample CSV")->required();
  lift->add_option("--steps", lift_steps, "coarse grid steps")->required();
  lift->add_option("--p", lift_p, "Hölder exponent in (2,3)");
  lift->add_option("--out", lift_out, "output dump")->required();

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "characteristic flow of a dumped driver on a phase grid");
  flow->add_option("--path", fa.path, "RKRP1 dump")->required();
  flow->add_option("--t0", fa.t0, "start of the dump's time interval");
  flow->add_option("--t1", fa.t1, "end of the dump's time interval");
  flow->add_option("--s", fa.s, "flow start time");
  flow->add_option("--t", fa.t, "flow end time");
  flow->add_option("--model", fa.model, "built-in model");
  flow->add_option("--c-amp", fa.c_amp, "modulation amplitude, |c_amp| < 1");
  flow->add_option("--c-period", fa.c_period, "modulation period in x");
  flow->add_option("--velocity", fa.velocity, "linear transport speed");
  flow->add_option("--lambda", fa.lambda, "multiplicative forcing g = lambda xi");
  flow->add_option("--nx", fa.nx, "x cells");
  flow->add_option("--nxi", fa.nxi, "xi cells");
  flow->add_option("--torus", fa.torus, "torus length");
  flow->add_option("--xi-max", fa.xi_max, "xi box half-width");
  flow->add_option("--substep-target", fa.target, "local step norm per log-linear piece");
  flow->add_flag("--inverse", fa.inverse, "time-reversed flow");
  flow->add_option("--out", fa.out, "CSV file (stdout when omitted)");

  ScenarioArgs solve_args, ens_args, val_args, study_args;
  std::string solve_out = "out", ens_out = "out", study_out = "out";
  auto* solve = app.add_subcommand("solve", "run one BGK solve");
  add_scenario_options(solve, solve_args);
  solve->add_option("--out", solve_out, "output directory");
  auto* ens = app.add_subcommand("ensemble", "coupled L1-contraction ensemble");
  add_scenario_options(ens, ens_args);
  ens->add_option("--out", ens_out, "output directory");
  auto* val = app.add_subcommand("validate", "coefficient checks and comparison with the reference solver");
  add_scenario_options(val, val_args);
  auto* study = app.add_subcommand("study", "convergence ladder");
  add_scenario_options(study, study_args);
  study->add_option("--out", study_out, "output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*lift) return cmd_lift(lift_in, lift_steps, lift_p, lift_out);
    if (*flow) return cmd_flow(fa);
    if (*solve) return cmd_solve(solve_args, solve_out);
    if (*ens) return cmd_ensemble(ens_args, ens_out);
    if (*val) return cmd_validate(val_args);
    if (*study) return cmd_study(study_args, study_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "roughkin: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "roughkin: %s\n", e.what());
    return 2;
  }
  return 1;
}
