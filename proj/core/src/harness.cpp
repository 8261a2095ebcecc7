#include "roughkin/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "roughkin/error.hpp"
#include "roughkin/io.hpp"
#include "roughkin/reference.hpp"

namespace roughkin {

bool DiagnosticsRecord::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

void DiagnosticsRecord::add(const std::string& name, double value, double tolerance) {
  checks.push_back({name, value, tolerance, std::isfinite(value) && value <= tolerance});
}

namespace {

SolveOptions solve_options(const Scenario& scn, bool keep_all, bool keep_slabs) {
  SolveOptions o;
  o.eps = scn.eps;
  o.stride = scn.stride;
  o.keep_all = keep_all;
  o.keep_slabs = keep_slabs;
  o.check_indicator = scn.check_indicator;
  o.flow.substep_target = scn.flow_target;
  return o;
}

void add_path_checks(DiagnosticsRecord& d, const std::string& label, const GeometricRoughPath& rp) {
  const RoughPathDefect def = check_defects(rp);
  d.add(label + "_chen_defect", def.chen_defect, def.tolerance());
  d.add(label + "_shuffle_defect", def.shuffle_defect, def.tolerance());
}

}  // namespace

RunResult run_scenario(const Scenario& scn) {
  validate_scenario(scn);
  RunResult run;
  run.scenario = scn;
  const FluxModel model = scenario_model(scn);
  const PhaseGrid grid = scenario_grid(scn);
  DiagnosticsRecord& diag = run.diagnostics;

  run.coefficients = validate(model, Box{0.0, scn.torus, -scn.xi_max, scn.xi_max}, 32);
  diag.add("coefficient_null_condition", run.coefficients.null_condition_defect, 1e-12);
  diag.add("coefficient_derivative_defect", run.coefficients.derivative_defect, 1e-6);
  diag.add("coefficient_divergence_defect", run.coefficients.divergence_defect, 1e-9);

  const Realization real = build_realization(scn, model, 0);
  add_path_checks(diag, "driver", real.z);
  if (real.joint) add_path_checks(diag, "joint_lift", *real.joint);

  const CharacteristicFields fields = assemble_characteristic_fields(model);
  const KineticState s0 = equilibrium(grid, sample_initial(scn.initial, grid));
  const bool kinetic_form = scn.residual_form == "kinetic";
  const auto trajs = duhamel_solve(std::span<const KineticState>(&s0, 1), fields.forced, real.forced(),
                                   solve_options(scn, scn.residual, scn.residual && kinetic_form));
  run.trajectory = trajs.front();
  const Trajectory& tr = run.trajectory;
  diag.rows = tr.rows;
  diag.measure_total = tr.measure_total;

  diag.add("max_principle_defect", tr.max_maxprin_defect, 0.0);
  diag.add("negative_measure", std::max(0.0, -tr.min_slab), 1e-12);
  if (scn.check_indicator)
    diag.add("indicator_transport_defect", tr.max_indicator_defect, grid.dxi() * grid.torus_length());
  if (model.K == 0) diag.add("volume_preservation_defect", tr.max_jacobian_defect, 1e-3);
  if (model.K == 0 && model.x_independent) {
    double drift = 0.0;
    for (const StepDiagnostics& r : tr.rows) drift = std::max(drift, std::abs(r.mass - tr.rows.front().mass));
    diag.add("mass_drift", drift, 1e-10 * static_cast<double>(scn.n_steps()) * (1.0 + std::abs(tr.rows.front().mass)));
  }

  if (scn.residual) {
    FlowOptions fo;
    fo.substep_target = scn.flow_target;
    run.weak = weak_form_residual(tr, model, fields.unforced, real.z, real.w_increments, scn.test, scn.eps,
                                  kinetic_form ? WeakForm::Kinetic : WeakForm::Bgk, fo);
    diag.residuals = run.weak.running;
    diag.residuals.resize(tr.rows.size(), run.weak.residual);
  }
  return run;
}

void write_artifacts(const RunResult& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Trajectory& tr = run.trajectory;
  const std::size_t n_steps = run.scenario.n_steps();
  const bool every_step = tr.states.size() == n_steps + 1 && run.scenario.stride > 1;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    if (every_step && k % run.scenario.stride != 0 && k != n_steps) continue;
    char name[64];
    std::snprintf(name, sizeof name, "density_t%.6f.csv", tr.states[k].t);
    write_density_csv(dir / name, tr.states[k]);
  }
  write_kinetic_state(dir / "kinetic_final.rkks", tr.states.back());
  write_diagnostics_csv(dir / "diagnostics.csv", run.diagnostics.rows, run.diagnostics.residuals);
}

double contraction_metric(std::span<const double> u1, std::span<const double> u2, double dx) {
  require(u1.size() == u2.size(), ErrorKind::GridMismatch, "contraction metric needs equal grids");
  double s = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) s += std::max(u1[i] - u2[i], 0.0);
  return s * dx;
}

EnsembleSummary ensemble_contraction(const Scenario& scn) {
  validate_scenario(scn);
  require(!scn.initial2.empty(), ErrorKind::Config, "ensemble needs initial2");
  const FluxModel model = scenario_model(scn);
  (void)validate(model, Box{0.0, scn.torus, -scn.xi_max, scn.xi_max}, 32);
  const PhaseGrid grid = scenario_grid(scn);
  const CharacteristicFields fields = assemble_characteristic_fields(model);
  const std::vector<KineticState> initial{equilibrium(grid, sample_initial(scn.initial, grid)),
                                          equilibrium(grid, sample_initial(scn.initial2, grid))};
  const SolveOptions opts = solve_options(scn, false, false);

  EnsembleSummary sum;
  sum.n_paths = scn.n_paths;
  sum.tolerance_floor = grid.dxi() * grid.torus_length();
  std::vector<std::vector<double>> metric(scn.n_paths);
  double sup_l1_sq = 0.0, l1_0_sq = 0.0, l2_0_4 = 0.0;
  for (std::size_t p = 0; p < scn.n_paths; ++p) {
    const Realization real = build_realization(scn, model, p);
    const auto trajs = duhamel_solve(initial, fields.forced, real.forced(), opts);
    const Trajectory& a = trajs[0];
    const Trajectory& b = trajs[1];
    if (p == 0)
      for (const KineticState& s : a.states) sum.t.push_back(s.t);
    for (std::size_t k = 0; k < a.states.size(); ++k)
      metric[p].push_back(contraction_metric(a.states[k].u, b.states[k].u, grid.dx()));
    double sup = 0.0;
    for (const StepDiagnostics& r : a.rows) sup = std::max(sup, r.l1 * r.l1);
    sup_l1_sq += sup;
    l1_0_sq += a.rows.front().l1 * a.rows.front().l1;
    l2_0_4 += std::pow(a.rows.front().l2, 4);
    sum.max_indicator_defect = std::max({sum.max_indicator_defect, a.max_indicator_defect, b.max_indicator_defect});
    sum.min_slab = std::min({sum.min_slab, a.min_slab, b.min_slab});
  }
  const double n = static_cast<double>(scn.n_paths);
  for (std::size_t k = 0; k < sum.t.size(); ++k) {
    double mean = 0.0;
    for (std::size_t p = 0; p < scn.n_paths; ++p) mean += metric[p][k];
    mean /= n;
    double var = 0.0;
    for (std::size_t p = 0; p < scn.n_paths; ++p) var += (metric[p][k] - mean) * (metric[p][k] - mean);
    const double se = scn.n_paths > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    sum.mean.push_back(mean);
    sum.stderr_.push_back(se);
    if (k > 0 && mean > sum.mean[k - 1] + 2.0 * se + sum.tolerance_floor) sum.nonincreasing = false;
  }
  const double denom = (l1_0_sq + l2_0_4) / n;
  sum.energy_ratio = denom > 0.0 ? (sup_l1_sq / n) / denom : 0.0;
  return sum;
}

std::vector<double> reference_density(const Scenario& scn, const PhaseGrid& grid) {
  const FluxModel model = scenario_model(scn);
  require(model.K == 0 && model.x_independent, ErrorKind::InvalidArgument,
          "reference solutions need an x-independent flux without forcing");
  require(scn.driver == "time" || scn.driver.rfind("smooth:", 0) == 0, ErrorKind::InvalidArgument,
          "reference solutions need a smooth driver");
  const auto z = smooth_driver(scn.driver);
  const double t = scn.t_end;
  for (std::size_t k = 1; k <= 1024; ++k)
    require(z(t * static_cast<double>(k) / 1024.0) > z(t * static_cast<double>(k - 1) / 1024.0),
            ErrorKind::NonMonotone, "reference solutions need a strictly increasing driver");
  const double tau = z(t) - z(0.0);
  const auto u0 = initial_profile(scn.initial, scn.torus);
  std::vector<double> ref(grid.nx());

  if (scn.model == "linear_transport") {
    for (std::size_t i = 0; i < grid.nx(); ++i) ref[i] = u0(grid.x(i) - scn.params.velocity * tau);
    return ref;
  }
  if (scn.model == "burgers" && scn.initial.rfind("riemann:", 0) == 0) {
    const double ul = u0(0.0);
    const double ur = u0(0.999999 * scn.torus);
    double jump = 0.5;
    const auto colon = scn.initial.find(':');
    const std::string args = scn.initial.substr(colon + 1);
    if (std::count(args.begin(), args.end(), ',') == 2) jump = parse_number(args.substr(args.rfind(',') + 1));
    const double gap = std::min(jump, 1.0 - jump) * scn.torus;
    if (tau * std::max(std::abs(ul), std::abs(ur)) <= 0.5 * gap) {
      for (std::size_t i = 0; i < grid.nx(); ++i)
        ref[i] = exact_two_jump_burgers(ul, ur, 0.0, jump * scn.torus, scn.torus, grid.x(i), tau);
      return ref;
    }
  }
  // Fine Godunov run, averaged back to the kinetic cells.
  const ConvexFlux flux = scn.model == "burgers" ? burgers_flux() : linear_flux(scn.params.velocity);
  const std::size_t refine = 8;
  const std::size_t nf = grid.nx() * refine;
  const double dxf = grid.torus_length() / static_cast<double>(nf);
  std::vector<double> fine(nf);
  for (std::size_t i = 0; i < nf; ++i) fine[i] = u0((static_cast<double>(i) + 0.5) * dxf);
  const auto sol = godunov_solve(fine, flux, dxf, tau);
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    double s = 0.0;
    for (std::size_t r = 0; r < refine; ++r) s += sol[i * refine + r];
    ref[i] = s / static_cast<double>(refine);
  }
  return ref;
}

StudyTable convergence_study(const Scenario& scn) {
  validate_scenario(scn);
  require(!scn.ladder.empty(), ErrorKind::Config, "convergence study needs a ladder");
  StudyTable table;
  for (double dx : scn.ladder) {
    Scenario s = scn;
    const double nx = std::round(scn.torus / dx);
    require(nx >= 4 && std::abs(nx * dx - scn.torus) <= 1e-9 * scn.torus, ErrorKind::Config,
            "ladder dx must divide the torus");
    s.nx = static_cast<std::size_t>(nx);
    if (scn.eps_ratio > 0.0) s.eps = scn.eps_ratio * dx;
    if (scn.dt_ratio > 0.0) s.dt = scn.dt_ratio * dx;
    if (scn.dxi_ratio > 0.0) {
      const double nxi = std::round(2.0 * scn.xi_max / (scn.dxi_ratio * dx));
      s.nxi = static_cast<std::size_t>(nxi);
      if (s.nxi % 2 == 1) ++s.nxi;
    }
    const auto start = std::chrono::steady_clock::now();
    const RunResult run = run_scenario(s);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!run.diagnostics.ok()) {
      std::string failed;
      for (const InvariantCheck& c : run.diagnostics.checks)
        if (!c.passed) failed += " " + c.name;
      throw Error(ErrorKind::Invariant, "study level dx=" + std::to_string(dx) + " failed:" + failed);
    }
    const PhaseGrid grid = scenario_grid(s);
    StudyRow row;
    row.dx = grid.dx();
    row.nx = s.nx;
    row.nxi = s.nxi;
    row.dt = s.dt;
    row.eps = s.eps;
    row.measure_total = run.trajectory.measure_total;
    row.residual = run.weak.residual;
    row.seconds = seconds;
    const bool smooth = s.driver == "time" || s.driver.rfind("smooth:", 0) == 0;
    const FluxModel model = scenario_model(s);
    if (smooth && model.K == 0 && model.x_independent) {
      const auto ref = reference_density(s, grid);
      const auto& u = run.trajectory.states.back().u;
      for (std::size_t i = 0; i < grid.nx(); ++i) row.l1_error += std::abs(u[i] - ref[i]) * grid.dx();
    } else {
      row.l1_error = std::nan("");
    }
    table.rows.push_back(row);
  }
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const StudyRow& a = table.rows[k - 1];
    const StudyRow& b = table.rows[k];
    table.orders.push_back(std::log(a.l1_error / b.l1_error) / std::log(a.dx / b.dx));
    if (!(b.l1_error < a.l1_error)) table.errors_decreasing = false;
    if (!(std::abs(b.residual) < std::abs(a.residual))) table.residuals_decreasing = false;
  }
  return table;
}

void write_ensemble_csv(const std::filesystem::path& file, const EnsembleSummary& summary) {
  std::ofstream out(file);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + file.string());
  out << std::setprecision(17) << "t,mean_metric,stderr\n";
  for (std::size_t k = 0; k < summary.t.size(); ++k)
    out << summary.t[k] << ',' << summary.mean[k] << ',' << summary.stderr_[k] << '\n';
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + file.string());
}

void write_study_csv(const std::filesystem::path& file, const StudyTable& table) {
  std::ofstream out(file);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + file.string());
  out << std::setprecision(17) << "dx,nx,nxi,dt,eps,l1_error,residual,measure_total\n";
  for (const StudyRow& r : table.rows)
    out << r.dx << ',' << r.nx << ',' << r.nxi << ',' << r.dt << ',' << r.eps << ',' << r.l1_error << ','
        << r.residual << ',' << r.measure_total << '\n';
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + file.string());
}

}  // namespace roughkin
