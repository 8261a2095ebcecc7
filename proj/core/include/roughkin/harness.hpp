#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roughkin/coefficients.hpp"
#include "roughkin/kinetic.hpp"
#include "roughkin/rough_path.hpp"

namespace roughkin {

struct Scenario {
  std::string model = "burgers";
  ModelParams params;
  /// time | smooth:<linear2|quadratic|sine> | brownian | file:<RKRP1 dump>
  std::string driver = "time";
  double eps = 1.0 / 64.0;
  std::size_t nx = 64;
  std::size_t nxi = 64;
  double xi_max = 2.0;
  double torus = 1.0;
  double dt = 1.0 / 256.0;
  double t_end = 0.25;
  std::size_t stride = 1;
  std::size_t substeps = 16;
  double p = 2.5;
  /// riemann:uL,uR[,jump] | sine:mean,amp | constant:v
  std::string initial = "riemann:1,0";
  std::string initial2;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::size_t n_paths = 1;
  bool residual = false;
  std::string residual_form = "bgk";
  TestFunction test{0.5, 0.25, 0.5, 0.4};
  double flow_target = 0.05;
  bool check_indicator = true;
  /// Convergence ladder of dx values; dt, eps and dξ follow the ratios when
  /// those are positive and stay fixed otherwise.
  std::vector<double> ladder;
  double eps_ratio = 0.0;
  double dt_ratio = 0.0;
  double dxi_ratio = 0.0;

  std::size_t n_steps() const;
  bool stochastic() const;
};

/// key = value lines, '#' comments. Unknown keys are a Config error.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& file);
void apply_override(Scenario& scn, const std::string& assignment);
void set_value(Scenario& scn, const std::string& key, const std::string& value);
void validate_scenario(const Scenario& scn);
/// Accepts plain decimals and fractions such as 1/256.
double parse_number(const std::string& text);

FluxModel scenario_model(const Scenario& scn);
PhaseGrid scenario_grid(const Scenario& scn);
std::function<double(double)> initial_profile(const std::string& spec, double torus);
std::vector<double> sample_initial(const std::string& spec, const PhaseGrid& grid);

/// Driver data for one path: z (dimension M) and, with forcing, the joint
/// lift of (z, W) plus the W increments per step.
struct Realization {
  GeometricRoughPath z;
  std::optional<GeometricRoughPath> joint;
  std::vector<double> w_increments;

  const GeometricRoughPath& forced() const { return joint ? *joint : z; }
};

/// z uses stream 1 and W stream 2 of derive_seed(seed, stream, path).
Realization build_realization(const Scenario& scn, const FluxModel& model, std::size_t path_index);
/// Value of a smooth driver at time t (time or smooth:<name>).
std::function<double(double)> smooth_driver(const std::string& driver);

struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct DiagnosticsRecord {
  std::vector<StepDiagnostics> rows;
  std::vector<double> residuals;
  std::vector<InvariantCheck> checks;
  double measure_total = 0.0;

  bool ok() const;
  void add(const std::string& name, double value, double tolerance);
};

struct RunResult {
  Scenario scenario;
  CoefficientReport coefficients;
  Trajectory trajectory;
  WeakFormTerms weak;
  DiagnosticsRecord diagnostics;
};

/// One path (index 0). Every module invariant is recorded as a check;
/// failures are reported, not thrown, so the caller can print them.
RunResult run_scenario(const Scenario& scn);
void write_artifacts(const RunResult& run, const std::filesystem::path& dir);

/// ‖(u1 - u2)^+‖_{L¹} as an exact cell sum.
double contraction_metric(std::span<const double> u1, std::span<const double> u2, double dx);

struct EnsembleSummary {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t n_paths = 0;
  double tolerance_floor = 0.0;
  bool nonincreasing = true;
  /// E sup ‖u‖²_{L¹} / (E‖u0‖²_{L¹} + E‖u0‖⁴_{L²}) for the first datum.
  double energy_ratio = 0.0;
  double max_indicator_defect = 0.0;
  double min_slab = 0.0;
};

EnsembleSummary ensemble_contraction(const Scenario& scn);

struct StudyRow {
  double dx = 0.0;
  std::size_t nx = 0;
  std::size_t nxi = 0;
  double dt = 0.0;
  double eps = 0.0;
  double l1_error = 0.0;
  double residual = 0.0;
  double measure_total = 0.0;
  double seconds = 0.0;
};

struct StudyTable {
  std::vector<StudyRow> rows;
  /// log2 ratios of consecutive errors over log2 ratios of dx.
  std::vector<double> orders;
  bool errors_decreasing = true;
  bool residuals_decreasing = true;
};

/// Runs the scenario at every ladder level and compares the density at t_end
/// against the exact Burgers two-jump solution (Riemann data), exact
/// translation (linear transport) or a fine Godunov run.
StudyTable convergence_study(const Scenario& scn);

std::vector<double> reference_density(const Scenario& scn, const PhaseGrid& grid);

void write_ensemble_csv(const std::filesystem::path& file, const EnsembleSummary& summary);
void write_study_csv(const std::filesystem::path& file, const StudyTable& table);

}  // namespace roughkin
