#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roughkin/characteristics.hpp"
#include "roughkin/coefficients.hpp"
#include "roughkin/grid.hpp"
#include "roughkin/rough_path.hpp"

namespace roughkin {

/// χ_α(ξ) = 1_{0<ξ<α} - 1_{α<ξ<0}.
int chi(double alpha, double xi) noexcept;

/// Cell averages of 1_{u_i > ξ}; throws OutOfBox unless |u| <= xi_max - dξ.
std::vector<double> equilibrium_values(const PhaseGrid& grid, std::span<const double> u);
/// Cell averages of 1_{0 > ξ}.
std::vector<double> indicator_below_zero(const PhaseGrid& grid);
/// u_i = Σ_j (F_ij - 1_{0>ξ}) dξ against the cell-averaged indicator.
std::vector<double> density(const PhaseGrid& grid, std::span<const double> F);

struct KineticState {
  double t = 0.0;
  PhaseGrid grid;
  std::vector<double> F;
  std::vector<double> u;
};

KineticState equilibrium(const PhaseGrid& grid, std::span<const double> u, double t = 0.0);

/// Largest amount by which F leaves [0, 1]; zero for a valid state.
double max_principle_defect(std::span<const double> F) noexcept;

/// Throws Invariant when F leaves [0,1], boundary cells are not within 1e-6
/// of 1 (bottom) and 0 (top), or the cached density is stale.
void check_state(const KineticState& state);

/// New F at each node is the bilinear interpolant of the old F at ψ(node),
/// periodic in x, extended by 1 below and 0 above the ξ box.
KineticState transport_apply(const KineticState& state, const FlowField& psi);
std::vector<double> transport_values(const PhaseGrid& grid, std::span<const double> F, const FlowField& psi);

/// m^ε integrated over one step: ξ-cumulative sums of (1_{u>ξ} - F)(1 - e^{-dt/ε})
/// at the nxi + 1 cell edges of every x cell.
struct MeasureSlab {
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t nx = 0;
  std::size_t nxi = 0;
  std::vector<double> values;
  /// Σ values dξ dx.
  double mass = 0.0;
  /// Smallest value before clipping.
  double min_raw = 0.0;

  double at(std::size_t i, std::size_t edge) const noexcept { return values[i * (nxi + 1) + edge]; }
};

struct BgkOptions {
  double tol_fp = 1e-12;
  std::size_t max_fp_iterations = 8;
};

struct BgkStepResult {
  KineticState state;
  MeasureSlab slab;
  std::size_t fixed_point_iterations = 0;
};

/// F^{n+1} = S[e F^n + (1 - e) 1_{u_mid > ξ}] with e = exp(-dt/ε).
BgkStepResult bgk_step(const KineticState& state, const FlowField& psi, double eps, double dt,
                       const BgkOptions& opts = {});

struct StepDiagnostics {
  double t = 0.0;
  double mass = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double measure_mass = 0.0;
  double maxprin_defect = 0.0;
  double jac_defect = 0.0;
  double indicator_defect = 0.0;
  double min_slab = 0.0;
};

struct Trajectory {
  /// States at every `stride`-th step including the first and last, or at
  /// every step when keep_all is set.
  std::vector<KineticState> states;
  std::vector<MeasureSlab> slabs;
  std::vector<StepDiagnostics> rows;
  double measure_total = 0.0;
  double max_indicator_defect = 0.0;
  double max_jacobian_defect = 0.0;
  double max_maxprin_defect = 0.0;
  double min_slab = 0.0;
};

struct SolveOptions {
  double eps = 1e-2;
  std::size_t stride = 1;
  bool keep_all = false;
  bool keep_slabs = false;
  /// Also transports 1_{0>ξ} every step and records ‖S 1_{0>ξ} - 1_{0>ξ}‖_{L¹}.
  bool check_indicator = false;
  FlowOptions flow;
  BgkOptions bgk;
};

/// Marches bgk_step along every interval of `rp` (dimension fields.columns).
/// All initial states share each step's ψ, so coupled runs see the same
/// driver. Steps with e^{-dt/ε} < 0.1 are cut into log-linear pieces.
std::vector<Trajectory> duhamel_solve(std::span<const KineticState> initial, const FieldBundle& fields,
                                      const GeometricRoughPath& rp, const SolveOptions& opts);

double kinetic_measure_total(std::span<const MeasureSlab> slabs) noexcept;

/// Periodic-in-x product bump (1 - s²)³ in both variables.
struct TestFunction {
  double x_center = 0.5;
  double x_radius = 0.25;
  double xi_center = 0.0;
  double xi_radius = 0.5;

  double operator()(double x, double xi, double torus) const noexcept;
};

enum class WeakForm { Bgk, Kinetic };

struct WeakFormTerms {
  double lhs = 0.0;
  double ito = 0.0;
  double diffusion = 0.0;
  /// -(1/ε)∫α⟨1_{u>ξ} - F, φ(θ)⟩ (BGK form) or m(α ∂_ξ φ(θ)) (kinetic form).
  double relaxation = 0.0;
  /// lhs - ito - diffusion - relaxation
  double residual = 0.0;
  /// The same combination summed over steps 0..n, one entry per state.
  std::vector<double> running;
};

/// Discrete weak formulation with α(t) = (1 - t/T)² on a trajectory kept at
/// every step. `unforced` and `z` define θ; `w_increments` holds the K
/// forcing increments of each step (row-major). Slabs are required for the
/// kinetic form.
WeakFormTerms weak_form_residual(const Trajectory& traj, const FluxModel& model, const FieldBundle& unforced,
                                 const GeometricRoughPath& z, std::span<const double> w_increments,
                                 const TestFunction& phi, double eps, WeakForm form,
                                 const FlowOptions& flow = {});

}  // namespace roughkin
