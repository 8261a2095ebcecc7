#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roughkin/fields.hpp"
#include "roughkin/grid.hpp"
#include "roughkin/rough_path.hpp"

namespace roughkin {

struct RdeState {
  Vec2 y{};
  Mat2 variation = kIdentity2;
  bool has_variation = false;
};

/// One Davie step y + D dt + V_i x1_i + (DV_j V_i) x2_ij; the first variation
/// is propagated with the differentiated step when has_variation is set.
/// Throws StepSize when max_i|V_i| ‖x‖ + |D||dt| exceeds 0.5.
RdeState rde_step(const RdeState& state, const FieldBundle& fields, const DriverIncrement& inc);
RdeState rde_step(const RdeState& state, const FieldBundle& fields, const DriverIncrement& inc,
                  BundleEval& scratch);

struct FlowOptions {
  /// Each increment is cut into 2^d log-linear pieces until
  /// max_i max(|V_i|, |DV_i|) ‖x‖ + max(|D|, |DD|) |dt| is below this target.
  double substep_target = 0.05;
  std::size_t max_depth = 12;
  bool first_variation = true;
};

/// Increments of rp between grid times s <= t, or of its time reversal from t
/// back to s when `reversed` is set.
std::vector<DriverIncrement> path_increments(const GeometricRoughPath& rp, double s, double t,
                                             bool reversed);

RdeState integrate_point(const FieldBundle& fields, std::span<const DriverIncrement> increments,
                         RdeState start, const FlowOptions& opts = {});

/// Images of every phase-grid node under a flow. x is not wrapped.
struct FlowField {
  double s = 0.0;
  double t = 0.0;
  PhaseGrid grid;
  std::vector<Vec2> maps;
  std::vector<Mat2> variation;

  double jac(std::size_t n) const noexcept { return det(variation[n]); }
  /// ∂_ξ of the ξ-component of the map.
  double dxi(std::size_t n) const noexcept { return variation[n][3]; }
  double max_jacobian_defect() const noexcept;
  double max_displacement() const noexcept;
};

FlowField flow_from_increments(const FieldBundle& fields, std::span<const DriverIncrement> increments,
                               double s, double t, const PhaseGrid& grid, const FlowOptions& opts = {});

/// φ (forced bundle) or π (unforced bundle) over [s, t].
FlowField forward_flow(const FieldBundle& fields, const GeometricRoughPath& rp, double s, double t,
                       const PhaseGrid& grid, const FlowOptions& opts = {});

/// ψ or θ over [s, t]: the same bundle driven by the time-reversed path.
FlowField inverse_flow(const FieldBundle& fields, const GeometricRoughPath& rp, double s, double t,
                       const PhaseGrid& grid, const FlowOptions& opts = {});

/// max over nodes of how far the ξ-component of the map has the wrong sign
/// relative to the seed's ξ (0 when signs agree everywhere).
double sign_preservation_check(const FlowField& flow);

/// max over nodes of |inverse(forward(node)) - node|, both maps integrated
/// directly at the needed points.
double inverse_composition_defect(const FieldBundle& fields, const GeometricRoughPath& rp, double s,
                                  double t, const PhaseGrid& grid, const FlowOptions& opts = {});

}  // namespace roughkin
