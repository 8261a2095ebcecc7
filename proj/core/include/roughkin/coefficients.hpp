#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "roughkin/fields.hpp"

namespace roughkin {

/// Value and derivatives up to order two of a scalar function of (x, ξ).
struct ScalarJet {
  double v = 0.0;
  double dx = 0.0;
  double dxi = 0.0;
  double dxx = 0.0;
  double dxxi = 0.0;
  double dxixi = 0.0;
};

/// Coefficients of a one-dimensional flux A(x, ξ) ∈ R^{1×M} driven by M rough
/// components, with K Brownian forcing coefficients g_k(x, ξ).
/// a_j = ∂_ξ A_j, b_j = ∂_x A_j; all closures must be pure.
struct FluxModel {
  std::string name;
  std::size_t M = 1;
  std::size_t K = 0;
  std::function<double(double x, double xi, std::size_t j)> flux;
  std::function<ScalarJet(double x, double xi, std::size_t j)> a;
  std::function<ScalarJet(double x, double xi, std::size_t j)> b;
  std::function<ScalarJet(double x, double xi, std::size_t k)> g;
  /// True when A does not depend on x (reference solvers apply).
  bool x_independent = false;

  double gsq(double x, double xi) const;
  double dgsq_dxi(double x, double xi) const;
};

struct ModelParams {
  double c_amp = 0.5;
  double c_period = 6.283185307179586;
  double velocity = 1.0;
  /// Adds g = λξ forcing (K = 1) when set and nonzero.
  std::optional<double> lambda;
};

/// Built-in registry: burgers, modulated_burgers, linear_transport,
/// linear_multiplicative_noise.
FluxModel make_model(const std::string& name, const ModelParams& params = {});

struct Box {
  double x0 = 0.0;
  double x1 = 1.0;
  double xi0 = -1.0;
  double xi1 = 1.0;
};

struct CoefficientBounds {
  double a = 0.0, b = 0.0, g = 0.0;
  double da = 0.0, db = 0.0, dg = 0.0;
  double d2a = 0.0, d2b = 0.0, d2g = 0.0;
};

struct CoefficientReport {
  double null_condition_defect = 0.0;
  /// Largest relative mismatch between analytic derivatives and central
  /// differences at step 1e-5.
  double derivative_defect = 0.0;
  /// max |∂_x a_j - ∂_ξ b_j|, zero for a flux of the form a = ∂_ξA, b = ∂_xA.
  double divergence_defect = 0.0;
  CoefficientBounds bounds;
};

/// Samples the model on an n_samples x n_samples lattice of the box.
/// Throws NullCondition when max |b(x,0)|, |g(x,0)| exceeds 1e-9.
CoefficientReport validate(const FluxModel& model, const Box& box, std::size_t n_samples);

struct CharacteristicFields {
  /// Columns (dz^1..dz^M, dW^1..dW^K) plus the drift (0, -¼ ∂_ξ G²).
  FieldBundle forced;
  /// Columns dz^1..dz^M only.
  FieldBundle unforced;
};

CharacteristicFields assemble_characteristic_fields(const FluxModel& model);

}  // namespace roughkin
