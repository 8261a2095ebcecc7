#include "roughkin/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughkin/error.hpp"

namespace roughkin {

namespace {

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }

double step_norm(const BundleEval& ev, const DriverIncrement& inc) {
  double sigma = 0.0;
  for (const ColumnJet& c : ev.columns) sigma = std::max(sigma, norm2(c.v));
  return sigma * inc.homogeneous_norm() + norm2(ev.drift.v) * std::abs(inc.dt);
}

double max_abs(const Mat2& m) {
  return std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2]), std::abs(m[3])});
}

// Substep selection also scales with the field derivatives, which control the
// error of the first variation and hence of the Jacobian.
double selection_norm(const BundleEval& ev, const DriverIncrement& inc) {
  double sigma = 0.0;
  for (const ColumnJet& c : ev.columns) sigma = std::max({sigma, norm2(c.v), max_abs(c.dv)});
  return sigma * inc.homogeneous_norm() + std::max(norm2(ev.drift.v), max_abs(ev.drift.dv)) * std::abs(inc.dt);
}

// Log-linear pieces of one increment at depths 0, 1, ..., built on demand and
// shared by every point integrated along the same increments.
class PieceLadder {
 public:
  explicit PieceLadder(const DriverIncrement& inc) : inc_(&inc) {}

  const DriverIncrement& at(std::size_t depth) {
    while (pieces_.size() <= depth) pieces_.push_back(inc_->piece(std::size_t{1} << pieces_.size()));
    return pieces_[depth];
  }

 private:
  const DriverIncrement* inc_;
  std::vector<DriverIncrement> pieces_;
};

std::vector<PieceLadder> make_ladders(std::span<const DriverIncrement> increments, std::size_t columns) {
  std::vector<PieceLadder> ladders;
  ladders.reserve(increments.size());
  for (const DriverIncrement& inc : increments) {
    require(inc.dim == columns, ErrorKind::GridMismatch, "driver dimension does not match fields");
    ladders.emplace_back(inc);
  }
  return ladders;
}

RdeState integrate_ladders(const FieldBundle& fields, std::vector<PieceLadder>& ladders, RdeState state,
                           const FlowOptions& opts, BundleEval& ev) {
  state.has_variation = opts.first_variation;
  for (PieceLadder& ladder : ladders) {
    fields.evaluate(state.y, false, ev);
    std::size_t depth = 0;
    while (depth < opts.max_depth && selection_norm(ev, ladder.at(depth)) > opts.substep_target) ++depth;
    for (;;) {
      const std::size_t n = std::size_t{1} << depth;
      const DriverIncrement& piece = ladder.at(depth);
      try {
        RdeState trial = state;
        for (std::size_t r = 0; r < n; ++r) trial = rde_step(trial, fields, piece, ev);
        state = trial;
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepSize || depth >= opts.max_depth) throw;
        ++depth;
      }
    }
  }
  return state;
}

}  // namespace

RdeState rde_step(const RdeState& state, const FieldBundle& fields, const DriverIncrement& inc) {
  BundleEval scratch;
  return rde_step(state, fields, inc, scratch);
}

RdeState rde_step(const RdeState& state, const FieldBundle& fields, const DriverIncrement& inc,
                  BundleEval& ev) {
  if (inc.dim != fields.columns)
    throw Error(ErrorKind::GridMismatch, "driver dimension " + std::to_string(inc.dim) + " does not match " +
                                             std::to_string(fields.columns) + " field columns");
  fields.evaluate(state.y, state.has_variation, ev);
  const double norm = step_norm(ev, inc);
  if (norm > 0.5) throw Error(ErrorKind::StepSize, "step norm " + std::to_string(norm) + " exceeds 0.5");

  const std::size_t d = inc.dim;
  RdeState out = state;
  Vec2 y = state.y;
  Mat2 step = kIdentity2;
  if (fields.has_drift) {
    for (int k = 0; k < 2; ++k) y[k] += ev.drift.v[k] * inc.dt;
    for (int e = 0; e < 4; ++e) step[e] += ev.drift.dv[e] * inc.dt;
  }
  for (std::size_t i = 0; i < d; ++i) {
    const ColumnJet& vi = ev.columns[i];
    const double x1 = inc.level1[i];
    if (x1 != 0.0) {
      for (int k = 0; k < 2; ++k) y[k] += vi.v[k] * x1;
      for (int e = 0; e < 4; ++e) step[e] += vi.dv[e] * x1;
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double x2 = inc.level2[i * d + j];
      if (x2 == 0.0) continue;
      const ColumnJet& vj = ev.columns[j];
      // (DV_j V_i)^k = Σ_m ∂_m V_j^k V_i^m
      for (int k = 0; k < 2; ++k) y[k] += (vj.dv[k * 2] * vi.v[0] + vj.dv[k * 2 + 1] * vi.v[1]) * x2;
      if (state.has_variation) {
        // ∂_l of the above: Σ_m ∂_l∂_m V_j^k V_i^m + Σ_m ∂_m V_j^k ∂_l V_i^m
        for (int k = 0; k < 2; ++k) {
          for (int l = 0; l < 2; ++l) {
            const double hess = vj.d2v[l][k * 2] * vi.v[0] + vj.d2v[l][k * 2 + 1] * vi.v[1];
            const double prod = vj.dv[k * 2] * vi.dv[l] + vj.dv[k * 2 + 1] * vi.dv[2 + l];
            step[k * 2 + l] += (hess + prod) * x2;
          }
        }
      }
    }
  }
  if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
    throw Error(ErrorKind::NonFinite, "characteristic left finite range");
  out.y = y;
  if (state.has_variation) out.variation = matmul(step, state.variation);
  return out;
}

std::vector<DriverIncrement> path_increments(const GeometricRoughPath& rp, double s, double t,
                                             bool reversed) {
  require(s <= t, ErrorKind::InvalidArgument, "flow interval requires s <= t");
  const std::size_t ks = rp.grid().index_of(s);
  const std::size_t kt = rp.grid().index_of(t);
  std::vector<DriverIncrement> out;
  out.reserve(kt - ks);
  if (reversed) {
    for (std::size_t k = kt; k > ks; --k) out.push_back(rp.increment(k - 1).reversed());
  } else {
    for (std::size_t k = ks; k < kt; ++k) out.push_back(rp.increment(k));
  }
  return out;
}

RdeState integrate_point(const FieldBundle& fields, std::span<const DriverIncrement> increments,
                         RdeState state, const FlowOptions& opts) {
  auto ladders = make_ladders(increments, fields.columns);
  BundleEval ev;
  return integrate_ladders(fields, ladders, state, opts, ev);
}

double FlowField::max_jacobian_defect() const noexcept {
  double m = 0.0;
  for (std::size_t n = 0; n < variation.size(); ++n) m = std::max(m, std::abs(jac(n) - 1.0));
  return m;
}

double FlowField::max_displacement() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.nxi(); ++j) {
      const Vec2& y = maps[grid.index(i, j)];
      m = std::max({m, std::abs(y[0] - grid.x(i)), std::abs(y[1] - grid.xi(j))});
    }
  }
  return m;
}

FlowField flow_from_increments(const FieldBundle& fields, std::span<const DriverIncrement> increments,
                               double s, double t, const PhaseGrid& grid, const FlowOptions& opts) {
  FlowField flow{s, t, grid, {}, {}};
  flow.maps.resize(grid.size());
  flow.variation.resize(grid.size());
  auto ladders = make_ladders(increments, fields.columns);
  BundleEval ev;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.nxi(); ++j) {
      RdeState start;
      start.y = {grid.x(i), grid.xi(j)};
      const RdeState end = integrate_ladders(fields, ladders, start, opts, ev);
      flow.maps[grid.index(i, j)] = end.y;
      flow.variation[grid.index(i, j)] = end.variation;
    }
  }
  return flow;
}

FlowField forward_flow(const FieldBundle& fields, const GeometricRoughPath& rp, double s, double t,
                       const PhaseGrid& grid, const FlowOptions& opts) {
  const auto incs = path_increments(rp, s, t, false);
  return flow_from_increments(fields, incs, s, t, grid, opts);
}

FlowField inverse_flow(const FieldBundle& fields, const GeometricRoughPath& rp, double s, double t,
                       const PhaseGrid& grid, const FlowOptions& opts) {
  const auto incs = path_increments(rp, s, t, true);
  return flow_from_increments(fields, incs, s, t, grid, opts);
}

double sign_preservation_check(const FlowField& flow) {
  double worst = 0.0;
  for (std::size_t i = 0; i < flow.grid.nx(); ++i) {
    for (std::size_t j = 0; j < flow.grid.nxi(); ++j) {
      const double seed = flow.grid.xi(j);
      const double image = flow.maps[flow.grid.index(i, j)][1];
      double v = 0.0;
      if (seed > 0.0 && image < 0.0) v = -image;
      else if (seed < 0.0 && image > 0.0) v = image;
      else if (seed == 0.0) v = std::abs(image);
      worst = std::max(worst, v);
    }
  }
  return worst;
}

double inverse_composition_defect(const FieldBundle& fields, const GeometricRoughPath& rp, double s,
                                  double t, const PhaseGrid& grid, const FlowOptions& opts) {
  const auto fwd = path_increments(rp, s, t, false);
  const auto bwd = path_increments(rp, s, t, true);
  auto fwd_ladders = make_ladders(fwd, fields.columns);
  auto bwd_ladders = make_ladders(bwd, fields.columns);
  FlowOptions o = opts;
  o.first_variation = false;
  BundleEval ev;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.nxi(); ++j) {
      RdeState start;
      start.y = {grid.x(i), grid.xi(j)};
      const RdeState mid = integrate_ladders(fields, fwd_ladders, start, o, ev);
      const RdeState back = integrate_ladders(fields, bwd_ladders, mid, o, ev);
      worst = std::max({worst, std::abs(back.y[0] - start.y[0]), std::abs(back.y[1] - start.y[1])});
    }
  }
  return worst;
}

}  // namespace roughkin
