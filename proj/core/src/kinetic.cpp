#include "roughkin/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughkin/error.hpp"

namespace roughkin {

int chi(double alpha, double xi) noexcept {
  if (0.0 < xi && xi < alpha) return 1;
  if (alpha < xi && xi < 0.0) return -1;
  return 0;
}

std::vector<double> equilibrium_values(const PhaseGrid& grid, std::span<const double> u) {
  require(u.size() == grid.nx(), ErrorKind::GridMismatch, "density size does not match grid");
  const double dxi = grid.dxi();
  const double limit = grid.xi_max() - dxi;
  std::vector<double> F(grid.size());
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    require(std::isfinite(u[i]), ErrorKind::NonFinite, "density is not finite");
    require(std::abs(u[i]) <= limit * (1.0 + 1e-12), ErrorKind::OutOfBox,
            "density " + std::to_string(u[i]) + " leaves the xi box (limit " + std::to_string(limit) + ")");
    for (std::size_t j = 0; j < grid.nxi(); ++j)
      F[grid.index(i, j)] = std::clamp((u[i] - grid.xi_edge(j)) / dxi, 0.0, 1.0);
  }
  return F;
}

std::vector<double> indicator_below_zero(const PhaseGrid& grid) {
  std::vector<double> H(grid.size());
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nxi(); ++j)
      H[grid.index(i, j)] = std::clamp(-grid.xi_edge(j) / grid.dxi(), 0.0, 1.0);
  return H;
}

std::vector<double> density(const PhaseGrid& grid, std::span<const double> F) {
  require(F.size() == grid.size(), ErrorKind::GridMismatch, "kinetic array does not match grid");
  std::vector<double> h(grid.nxi());
  for (std::size_t j = 0; j < grid.nxi(); ++j) h[j] = std::clamp(-grid.xi_edge(j) / grid.dxi(), 0.0, 1.0);
  std::vector<double> u(grid.nx());
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.nxi(); ++j) s += F[grid.index(i, j)] - h[j];
    u[i] = s * grid.dxi();
  }
  return u;
}

KineticState equilibrium(const PhaseGrid& grid, std::span<const double> u, double t) {
  KineticState s{t, grid, equilibrium_values(grid, u), {}};
  s.u = density(grid, s.F);
  return s;
}

double max_principle_defect(std::span<const double> F) noexcept {
  double d = 0.0;
  for (double v : F) {
    if (!(v >= 0.0 && v <= 1.0)) d = std::max(d, std::isfinite(v) ? std::max(-v, v - 1.0) : 1.0);
  }
  return d;
}

void check_state(const KineticState& state) {
  const PhaseGrid& g = state.grid;
  require(state.F.size() == g.size() && state.u.size() == g.nx(), ErrorKind::GridMismatch,
          "kinetic state arrays do not match grid");
  const double mp = max_principle_defect(state.F);
  require(mp == 0.0, ErrorKind::Invariant, "F leaves [0,1] by " + std::to_string(mp));
  for (std::size_t i = 0; i < g.nx(); ++i) {
    require(state.F[g.index(i, 0)] >= 1.0 - 1e-6 && state.F[g.index(i, g.nxi() - 1)] <= 1e-6,
            ErrorKind::Invariant, "boundary cells of the xi box are not saturated; increase xi_max");
  }
  const auto u = density(g, state.F);
  for (std::size_t i = 0; i < g.nx(); ++i)
    require(std::abs(u[i] - state.u[i]) <= 1e-12 * (1.0 + std::abs(u[i])), ErrorKind::Invariant,
            "cached density is stale");
}

std::vector<double> transport_values(const PhaseGrid& grid, std::span<const double> F, const FlowField& psi) {
  require(psi.grid == grid && F.size() == grid.size(), ErrorKind::GridMismatch, "flow and state grids differ");
  const auto nx = static_cast<long>(grid.nx());
  const auto nxi = static_cast<long>(grid.nxi());
  const double dx = grid.dx();
  const double dxi = grid.dxi();
  auto value = [&](long i, long j) {
    if (j < 0) return 1.0;
    if (j >= nxi) return 0.0;
    return F[static_cast<std::size_t>(i * nxi + j)];
  };
  std::vector<double> out(grid.size());
  for (long i = 0; i < nx; ++i) {
    for (long j = 0; j < nxi; ++j) {
      const std::size_t n = static_cast<std::size_t>(i * nxi + j);
      const Vec2& foot = psi.maps[n];
      require(std::isfinite(foot[0]) && std::isfinite(foot[1]) && std::abs(foot[1]) <= 2.0 * grid.xi_max(),
              ErrorKind::Displacement, "characteristic foot point leaves the expanded box");
      const double p = static_cast<double>(i) + (foot[0] - grid.x(static_cast<std::size_t>(i))) / dx;
      const double q = static_cast<double>(j) + (foot[1] - grid.xi(static_cast<std::size_t>(j))) / dxi;
      const double pf = std::floor(p);
      const double qf = std::floor(q);
      const double wp = p - pf;
      const double wq = q - qf;
      long i0 = static_cast<long>(std::fmod(pf, static_cast<double>(nx)));
      if (i0 < 0) i0 += nx;
      const long i1 = (i0 + 1) % nx;
      const long j0 = static_cast<long>(qf);
      const double lo = std::lerp(value(i0, j0), value(i0, j0 + 1), wq);
      const double hi = std::lerp(value(i1, j0), value(i1, j0 + 1), wq);
      out[n] = std::lerp(lo, hi, wp);
    }
  }
  return out;
}

KineticState transport_apply(const KineticState& state, const FlowField& psi) {
  KineticState out{psi.t, state.grid, transport_values(state.grid, state.F, psi), {}};
  out.u = density(out.grid, out.F);
  return out;
}

BgkStepResult bgk_step(const KineticState& state, const FlowField& psi, double eps, double dt,
                       const BgkOptions& opts) {
  require(eps > 0.0 && dt > 0.0, ErrorKind::InvalidArgument, "bgk_step needs eps > 0 and dt > 0");
  const PhaseGrid& g = state.grid;
  const double e = std::exp(-dt / eps);
  const double w = -std::expm1(-dt / eps);

  std::vector<double> v = state.u;
  std::vector<double> eq;
  std::vector<double> mixed(g.size());
  std::size_t iters = 0;
  for (;;) {
    eq = equilibrium_values(g, v);
    for (std::size_t n = 0; n < g.size(); ++n) mixed[n] = std::lerp(eq[n], state.F[n], e);
    const auto next = density(g, mixed);
    double change = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) change += std::abs(next[i] - v[i]) * g.dx();
    ++iters;
    if (change <= opts.tol_fp) break;
    require(iters < opts.max_fp_iterations, ErrorKind::NonContraction,
            "inner fixed point did not converge, change " + std::to_string(change));
    v = next;
  }

  BgkStepResult res;
  MeasureSlab& slab = res.slab;
  slab.t0 = state.t;
  slab.t1 = psi.t;
  slab.nx = g.nx();
  slab.nxi = g.nxi();
  slab.values.assign(g.nx() * (g.nxi() + 1), 0.0);
  double min_raw = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    double s = 0.0;
    double* row = &slab.values[i * (g.nxi() + 1)];
    for (std::size_t j = 0; j < g.nxi(); ++j) {
      s += (eq[g.index(i, j)] - state.F[g.index(i, j)]) * w * g.dxi();
      row[j + 1] = s;
    }
    for (std::size_t k = 0; k <= g.nxi(); ++k) {
      min_raw = std::min(min_raw, row[k]);
      require(row[k] >= -1e-12, ErrorKind::NegativeMeasure,
              "kinetic measure value " + std::to_string(row[k]) + " below clip tolerance");
      row[k] = std::max(row[k], 0.0);
      mass += row[k];
    }
  }
  slab.mass = mass * g.dxi() * g.dx();
  slab.min_raw = min_raw;

  res.state = KineticState{psi.t, g, transport_values(g, mixed, psi), {}};
  res.state.u = density(g, res.state.F);
  res.fixed_point_iterations = iters;
  return res;
}

namespace {

void merge_slab(MeasureSlab& into, const MeasureSlab& from) {
  if (into.values.empty()) {
    into = from;
    return;
  }
  for (std::size_t n = 0; n < into.values.size(); ++n) into.values[n] += from.values[n];
  into.t1 = from.t1;
  into.mass += from.mass;
  into.min_raw = std::min(into.min_raw, from.min_raw);
}

StepDiagnostics norms(const KineticState& s) {
  StepDiagnostics d;
  d.t = s.t;
  const double dx = s.grid.dx();
  double l2 = 0.0;
  for (double v : s.u) {
    d.mass += v * dx;
    d.l1 += std::abs(v) * dx;
    l2 += v * v * dx;
  }
  d.l2 = std::sqrt(l2);
  d.maxprin_defect = max_principle_defect(s.F);
  return d;
}

}  // namespace

std::vector<Trajectory> duhamel_solve(std::span<const KineticState> initial, const FieldBundle& fields,
                                      const GeometricRoughPath& rp, const SolveOptions& opts) {
  require(!initial.empty(), ErrorKind::InvalidArgument, "duhamel_solve needs an initial state");
  require(opts.eps > 0.0 && opts.stride >= 1, ErrorKind::InvalidArgument, "eps > 0 and stride >= 1 required");
  require(rp.dim() == fields.columns, ErrorKind::GridMismatch, "driver dimension does not match fields");
  const PhaseGrid grid = initial.front().grid;
  for (const KineticState& s : initial) {
    require(s.grid == grid, ErrorKind::GridMismatch, "initial states live on different grids");
    check_state(s);
  }

  const std::size_t n_steps = rp.n_steps();
  const double dt = rp.grid().step();
  const double e = std::exp(-dt / opts.eps);
  std::size_t pieces = 1;
  if (e < 0.1) pieces = static_cast<std::size_t>(std::ceil(dt / (opts.eps * std::log(10.0))));
  const double sub_dt = dt / static_cast<double>(pieces);
  const std::vector<double> H = indicator_below_zero(grid);

  std::vector<Trajectory> out(initial.size());
  std::vector<KineticState> current(initial.begin(), initial.end());
  for (std::size_t r = 0; r < initial.size(); ++r) {
    current[r].t = rp.grid().t0();
    out[r].states.push_back(current[r]);
    out[r].rows.push_back(norms(current[r]));
  }

  double jac_since = 0.0;
  double indicator_since = 0.0;
  std::vector<double> min_slab_since(initial.size(), 0.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t0 = rp.grid().node(k);
    const DriverIncrement back = rp.increment(k).piece(pieces).reversed();
    // Autonomous fields: every piece of the step has the same inverse flow.
    const FlowField psi = flow_from_increments(fields, std::span<const DriverIncrement>(&back, 1), t0,
                                               t0 + sub_dt, grid, opts.flow);
    if (opts.flow.first_variation) jac_since = std::max(jac_since, psi.max_jacobian_defect());
    if (opts.check_indicator) {
      const auto moved = transport_values(grid, H, psi);
      double l1 = 0.0;
      for (std::size_t n = 0; n < H.size(); ++n) l1 += std::abs(moved[n] - H[n]);
      indicator_since = std::max(indicator_since, l1 * grid.dx() * grid.dxi());
    }
    for (std::size_t r = 0; r < current.size(); ++r) {
      MeasureSlab slab;
      for (std::size_t p = 0; p < pieces; ++p) {
        BgkStepResult step = bgk_step(current[r], psi, opts.eps, sub_dt, opts.bgk);
        merge_slab(slab, step.slab);
        current[r] = std::move(step.state);
      }
      current[r].t = rp.grid().node(k + 1);
      slab.t0 = t0;
      slab.t1 = current[r].t;
      Trajectory& tr = out[r];
      tr.measure_total += slab.mass;
      min_slab_since[r] = std::min(min_slab_since[r], slab.min_raw);
      tr.min_slab = std::min(tr.min_slab, slab.min_raw);
      const double mp = max_principle_defect(current[r].F);
      require(mp == 0.0, ErrorKind::Invariant, "maximum principle violated by " + std::to_string(mp));
      if (opts.keep_slabs) tr.slabs.push_back(std::move(slab));
    }
    const bool snapshot = opts.keep_all || (k + 1) % opts.stride == 0 || k + 1 == n_steps;
    for (std::size_t r = 0; r < current.size(); ++r) {
      Trajectory& tr = out[r];
      tr.max_jacobian_defect = std::max(tr.max_jacobian_defect, jac_since);
      tr.max_indicator_defect = std::max(tr.max_indicator_defect, indicator_since);
      if (!snapshot) continue;
      check_state(current[r]);
      StepDiagnostics row = norms(current[r]);
      row.measure_mass = tr.measure_total;
      row.jac_defect = jac_since;
      row.indicator_defect = indicator_since;
      row.min_slab = min_slab_since[r];
      tr.max_maxprin_defect = std::max(tr.max_maxprin_defect, row.maxprin_defect);
      tr.rows.push_back(row);
      tr.states.push_back(current[r]);
      min_slab_since[r] = 0.0;
    }
    if (snapshot) {
      jac_since = 0.0;
      indicator_since = 0.0;
    }
  }
  return out;
}

double kinetic_measure_total(std::span<const MeasureSlab> slabs) noexcept {
  double s = 0.0;
  for (const MeasureSlab& m : slabs) s += m.mass;
  return s;
}

}  // namespace roughkin
