#include <algorithm>
#include <cmath>

#include "roughkin/error.hpp"
#include "roughkin/kinetic.hpp"

namespace roughkin {

double TestFunction::operator()(double x, double xi, double torus) const noexcept {
  double d = x - x_center;
  d -= torus * std::round(d / torus);
  const double sx = d / x_radius;
  const double sz = (xi - xi_center) / xi_radius;
  if (std::abs(sx) >= 1.0 || std::abs(sz) >= 1.0) return 0.0;
  const double bx = 1.0 - sx * sx;
  const double bz = 1.0 - sz * sz;
  return bx * bx * bx * bz * bz * bz;
}

WeakFormTerms weak_form_residual(const Trajectory& traj, const FluxModel& model, const FieldBundle& unforced,
                                 const GeometricRoughPath& z, std::span<const double> w_increments,
                                 const TestFunction& phi, double eps, WeakForm form, const FlowOptions& flow) {
  const std::size_t n_steps = z.n_steps();
  require(traj.states.size() == n_steps + 1, ErrorKind::InvalidArgument,
          "weak residual needs the state at every step");
  require(w_increments.size() == n_steps * model.K, ErrorKind::GridMismatch,
          "forcing increments do not match the step count");
  require(form == WeakForm::Bgk || traj.slabs.size() == n_steps, ErrorKind::InvalidArgument,
          "kinetic form needs every measure slab");
  require(eps > 0.0, ErrorKind::InvalidArgument, "eps must be positive");
  const PhaseGrid& g = traj.states.front().grid;
  require(phi.x_radius > 0.0 && phi.xi_radius > 0.0 && 2.0 * phi.x_radius <= g.torus_length() &&
              phi.xi_center - phi.xi_radius >= -g.xi_max() && phi.xi_center + phi.xi_radius <= g.xi_max(),
          ErrorKind::SupportViolation, "test function support must lie inside the grid box");

  const double t0 = z.grid().t0();
  const double T = z.grid().t1() - t0;
  const double dt = z.grid().step();
  const double w = -std::expm1(-dt / eps);
  const double cell = g.dx() * g.dxi();
  auto alpha = [&](std::size_t n) {
    const double s = 1.0 - (z.grid().node(n) - t0) / T;
    return s * s;
  };

  FlowOptions o = flow;
  o.first_variation = false;
  WeakFormTerms terms;
  std::vector<double> Phi(g.size());
  for (std::size_t n = 0; n <= n_steps; ++n) {
    const KineticState& s = traj.states[n];
    if (n == 0) {
      for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nxi(); ++j) Phi[g.index(i, j)] = phi(g.x(i), g.xi(j), g.torus_length());
    } else {
      const FlowField theta = inverse_flow(unforced, z, t0, z.grid().node(n), g, o);
      for (std::size_t m = 0; m < g.size(); ++m) Phi[m] = phi(theta.maps[m][0], theta.maps[m][1], g.torus_length());
    }
    double pair = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) pair += s.F[m] * Phi[m];
    pair *= cell;
    if (n == 0) terms.lhs += pair * alpha(0);
    if (n == n_steps) {
      terms.running.push_back(terms.lhs - terms.ito - terms.diffusion - terms.relaxation);
      break;
    }
    terms.lhs += pair * (alpha(n + 1) - alpha(n));

    const double a = alpha(n);
    double ito = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double x = g.x(i);
      for (std::size_t e = 1; e < g.nxi(); ++e) {
        const std::size_t lo = g.index(i, e - 1);
        const std::size_t hi = g.index(i, e);
        const double dF = s.F[hi] - s.F[lo];
        if (dF == 0.0) continue;
        for (std::size_t k = 0; k < model.K; ++k) {
          const double gphi = 0.5 * (model.g(x, g.xi(e - 1), k).v * Phi[lo] + model.g(x, g.xi(e), k).v * Phi[hi]);
          ito += dF * gphi * w_increments[n * model.K + k];
        }
        if (model.K > 0) diff += model.gsq(x, g.xi_edge(e)) * dF * (Phi[hi] - Phi[lo]) / g.dxi();
      }
    }
    terms.ito += a * ito * g.dx();
    terms.diffusion += a * 0.5 * dt * diff * g.dx();

    double relax = 0.0;
    if (form == WeakForm::Bgk) {
      const auto eq = equilibrium_values(g, s.u);
      for (std::size_t m = 0; m < g.size(); ++m) relax += (eq[m] - s.F[m]) * Phi[m];
      relax = -w * relax * cell;
    } else {
      const MeasureSlab& slab = traj.slabs[n];
      for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t e = 1; e < g.nxi(); ++e)
          relax += slab.at(i, e) * (Phi[g.index(i, e)] - Phi[g.index(i, e - 1)]);
      relax *= g.dx();
    }
    terms.relaxation += a * relax;
    terms.running.push_back(terms.lhs - terms.ito - terms.diffusion - terms.relaxation);
  }
  terms.residual = terms.lhs - terms.ito - terms.diffusion - terms.relaxation;
  return terms;
}

}  // namespace roughkin
