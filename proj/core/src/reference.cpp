#include "roughkin/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughkin/error.hpp"

namespace roughkin {

double exact_riemann_burgers(double u_left, double u_right, double x, double t) {
  require(t > 0.0, ErrorKind::InvalidArgument, "Riemann solution needs t > 0");
  const double s = x / t;
  if (u_left > u_right) {
    const double speed = 0.5 * (u_left + u_right);
    return s < speed ? u_left : u_right;
  }
  if (s <= u_left) return u_left;
  if (s >= u_right) return u_right;
  return s;
}

double exact_two_jump_burgers(double u_in, double u_out, double a, double b, double torus, double x,
                              double t) {
  require(torus > 0.0 && a < b && b - a < torus, ErrorKind::InvalidArgument, "bad two-jump layout");
  const double gap = std::min(b - a, torus - (b - a));
  require(t * std::max(std::abs(u_in), std::abs(u_out)) <= 0.5 * gap * (1.0 + 1e-12), ErrorKind::InvalidArgument,
          "waves of the two jumps have met");
  auto wrap = [torus](double d) { return d - torus * std::round(d / torus); };
  const double da = wrap(x - a);
  const double db = wrap(x - b);
  if (t == 0.0) {
    const double rel = x - a - torus * std::floor((x - a) / torus);
    return rel < b - a ? u_in : u_out;
  }
  if (std::abs(da) <= std::abs(db)) return exact_riemann_burgers(u_out, u_in, da, t);
  return exact_riemann_burgers(u_in, u_out, db, t);
}

ConvexFlux burgers_flux() {
  return {[](double u) { return 0.5 * u * u; }, [](double u) { return u; }, 0.0};
}

ConvexFlux linear_flux(double velocity) {
  // Linear fluxes are convex with a minimiser at -inf or +inf.
  const double sonic = velocity >= 0.0 ? -1e300 : 1e300;
  return {[velocity](double u) { return velocity * u; }, [velocity](double) { return velocity; }, sonic};
}

void check_convex(const ConvexFlux& flux, double lo, double hi, std::size_t samples) {
  double prev = flux.df(lo);
  for (std::size_t k = 1; k <= samples; ++k) {
    const double u = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples);
    const double d = flux.df(u);
    require(d >= prev - 1e-12, ErrorKind::InvalidArgument, "flux is not convex on the data range");
    prev = d;
  }
}

double godunov_flux(const ConvexFlux& flux, double u_left, double u_right) {
  if (u_left <= u_right) return flux.f(std::clamp(flux.sonic, u_left, u_right));
  return std::max(flux.f(u_left), flux.f(u_right));
}

std::vector<double> godunov_step(std::span<const double> u, const ConvexFlux& flux, double dt, double dx) {
  const std::size_t n = u.size();
  require(n >= 2 && dt > 0.0 && dx > 0.0, ErrorKind::InvalidArgument, "bad Godunov step arguments");
  double speed = 0.0;
  for (double v : u) speed = std::max(speed, std::abs(flux.df(v)));
  require(dt * speed <= dx * (1.0 + 1e-12), ErrorKind::Cfl,
          "dt * max|f'| = " + std::to_string(dt * speed) + " exceeds dx = " + std::to_string(dx));
  std::vector<double> face(n);
  for (std::size_t i = 0; i < n; ++i) face[i] = godunov_flux(flux, u[i], u[(i + 1) % n]);
  std::vector<double> out(n);
  const double r = dt / dx;
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] - r * (face[i] - face[(i + n - 1) % n]);
  return out;
}

std::vector<double> godunov_solve(std::span<const double> u0, const ConvexFlux& flux, double dx, double t_end,
                                  double cfl) {
  require(t_end >= 0.0 && cfl > 0.0 && cfl <= 1.0, ErrorKind::InvalidArgument, "bad Godunov solve arguments");
  std::vector<double> u(u0.begin(), u0.end());
  if (t_end == 0.0) return u;
  double speed = 0.0;
  for (double v : u) speed = std::max(speed, std::abs(flux.df(v)));
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end * speed / (cfl * dx))));
  const double dt = t_end / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) u = godunov_step(u, flux, dt, dx);
  return u;
}

std::vector<double> time_change_solve(std::span<const double> u0, const ConvexFlux& flux, double dx,
                                      const std::function<double(double)>& z, double t,
                                      std::size_t monotone_samples) {
  require(t >= 0.0 && monotone_samples >= 1, ErrorKind::InvalidArgument, "bad time-change arguments");
  double prev = z(0.0);
  for (std::size_t k = 1; k <= monotone_samples && t > 0.0; ++k) {
    const double v = z(t * static_cast<double>(k) / static_cast<double>(monotone_samples));
    require(v > prev, ErrorKind::NonMonotone, "driver is not strictly increasing");
    prev = v;
  }
  return godunov_solve(u0, flux, dx, z(t) - z(0.0));
}

}  // namespace roughkin
