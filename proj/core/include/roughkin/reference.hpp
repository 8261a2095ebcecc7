#pragma once

#include <functional>
#include <span>
#include <vector>

namespace roughkin {

/// Entropy solution of Burgers' equation for Riemann data (u_left, u_right)
/// jumping at x = 0; requires t > 0.
double exact_riemann_burgers(double u_left, double u_right, double x, double t);

/// Burgers on a torus with u = u_in on [a, b) and u_out elsewhere: each jump
/// evolves as its own Riemann problem. Valid while the waves have not met;
/// throws InvalidArgument otherwise.
double exact_two_jump_burgers(double u_in, double u_out, double a, double b, double torus, double x,
                              double t);

struct ConvexFlux {
  std::function<double(double)> f;
  std::function<double(double)> df;
  /// Minimiser of f.
  double sonic = 0.0;
};

ConvexFlux burgers_flux();
ConvexFlux linear_flux(double velocity);

/// Throws InvalidArgument when df is not nondecreasing on [lo, hi].
void check_convex(const ConvexFlux& flux, double lo, double hi, std::size_t samples = 64);

double godunov_flux(const ConvexFlux& flux, double u_left, double u_right);

/// One conservative periodic step; throws Cfl when dt max|f'| > dx.
std::vector<double> godunov_step(std::span<const double> u, const ConvexFlux& flux, double dt, double dx);

/// Runs godunov_step with uniform steps landing exactly on t_end.
std::vector<double> godunov_solve(std::span<const double> u0, const ConvexFlux& flux, double dx, double t_end,
                                  double cfl = 0.45);

/// For x-independent flux and strictly increasing z, the solution at t is the
/// Godunov solution at τ = z(t) - z(0). Throws NonMonotone otherwise.
std::vector<double> time_change_solve(std::span<const double> u0, const ConvexFlux& flux, double dx,
                                      const std::function<double(double)>& z, double t,
                                      std::size_t monotone_samples = 1024);

}  // namespace roughkin
