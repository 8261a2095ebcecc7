#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roughkin {

/// Uniform time grid t0 = s_0 < s_1 < ... < s_n = t1.
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, std::size_t n_steps);

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  double step() const noexcept { return (t1_ - t0_) / static_cast<double>(n_steps_); }
  double node(std::size_t k) const noexcept {
    return t0_ + static_cast<double>(k) * step();
  }

  /// Index of the node at time t; throws unless t sits on the grid.
  std::size_t index_of(double t) const;

  bool operator==(const TimeGrid& other) const noexcept;

 private:
  double t0_;
  double t1_;
  std::size_t n_steps_;
};

/// One step-2 increment of a driving signal, plus the matching dt.
/// level2 is row-major: level2[i * dim + j] = ∫ (x^i_r - x^i_s) dx^j_r.
struct DriverIncrement {
  std::size_t dim = 0;
  std::vector<double> level1;
  std::vector<double> level2;
  double dt = 0.0;

  double homogeneous_norm() const;
  /// Increment of the time-reversed path: the group inverse (-x1, x1⊗x1 - x2).
  DriverIncrement reversed() const;
  /// One of n equal pieces of the log-linear path with this increment;
  /// n copies composed with Chen's rule give back the original increment.
  DriverIncrement piece(std::size_t n) const;
};

/// Step-2 geometric Hölder p-rough path stored as per-interval increments on a
/// time grid. Anchors hold the signature from t0 to each node; when a path is
/// lifted from samples they are accumulated independently of the per-interval
/// data so the Chen check compares two routes.
class GeometricRoughPath {
 public:
  GeometricRoughPath(std::size_t dim, TimeGrid grid, double p, std::vector<double> level1,
                     std::vector<double> level2, std::vector<double> anchor1 = {},
                     std::vector<double> anchor2 = {});

  std::size_t dim() const noexcept { return dim_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_steps() const noexcept { return grid_.n_steps(); }
  double p() const noexcept { return p_; }

  std::span<const double> level1(std::size_t k) const;
  std::span<const double> level2(std::size_t k) const;
  std::span<const double> anchor1(std::size_t node) const;
  std::span<const double> anchor2(std::size_t node) const;

  const std::vector<double>& level1_data() const noexcept { return level1_; }
  const std::vector<double>& level2_data() const noexcept { return level2_; }

  DriverIncrement increment(std::size_t k) const;

  /// Fine samples the path was lifted from (row-major, (n*factor+1) x dim),
  /// empty when the path was built from increments only.
  std::span<const double> fine_samples() const noexcept { return fine_; }
  std::size_t fine_factor() const noexcept { return fine_factor_; }

  /// Returns a copy that also remembers the fine samples it was lifted from.
  GeometricRoughPath with_fine_samples(std::vector<double> samples, std::size_t factor) const;

 private:
  std::size_t dim_;
  TimeGrid grid_;
  double p_;
  std::vector<double> level1_;
  std::vector<double> level2_;
  std::vector<double> anchor1_;
  std::vector<double> anchor2_;
  std::vector<double> fine_;
  std::size_t fine_factor_ = 0;
};

struct RoughPathDefect {
  double chen_defect = 0.0;
  double shuffle_defect = 0.0;
  double holder_norm = 0.0;

  /// Tolerance used for the Chen and shuffle checks: 1e-8 (1 + holder²).
  double tolerance() const noexcept { return 1e-8 * (1.0 + holder_norm * holder_norm); }
  bool ok() const noexcept { return chen_defect <= tolerance() && shuffle_defect <= tolerance(); }
};

/// Canonical lift of the piecewise-linear interpolant of `samples`
/// (row-major, (n_fine + 1) x dim) onto `grid`. n_fine must be a multiple
/// (at least 4) of grid.n_steps().
GeometricRoughPath lift_smooth_path(std::span<const double> samples, std::size_t dim, double p,
                                    const TimeGrid& grid);

/// Brownian path sampled on the grid refined by `substeps`, row-major
/// (n*substeps + 1) x dim, starting at 0. Pure function of its arguments.
std::vector<double> sample_brownian_path(std::size_t dim, const TimeGrid& grid,
                                         std::size_t substeps, std::uint64_t seed);

GeometricRoughPath sample_brownian_lift(std::size_t dim, const TimeGrid& grid,
                                        std::size_t substeps, std::uint64_t seed,
                                        double p = 2.5);

/// Joint lift of a deterministic driver z (dimension M) and a second signal W
/// given as fine samples (dimension K) on the same refined grid. Components
/// are ordered (z, W). The (z,z) block is copied from z_lift.
GeometricRoughPath joint_lift(const GeometricRoughPath& z_lift, std::span<const double> w_samples,
                              std::size_t w_dim, const TimeGrid& grid);

RoughPathDefect check_defects(const GeometricRoughPath& rp);

/// Counter-based seed derivation (splitmix64) for independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

}  // namespace roughkin
