#include "roughkin/rough_path.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "roughkin/error.hpp"

namespace roughkin {

namespace {

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

// Accumulates the canonical lift of a piecewise-linear path.
// level2 += (X_m - X_ref) ⊗ δ + ½ δ ⊗ δ for each segment.
void accumulate_segment(std::span<const double> x_m, std::span<const double> x_ref,
                        std::span<const double> delta, std::span<double> level2, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    const double lead = (x_m[i] - x_ref[i]) + 0.5 * delta[i];
    for (std::size_t j = 0; j < dim; ++j) level2[i * dim + j] += lead * delta[j];
  }
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_steps) : t0_(t0), t1_(t1), n_steps_(n_steps) {
  require(std::isfinite(t0) && std::isfinite(t1) && t0 < t1, ErrorKind::InvalidArgument,
          "time grid requires t0 < t1");
  require(n_steps >= 1, ErrorKind::InvalidArgument, "time grid requires n_steps >= 1");
}

std::size_t TimeGrid::index_of(double t) const {
  const double q = (t - t0_) / step();
  const double k = std::round(q);
  require(std::abs(q - k) <= 1e-9 && k >= 0.0 && k <= static_cast<double>(n_steps_),
          ErrorKind::GridMismatch, "time " + std::to_string(t) + " is not a grid node");
  return static_cast<std::size_t>(k);
}

bool TimeGrid::operator==(const TimeGrid& other) const noexcept {
  return n_steps_ == other.n_steps_ && std::abs(t0_ - other.t0_) <= 1e-12 * (1.0 + std::abs(t0_)) &&
         std::abs(t1_ - other.t1_) <= 1e-12 * (1.0 + std::abs(t1_));
}

double DriverIncrement::homogeneous_norm() const {
  double l1 = 0.0;
  for (double v : level1) l1 = std::max(l1, std::abs(v));
  double l2 = 0.0;
  for (double v : level2) l2 = std::max(l2, std::abs(v));
  return std::max(l1, std::sqrt(l2));
}

DriverIncrement DriverIncrement::reversed() const {
  DriverIncrement out;
  out.dim = dim;
  out.dt = -dt;
  out.level1.resize(dim);
  out.level2.resize(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) out.level1[i] = -level1[i];
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out.level2[i * dim + j] = level1[i] * level1[j] - level2[i * dim + j];
  return out;
}

DriverIncrement DriverIncrement::piece(std::size_t n) const {
  if (n <= 1) return *this;
  const double inv = 1.0 / static_cast<double>(n);
  DriverIncrement out;
  out.dim = dim;
  out.dt = dt * inv;
  out.level1.resize(dim);
  out.level2.resize(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) out.level1[i] = level1[i] * inv;
  // Area part A = x2 - ½ x1⊗x1 scales linearly, the symmetric part quadratically.
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double area = level2[i * dim + j] - 0.5 * level1[i] * level1[j];
      out.level2[i * dim + j] = 0.5 * out.level1[i] * out.level1[j] + area * inv;
    }
  }
  return out;
}

GeometricRoughPath::GeometricRoughPath(std::size_t dim, TimeGrid grid, double p,
                                       std::vector<double> level1, std::vector<double> level2,
                                       std::vector<double> anchor1, std::vector<double> anchor2)
    : dim_(dim),
      grid_(grid),
      p_(p),
      level1_(std::move(level1)),
      level2_(std::move(level2)),
      anchor1_(std::move(anchor1)),
      anchor2_(std::move(anchor2)) {
  require(dim_ >= 1, ErrorKind::InvalidArgument, "rough path dimension must be positive");
  require(p_ > 2.0 && p_ < 3.0, ErrorKind::InvalidArgument, "p must lie in (2, 3)");
  const std::size_t n = grid_.n_steps();
  require(level1_.size() == n * dim_ && level2_.size() == n * dim_ * dim_,
          ErrorKind::InvalidArgument, "rough path level sizes do not match grid");
  require(all_finite(level1_) && all_finite(level2_), ErrorKind::NonFinite,
          "rough path increments must be finite");
  if (anchor1_.empty() && anchor2_.empty()) {
    // Rebuild the running signature by Chen composition.
    anchor1_.assign((n + 1) * dim_, 0.0);
    anchor2_.assign((n + 1) * dim_ * dim_, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double* a1 = &anchor1_[k * dim_];
      const double* a2 = &anchor2_[k * dim_ * dim_];
      double* b1 = &anchor1_[(k + 1) * dim_];
      double* b2 = &anchor2_[(k + 1) * dim_ * dim_];
      const double* x1 = &level1_[k * dim_];
      const double* x2 = &level2_[k * dim_ * dim_];
      for (std::size_t i = 0; i < dim_; ++i) b1[i] = a1[i] + x1[i];
      for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
          b2[i * dim_ + j] = a2[i * dim_ + j] + x2[i * dim_ + j] + a1[i] * x1[j];
    }
  } else {
    require(anchor1_.size() == (n + 1) * dim_ && anchor2_.size() == (n + 1) * dim_ * dim_,
            ErrorKind::InvalidArgument, "anchor sizes do not match grid");
  }
}

std::span<const double> GeometricRoughPath::level1(std::size_t k) const {
  return {level1_.data() + k * dim_, dim_};
}
std::span<const double> GeometricRoughPath::level2(std::size_t k) const {
  return {level2_.data() + k * dim_ * dim_, dim_ * dim_};
}
std::span<const double> GeometricRoughPath::anchor1(std::size_t node) const {
  return {anchor1_.data() + node * dim_, dim_};
}
std::span<const double> GeometricRoughPath::anchor2(std::size_t node) const {
  return {anchor2_.data() + node * dim_ * dim_, dim_ * dim_};
}

DriverIncrement GeometricRoughPath::increment(std::size_t k) const {
  DriverIncrement inc;
  inc.dim = dim_;
  const auto l1 = level1(k);
  const auto l2 = level2(k);
  inc.level1.assign(l1.begin(), l1.end());
  inc.level2.assign(l2.begin(), l2.end());
  inc.dt = grid_.step();
  return inc;
}

GeometricRoughPath GeometricRoughPath::with_fine_samples(std::vector<double> samples,
                                                         std::size_t factor) const {
  require(samples.size() == (n_steps() * factor + 1) * dim_, ErrorKind::ResolutionMismatch,
          "fine samples do not match grid and factor");
  GeometricRoughPath copy = *this;
  copy.fine_ = std::move(samples);
  copy.fine_factor_ = factor;
  return copy;
}

GeometricRoughPath lift_smooth_path(std::span<const double> samples, std::size_t dim, double p,
                                    const TimeGrid& grid) {
  require(dim >= 1, ErrorKind::InvalidArgument, "dimension must be positive");
  require(samples.size() % dim == 0 && samples.size() / dim >= 2, ErrorKind::ResolutionMismatch,
          "sample array is not a whole number of rows");
  const std::size_t n_fine = samples.size() / dim - 1;
  const std::size_t n = grid.n_steps();
  require(n_fine % n == 0 && n_fine / n >= 4, ErrorKind::ResolutionMismatch,
          "sample resolution must be an integer multiple (>= 4) of the grid resolution");
  require(all_finite(samples), ErrorKind::NonFinite, "samples must be finite");
  const std::size_t r = n_fine / n;

  std::vector<double> level1(n * dim, 0.0);
  std::vector<double> level2(n * dim * dim, 0.0);
  std::vector<double> anchor1((n + 1) * dim, 0.0);
  std::vector<double> anchor2((n + 1) * dim * dim, 0.0);
  std::vector<double> running2(dim * dim, 0.0);
  std::vector<double> delta(dim);

  auto row = [&](std::size_t m) { return samples.subspan(m * dim, dim); };
  const auto origin = row(0);

  for (std::size_t k = 0; k < n; ++k) {
    const auto start = row(k * r);
    std::span<double> x2(level2.data() + k * dim * dim, dim * dim);
    for (std::size_t m = k * r; m < (k + 1) * r; ++m) {
      const auto a = row(m);
      const auto b = row(m + 1);
      for (std::size_t i = 0; i < dim; ++i) delta[i] = b[i] - a[i];
      accumulate_segment(a, start, delta, x2, dim);
      accumulate_segment(a, origin, delta, running2, dim);
    }
    const auto end = row((k + 1) * r);
    for (std::size_t i = 0; i < dim; ++i) {
      level1[k * dim + i] = end[i] - start[i];
      anchor1[(k + 1) * dim + i] = end[i] - origin[i];
    }
    std::copy(running2.begin(), running2.end(), anchor2.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim * dim));
  }
  GeometricRoughPath rp(dim, grid, p, std::move(level1), std::move(level2), std::move(anchor1),
                        std::move(anchor2));
  return rp.with_fine_samples(std::vector<double>(samples.begin(), samples.end()), r);
}

std::vector<double> sample_brownian_path(std::size_t dim, const TimeGrid& grid,
                                         std::size_t substeps, std::uint64_t seed) {
  require(dim >= 1, ErrorKind::InvalidArgument, "Brownian dimension must be positive");
  require(substeps >= 4, ErrorKind::InvalidArgument, "substeps must be at least 4");
  const std::size_t n_fine = grid.n_steps() * substeps;
  const double h = grid.step() / static_cast<double>(substeps);
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(h));
  std::vector<double> samples((n_fine + 1) * dim, 0.0);
  for (std::size_t m = 0; m < n_fine; ++m)
    for (std::size_t i = 0; i < dim; ++i)
      samples[(m + 1) * dim + i] = samples[m * dim + i] + normal(engine);
  return samples;
}

GeometricRoughPath sample_brownian_lift(std::size_t dim, const TimeGrid& grid,
                                        std::size_t substeps, std::uint64_t seed, double p) {
  const auto samples = sample_brownian_path(dim, grid, substeps, seed);
  return lift_smooth_path(samples, dim, p, grid);
}

GeometricRoughPath joint_lift(const GeometricRoughPath& z_lift, std::span<const double> w_samples,
                              std::size_t w_dim, const TimeGrid& grid) {
  require(z_lift.grid() == grid, ErrorKind::GridMismatch, "z lift and W live on different grids");
  require(w_dim >= 1 && w_samples.size() % w_dim == 0, ErrorKind::GridMismatch,
          "W samples are not a whole number of rows");
  const std::size_t n = grid.n_steps();
  const std::size_t n_fine = w_samples.size() / w_dim - 1;
  require(n_fine % n == 0 && n_fine / n >= 4, ErrorKind::GridMismatch,
          "W samples must refine the grid by an integer factor >= 4");
  const std::size_t r = n_fine / n;
  const std::size_t m_dim = z_lift.dim();
  const std::size_t d = m_dim + w_dim;

  // z on the W refinement: its own fine samples when they match, otherwise the
  // piecewise-linear interpolant of its node values.
  std::vector<double> joint((n_fine + 1) * d, 0.0);
  const auto z_fine = z_lift.fine_samples();
  const bool same_resolution = !z_fine.empty() && z_lift.fine_factor() == r;
  for (std::size_t m = 0; m <= n_fine; ++m) {
    for (std::size_t i = 0; i < m_dim; ++i) {
      double value;
      if (same_resolution) {
        value = z_fine[m * m_dim + i] - z_fine[i];
      } else {
        const std::size_t k = std::min(m / r, n - 1);
        const double w = static_cast<double>(m - k * r) / static_cast<double>(r);
        value = z_lift.anchor1(k)[i] + w * z_lift.level1(k)[i];
      }
      joint[m * d + i] = value;
    }
    for (std::size_t j = 0; j < w_dim; ++j) joint[m * d + m_dim + j] = w_samples[m * w_dim + j];
  }
  const GeometricRoughPath full = lift_smooth_path(joint, d, z_lift.p(), grid);

  std::vector<double> level1 = full.level1_data();
  std::vector<double> level2 = full.level2_data();
  std::vector<double> anchor1((n + 1) * d);
  std::vector<double> anchor2((n + 1) * d * d);
  for (std::size_t node = 0; node <= n; ++node) {
    const auto a1 = full.anchor1(node);
    const auto a2 = full.anchor2(node);
    std::copy(a1.begin(), a1.end(), anchor1.begin() + static_cast<std::ptrdiff_t>(node * d));
    std::copy(a2.begin(), a2.end(), anchor2.begin() + static_cast<std::ptrdiff_t>(node * d * d));
  }

  auto patch = [&](std::vector<double>& l1, std::vector<double>& l2, std::span<const double> z1,
                   std::span<const double> z2, std::size_t off1, std::size_t off2) {
    for (std::size_t i = 0; i < m_dim; ++i) l1[off1 + i] = z1[i];
    for (std::size_t i = 0; i < m_dim; ++i)
      for (std::size_t j = 0; j < m_dim; ++j) l2[off2 + i * d + j] = z2[i * m_dim + j];
    // (W, z) block defined from the (z, W) block so the pair is geometric.
    for (std::size_t a = m_dim; a < d; ++a)
      for (std::size_t i = 0; i < m_dim; ++i)
        l2[off2 + a * d + i] = l1[off1 + a] * l1[off1 + i] - l2[off2 + i * d + a];
  };
  for (std::size_t k = 0; k < n; ++k)
    patch(level1, level2, z_lift.level1(k), z_lift.level2(k), k * d, k * d * d);
  for (std::size_t node = 0; node <= n; ++node)
    patch(anchor1, anchor2, z_lift.anchor1(node), z_lift.anchor2(node), node * d, node * d * d);

  GeometricRoughPath rp(d, grid, z_lift.p(), std::move(level1), std::move(level2),
                        std::move(anchor1), std::move(anchor2));
  return rp.with_fine_samples(std::move(joint), r);
}

RoughPathDefect check_defects(const GeometricRoughPath& rp) {
  const std::size_t d = rp.dim();
  const std::size_t n = rp.n_steps();
  RoughPathDefect out;

  for (std::size_t k = 0; k < n; ++k) {
    const auto a1 = rp.anchor1(k);
    const auto a2 = rp.anchor2(k);
    const auto b1 = rp.anchor1(k + 1);
    const auto b2 = rp.anchor2(k + 1);
    const auto x1 = rp.level1(k);
    const auto x2 = rp.level2(k);
    for (std::size_t i = 0; i < d; ++i) {
      out.chen_defect = std::max(out.chen_defect, std::abs(b1[i] - a1[i] - x1[i]));
      for (std::size_t j = 0; j < d; ++j) {
        const double chen = b2[i * d + j] - (a2[i * d + j] + x2[i * d + j] + a1[i] * x1[j]);
        out.chen_defect = std::max(out.chen_defect, std::abs(chen));
        const double sym = 0.5 * (x2[i * d + j] + x2[j * d + i]) - 0.5 * x1[i] * x1[j];
        out.shuffle_defect = std::max(out.shuffle_defect, std::abs(sym));
      }
    }
  }

  const double inv_p = 1.0 / rp.p();
  const TimeGrid& grid = rp.grid();
  for (std::size_t s = 0; s < n; ++s) {
    const auto s1 = rp.anchor1(s);
    const auto s2 = rp.anchor2(s);
    for (std::size_t t = s + 1; t <= n; ++t) {
      const auto t1 = rp.anchor1(t);
      const auto t2 = rp.anchor2(t);
      double n1 = 0.0;
      double n2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double inc = t1[i] - s1[i];
        n1 += inc * inc;
        for (std::size_t j = 0; j < d; ++j) {
          const double area = t2[i * d + j] - s2[i * d + j] - s1[i] * (t1[j] - s1[j]);
          n2 += area * area;
        }
      }
      const double norm = std::max(std::sqrt(n1), std::pow(n2, 0.25));
      const double span = grid.node(t) - grid.node(s);
      out.holder_norm = std::max(out.holder_norm, norm / std::pow(span, inv_p));
    }
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(master ^ mix(stream * 0x100000001b3ULL ^ mix(index)));
}

}  // namespace roughkin
