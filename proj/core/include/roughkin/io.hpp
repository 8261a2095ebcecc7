#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "roughkin/characteristics.hpp"
#include "roughkin/grid.hpp"
#include "roughkin/kinetic.hpp"
#include "roughkin/rough_path.hpp"

namespace roughkin {

/// "RKRP1", dim and n_steps (uint64), p (f64), level1, level2; little-endian.
void write_rough_path(const std::filesystem::path& file, const GeometricRoughPath& rp);
/// The dump carries no time interval; the caller supplies [t0, t1].
GeometricRoughPath read_rough_path(const std::filesystem::path& file, double t0 = 0.0, double t1 = 1.0);

struct KineticDump {
  std::size_t nx = 0;
  std::size_t nxi = 0;
  std::vector<double> F;
};

/// "RKKS1", nx and nxi (uint64), F row-major (x outer); little-endian.
void write_kinetic_state(const std::filesystem::path& file, const KineticState& state);
KineticDump read_kinetic_state(const std::filesystem::path& file);

struct SampleTable {
  std::vector<double> times;
  std::size_t dim = 0;
  /// Row-major, times.size() x dim.
  std::vector<double> values;
};

/// CSV with columns (t, components...); a non-numeric first line is a header.
SampleTable read_samples_csv(const std::filesystem::path& file);

void write_density_csv(const std::filesystem::path& file, const KineticState& state);
void write_flow_csv(std::ostream& out, const FlowField& flow);
void write_diagnostics_csv(const std::filesystem::path& file, std::span<const StepDiagnostics> rows,
                           std::span<const double> residuals = {});

}  // namespace roughkin
