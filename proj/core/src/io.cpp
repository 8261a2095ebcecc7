#include "roughkin/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "roughkin/error.hpp"

namespace roughkin {

namespace {

constexpr std::size_t kMagicSize = 5;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (std::size_t k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffU);
  out.write(b.data(), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  require(static_cast<bool>(in), ErrorKind::Io, "truncated binary dump");
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::ofstream open_out(const std::filesystem::path& file, bool binary) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + file.string());
  if (!binary) out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& file, bool binary) {
  std::ifstream in(file, binary ? std::ios::binary : std::ios::in);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read " + file.string());
  return in;
}

void expect_magic(std::istream& in, const char* magic, const std::filesystem::path& file) {
  std::array<char, kMagicSize> m{};
  in.read(m.data(), kMagicSize);
  require(static_cast<bool>(in) && std::memcmp(m.data(), magic, kMagicSize) == 0, ErrorKind::Io,
          file.string() + " is not a " + std::string(magic) + " dump");
}

void finish(std::ostream& out, const std::filesystem::path& file) {
  out.flush();
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + file.string());
}

}  // namespace

void write_rough_path(const std::filesystem::path& file, const GeometricRoughPath& rp) {
  auto out = open_out(file, true);
  out.write("RKRP1", kMagicSize);
  put_u64(out, rp.dim());
  put_u64(out, rp.n_steps());
  put_f64(out, rp.p());
  for (double v : rp.level1_data()) put_f64(out, v);
  for (double v : rp.level2_data()) put_f64(out, v);
  finish(out, file);
}

GeometricRoughPath read_rough_path(const std::filesystem::path& file, double t0, double t1) {
  auto in = open_in(file, true);
  expect_magic(in, "RKRP1", file);
  const std::uint64_t dim = get_u64(in);
  const std::uint64_t n = get_u64(in);
  const double p = get_f64(in);
  require(dim >= 1 && dim <= 1024 && n >= 1 && n <= (std::uint64_t{1} << 32), ErrorKind::Io,
          "implausible rough path header in " + file.string());
  std::vector<double> l1(n * dim);
  std::vector<double> l2(n * dim * dim);
  for (double& v : l1) v = get_f64(in);
  for (double& v : l2) v = get_f64(in);
  return GeometricRoughPath(dim, TimeGrid(t0, t1, n), p, std::move(l1), std::move(l2));
}

void write_kinetic_state(const std::filesystem::path& file, const KineticState& state) {
  auto out = open_out(file, true);
  out.write("RKKS1", kMagicSize);
  put_u64(out, state.grid.nx());
  put_u64(out, state.grid.nxi());
  for (double v : state.F) put_f64(out, v);
  finish(out, file);
}

KineticDump read_kinetic_state(const std::filesystem::path& file) {
  auto in = open_in(file, true);
  expect_magic(in, "RKKS1", file);
  KineticDump d;
  d.nx = get_u64(in);
  d.nxi = get_u64(in);
  require(d.nx >= 1 && d.nxi >= 1 && d.nx * d.nxi <= (std::size_t{1} << 32), ErrorKind::Io,
          "implausible kinetic header in " + file.string());
  d.F.resize(d.nx * d.nxi);
  for (double& v : d.F) v = get_f64(in);
  return d;
}

SampleTable read_samples_csv(const std::filesystem::path& file) {
  auto in = open_in(file, false);
  SampleTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      require(first, ErrorKind::Io, "non-numeric row in " + file.string());
      first = false;
      continue;
    }
    first = false;
    require(row.size() >= 2, ErrorKind::Io, "sample rows need a time and at least one component");
    if (table.dim == 0) table.dim = row.size() - 1;
    require(row.size() - 1 == table.dim, ErrorKind::Io, "ragged sample rows in " + file.string());
    table.times.push_back(row[0]);
    table.values.insert(table.values.end(), row.begin() + 1, row.end());
  }
  require(table.times.size() >= 2, ErrorKind::Io, "need at least two samples in " + file.string());
  return table;
}

void write_density_csv(const std::filesystem::path& file, const KineticState& state) {
  auto out = open_out(file, false);
  out << "x,u\n";
  for (std::size_t i = 0; i < state.grid.nx(); ++i) out << state.grid.x(i) << ',' << state.u[i] << '\n';
  finish(out, file);
}

void write_flow_csv(std::ostream& out, const FlowField& flow) {
  const auto precision = out.precision(17);
  out << "x,xi,phi_x,phi_xi,jac\n";
  for (std::size_t i = 0; i < flow.grid.nx(); ++i) {
    for (std::size_t j = 0; j < flow.grid.nxi(); ++j) {
      const std::size_t n = flow.grid.index(i, j);
      out << flow.grid.x(i) << ',' << flow.grid.xi(j) << ',' << flow.maps[n][0] << ',' << flow.maps[n][1] << ','
          << flow.jac(n) << '\n';
    }
  }
  out.precision(precision);
}

void write_diagnostics_csv(const std::filesystem::path& file, std::span<const StepDiagnostics> rows,
                           std::span<const double> residuals) {
  auto out = open_out(file, false);
  out << "t,mass,l1,l2,measure_mass,maxprin_defect,jac_defect,indicator_defect";
  if (!residuals.empty()) out << ",residual";
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const StepDiagnostics& d = rows[r];
    out << d.t << ',' << d.mass << ',' << d.l1 << ',' << d.l2 << ',' << d.measure_mass << ',' << d.maxprin_defect
        << ',' << d.jac_defect << ',' << d.indicator_defect;
    if (!residuals.empty()) out << ',' << (r < residuals.size() ? residuals[r] : 0.0);
    out << '\n';
  }
  finish(out, file);
}

}  // namespace roughkin
