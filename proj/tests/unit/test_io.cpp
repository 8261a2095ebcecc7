#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "roughkin/io.hpp"
#include "support.hpp"

using namespace roughkin;
using roughkin::test::thrown_kind;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "roughkin_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<unsigned char> bytes(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("rough path dump round trip") {
  const auto rp = sample_brownian_lift(2, TimeGrid(0.0, 0.5, 16), 4, 77);
  const fs::path file = scratch("path.rkrp");
  write_rough_path(file, rp);
  const auto b = bytes(file);
  REQUIRE(b.size() == 5 + 8 + 8 + 8 + 16 * 2 * 8 + 16 * 4 * 8);
  CHECK(std::string(b.begin(), b.begin() + 5) == "RKRP1");
  CHECK(b[5] == 2);
  for (int k = 6; k < 13; ++k) CHECK(b[k] == 0);
  CHECK(b[13] == 16);
  const auto back = read_rough_path(file, 0.0, 0.5);
  CHECK(back.dim() == 2);
  CHECK(back.p() == rp.p());
  CHECK(back.level1_data() == rp.level1_data());
  CHECK(back.level2_data() == rp.level2_data());
  CHECK(check_defects(back).ok());
}

TEST_CASE("kinetic dump round trip") {
  const PhaseGrid g(4, 8, 1.0, 1.0);
  const KineticState s = equilibrium(g, std::vector<double>{0.1, -0.2, 0.3, 0.0});
  const fs::path file = scratch("state.rkks");
  write_kinetic_state(file, s);
  const KineticDump d = read_kinetic_state(file);
  CHECK(d.nx == 4);
  CHECK(d.nxi == 8);
  CHECK(d.F == s.F);
}

TEST_CASE("wrong magic and truncation are io errors") {
  const fs::path file = scratch("bad.rkrp");
  {
    std::ofstream out(file, std::ios::binary);
    out << "RKKS1";
  }
  CHECK(thrown_kind([&] { (void)read_rough_path(file); }) == ErrorKind::Io);
  CHECK(thrown_kind([&] { (void)read_kinetic_state(file); }) == ErrorKind::Io);
  CHECK(thrown_kind([&] { (void)read_rough_path(scratch("missing.rkrp")); }) == ErrorKind::Io);
}

TEST_CASE("sample csv with header") {
  const fs::path file = scratch("samples.csv");
  {
    std::ofstream out(file);
    out << "t,z1,z2\n0,0,0\n0.5,1,2\n1,1.5,4\n";
  }
  const SampleTable t = read_samples_csv(file);
  CHECK(t.dim == 2);
  CHECK(t.times == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(t.values == std::vector<double>{0, 0, 1, 2, 1.5, 4});
}

TEST_CASE("flow csv header names every column") {
  const PhaseGrid g(1, 2, 1.0, 1.0);
  FlowField f{0.0, 1.0, g, {{0.5, -0.5}, {0.5, 0.5}}, {kIdentity2, kIdentity2}};
  std::ostringstream out;
  write_flow_csv(out, f);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,xi,phi_x,phi_xi,jac");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 2);
}
