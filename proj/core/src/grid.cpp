#include "roughkin/grid.hpp"

#include <cmath>

#include "roughkin/error.hpp"

namespace roughkin {

PhaseGrid::PhaseGrid(std::size_t nx, std::size_t nxi, double torus_length, double xi_max)
    : nx_(nx), nxi_(nxi), torus_(torus_length), xi_max_(xi_max) {
  require(nx_ >= 1 && nxi_ >= 2, ErrorKind::InvalidArgument, "phase grid needs nx >= 1, nxi >= 2");
  require(std::isfinite(torus_) && torus_ > 0.0, ErrorKind::InvalidArgument, "torus length must be positive");
  require(std::isfinite(xi_max_) && xi_max_ > 0.0, ErrorKind::InvalidArgument, "xi_max must be positive");
}

bool PhaseGrid::operator==(const PhaseGrid& other) const noexcept {
  return nx_ == other.nx_ && nxi_ == other.nxi_ && torus_ == other.torus_ && xi_max_ == other.xi_max_;
}

}  // namespace roughkin
