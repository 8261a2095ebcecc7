#pragma once

#include <cstddef>

namespace roughkin {

/// Periodic x cells of width dx on [0, torus) times ξ cells of width dξ on
/// [-xi_max, xi_max]. Values live at cell centres; index = i * nxi + j.
class PhaseGrid {
 public:
  PhaseGrid() : PhaseGrid(1, 2, 1.0, 1.0) {}
  PhaseGrid(std::size_t nx, std::size_t nxi, double torus_length, double xi_max);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t nxi() const noexcept { return nxi_; }
  std::size_t size() const noexcept { return nx_ * nxi_; }
  double torus_length() const noexcept { return torus_; }
  double xi_max() const noexcept { return xi_max_; }
  double dx() const noexcept { return torus_ / static_cast<double>(nx_); }
  double dxi() const noexcept { return 2.0 * xi_max_ / static_cast<double>(nxi_); }

  double x(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx(); }
  double xi(std::size_t j) const noexcept { return -xi_max_ + (static_cast<double>(j) + 0.5) * dxi(); }
  double xi_edge(std::size_t j) const noexcept { return -xi_max_ + static_cast<double>(j) * dxi(); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * nxi_ + j; }

  bool operator==(const PhaseGrid& other) const noexcept;

 private:
  std::size_t nx_;
  std::size_t nxi_;
  double torus_;
  double xi_max_;
};

}  // namespace roughkin
