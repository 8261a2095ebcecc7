#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace roughkin {

/// State y = (x, ξ).
using Vec2 = std::array<double, 2>;
/// Row-major 2x2 matrix, m[k * 2 + l].
using Mat2 = std::array<double, 4>;

inline constexpr Mat2 kIdentity2{1.0, 0.0, 0.0, 1.0};

inline Mat2 matmul(const Mat2& a, const Mat2& b) noexcept {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline double det(const Mat2& m) noexcept { return m[0] * m[3] - m[1] * m[2]; }

/// A vector field with its first and second derivatives at one point.
/// dv[k * 2 + l] = ∂_l V^k, d2v[l][k * 2 + m] = ∂_l ∂_m V^k.
struct ColumnJet {
  Vec2 v{};
  Mat2 dv{};
  std::array<Mat2, 2> d2v{};
};

struct BundleEval {
  ColumnJet drift;
  std::vector<ColumnJet> columns;
};

/// Drift plus one column per driver component. `evaluate` must be pure;
/// second derivatives are only filled when `second_order` is set.
struct FieldBundle {
  std::size_t columns = 0;
  bool has_drift = false;
  std::function<void(const Vec2& y, bool second_order, BundleEval& out)> evaluate;
};

}  // namespace roughkin
