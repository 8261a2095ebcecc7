#pragma once

#include <optional>

#include "roughkin/error.hpp"

namespace roughkin::test {

/// Kind of the roughkin::Error thrown by f, or nothing when f returns.
template <class F>
std::optional<ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace roughkin::test
