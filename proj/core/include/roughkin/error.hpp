#pragma once

#include <stdexcept>
#include <string>

namespace roughkin {

enum class ErrorKind {
  InvalidArgument,
  ResolutionMismatch,
  NonFinite,
  GridMismatch,
  NullCondition,
  StepSize,
  OutOfBox,
  Displacement,
  NegativeMeasure,
  NonContraction,
  Cfl,
  NonMonotone,
  SupportViolation,
  Io,
  Config,
  Invariant,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI,
/// the substepping logic in the flow solver) can react without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::ResolutionMismatch: return "resolution mismatch";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::GridMismatch: return "grid mismatch";
    case ErrorKind::NullCondition: return "null condition violated";
    case ErrorKind::StepSize: return "step size";
    case ErrorKind::OutOfBox: return "out of box";
    case ErrorKind::Displacement: return "displacement";
    case ErrorKind::NegativeMeasure: return "negative kinetic measure";
    case ErrorKind::NonContraction: return "fixed point not contracting";
    case ErrorKind::Cfl: return "CFL violation";
    case ErrorKind::NonMonotone: return "non-monotone driver";
    case ErrorKind::SupportViolation: return "test function support";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
    case ErrorKind::Invariant: return "invariant";
  }
  return "error";
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace roughkin
