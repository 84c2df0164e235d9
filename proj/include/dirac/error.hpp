#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dirac {

enum class ErrorKind {
  DimensionMismatch,
  FormDegenerate,
  NotAntisymmetric,
  NotLagrangian,
  SingularMatrix,
  DegeneratePoint,
  AmbiguousIsotropy,
  InvalidAction,
  ZeroAlgebra,
  InternalConsistency,
  Parse,
  Validation,
  UnknownFormat,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dirac
