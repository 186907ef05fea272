#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minmaxlab {

enum class ErrorKind {
  InvalidArgument,
  OracleEstimator,
  NonPositiveScale,
  DegenerateLoss,
  QuadratureUnsupported,
  NonFiniteRisk,
  InsufficientLosses,
  InsufficientClasses,
  SameClass,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; the kind tells callers (and the CLI
/// exit-code mapping) what went wrong.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerics rather than of the inputs.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::NonFiniteRisk || kind_ == ErrorKind::DegenerateLoss;
  }

private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace minmaxlab
