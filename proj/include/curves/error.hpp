#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curves {

enum class ErrorCode {
  parse,
  empty_after_reduction,
  cap_too_large,
  equal_rays,
  degenerate_points,
  non_primitive,
  seed_not_reduced,
  no_formula_found,
  no_pentagon,
  non_convergence,
  invalid_metric,
  elliptic_or_parabolic,
  not_hyperbolic,
  endpoint_collision,
  degenerate_spectrum,
  unknown_seed,
  io,
  precondition,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curves
