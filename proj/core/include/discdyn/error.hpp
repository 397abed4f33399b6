#pragma once

#include <stdexcept>
#include <string>

namespace discdyn {

enum class Errc {
  invalid_argument,
  invalid_matrix,
  near_boundary,
  invalid_partition,
  not_hyperbolic,
  not_parabolic,
  not_conjugate,
  non_divergent_sequence,
  resolution,
  invalid_point,
  singular_point,
  stencil_outside_disc,
  parse,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace discdyn
