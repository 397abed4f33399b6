#include "discdyn/error.hpp"

namespace discdyn {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_matrix: return "invalid matrix";
    case Errc::near_boundary: return "near boundary";
    case Errc::invalid_partition: return "invalid partition";
    case Errc::not_hyperbolic: return "not hyperbolic";
    case Errc::not_parabolic: return "not parabolic";
    case Errc::not_conjugate: return "not conjugate";
    case Errc::non_divergent_sequence: return "non-divergent sequence";
    case Errc::resolution: return "resolution";
    case Errc::invalid_point: return "invalid point";
    case Errc::singular_point: return "singular point";
    case Errc::stencil_outside_disc: return "stencil outside disc";
    case Errc::parse: return "parse error";
  }
  return "unknown error";
}

}  // namespace discdyn
