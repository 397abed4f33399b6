#pragma once

#include "discdyn/boundary.hpp"

namespace discdyn {

/// Arclength of g(x): the integral over x of |g'|, equal to 2pi times the
/// harmonic measure of x seen from g^{-1}(0). Lengths 0 and 2pi are fixed.
double image_arc_length(const MoebiusElement& g, const Arc& x);

/// g(zeta, theta) = (g(zeta), image_arc_length(g, x)).
Arc act_arc(const MoebiusElement& g, const Arc& x);

/// Harmonic measure of x at z, computed as the normalized length of x after
/// recentering z to the origin. Throws Error(near_boundary) for |z| > 1 - 1e-9.
double big_F(Complex z, const Arc& x);

/// |F(gz, gx) - F(z, x)|.
double check_equivariance(const MoebiusElement& g, Complex z, const Arc& x);

/// Distance of g(1, pi) from (1, pi); vanishes exactly on the diagonal subgroup.
double isotropy_residual(const MoebiusElement& g);

/// Point of the sphere obtained by collapsing S^1 x {0} (south) and
/// S^1 x {2pi} (north).
struct SpherePoint {
  enum class Kind { south, interior, north };
  Kind kind = Kind::south;
  Arc arc;  // meaningful for interior points only

  static SpherePoint south() noexcept { return {Kind::south, {}}; }
  static SpherePoint north() noexcept { return {Kind::north, {}}; }
};

SpherePoint quotient_to_sphere(const Arc& x) noexcept;
SpherePoint act_sphere(const MoebiusElement& g, const SpherePoint& p);

}  // namespace discdyn
