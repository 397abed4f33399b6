#include "discdyn/arcspace.hpp"

#include <algorithm>
#include <cmath>

#include "discdyn/error.hpp"
#include "discdyn/poisson.hpp"

namespace discdyn {

double image_arc_length(const MoebiusElement& g, const Arc& x) {
  if (x.theta <= 0.0) return 0.0;
  if (x.theta >= kTwoPi) return kTwoPi;
  // The endpoint images give the length modulo 2pi to full precision; the
  // harmonic measure only selects the turn.
  const double a = x.start_angle();
  const double raw = wrap_angle(g.act_angle(a + x.theta) - g.act_angle(a));
  const Complex center = -g.beta() / g.alpha();
  const double estimate = kTwoPi * harmonic_measure(center, a, x.theta);
  const double length = raw + kTwoPi * std::round((estimate - raw) / kTwoPi);
  return std::clamp(length, 0.0, kTwoPi);
}

Arc act_arc(const MoebiusElement& g, const Arc& x) {
  return Arc::from_angles(g.act_angle(x.start_angle()), image_arc_length(g, x));
}

double big_F(Complex z, const Arc& x) {
  if (!(std::abs(z) <= 1.0 - 1e-9)) throw Error(Errc::near_boundary, "point too close to the unit circle");
  if (x.theta <= 0.0) return 0.0;
  if (x.theta >= kTwoPi) return 1.0;
  return image_arc_length(MoebiusElement::recentering(z), x) / kTwoPi;
}

double check_equivariance(const MoebiusElement& g, Complex z, const Arc& x) {
  return std::abs(big_F(act_disc(g, z), act_arc(g, x)) - big_F(z, x));
}

double isotropy_residual(const MoebiusElement& g) {
  const Arc y = act_arc(g, Arc::from_angles(0.0, kPi));
  return std::abs(y.zeta - Complex{1.0, 0.0}) + std::abs(y.theta - kPi);
}

SpherePoint quotient_to_sphere(const Arc& x) noexcept {
  if (x.theta <= 0.0) return SpherePoint::south();
  if (x.theta >= kTwoPi) return SpherePoint::north();
  return {SpherePoint::Kind::interior, x};
}

SpherePoint act_sphere(const MoebiusElement& g, const SpherePoint& p) {
  if (p.kind != SpherePoint::Kind::interior) return p;
  return quotient_to_sphere(act_arc(g, p.arc));
}

}  // namespace discdyn
