#include <cmath>

#include "discdyn/chaos.hpp"
#include "discdyn/error.hpp"

namespace discdyn {

namespace {

// x -> sign(x) |x|^p on the extended line, as a circle map.
CircleMap power_law(double p) {
  auto make = [](double q) {
    return [q](double s) {
      const ExtendedReal x = line_from_angle(s);
      if (x.is_infinite()) return kPi;
      const double v = x.value();
      return angle_from_line(std::copysign(std::pow(std::abs(v), q), v));
    };
  };
  return {make(p), make(1.0 / p), true};
}

// x -> r x; reverses orientation for r < 0.
CircleMap scaling(double r) {
  auto make = [](double q) {
    return [q](double s) {
      const ExtendedReal x = line_from_angle(s);
      if (x.is_infinite()) return kPi;
      return angle_from_line(q * x.value());
    };
  };
  return {make(r), make(1.0 / r), r > 0.0};
}

bool divergent(ElementClass k) { return k == ElementClass::hyperbolic || k == ElementClass::parabolic; }

}  // namespace

Conjugacy conjugating_map(const MoebiusElement& gamma1, const MoebiusElement& gamma2) {
  const ElementClass k1 = classify(gamma1), k2 = classify(gamma2);
  if (!divergent(k1) || !divergent(k2))
    throw Error(Errc::not_conjugate, "conjugacy is constructed for hyperbolic or parabolic elements only");
  if (k1 != k2)
    throw Error(Errc::not_conjugate, std::string("no conjugacy constructed between ") + to_string(k1) + " and " +
                                         to_string(k2) + " elements");
  Conjugacy c;
  c.kind = k1;
  if (approx_equal(gamma1, gamma2, 1e-14)) return c;
  const NormalForm n1 = normal_form(gamma1), n2 = normal_form(gamma2);
  CircleMap core = CircleMap::identity();
  if (k1 == ElementClass::hyperbolic) {
    c.exponent = std::log(n1.multiplier) / std::log(n2.multiplier);
    core = power_law(c.exponent);
  } else {
    c.exponent = n1.shift / n2.shift;
    core = scaling(c.exponent);
  }
  // h = N1^{-1} ∘ P ∘ N2 with P ∘ (normal gamma2) = (normal gamma1) ∘ P.
  c.h = compose(CircleMap::from(inverse(n1.conjugator)), compose(core, CircleMap::from(n2.conjugator)));
  return c;
}

MetricValue intertwining_residual(const Conjugacy& c, const MoebiusElement& gamma1, const MoebiusElement& gamma2,
                                  const StepFunction& f, const CompactExhaustion& ex) {
  const StepFunction left = f.pull_back(CircleMap::from(inverse(gamma1))).pull_back(c.h);
  const StepFunction right = f.pull_back(c.h).pull_back(CircleMap::from(inverse(gamma2)));
  return metric_distance(HarmonicFunction(left), HarmonicFunction(right), ex);
}

}  // namespace discdyn
