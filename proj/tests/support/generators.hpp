#pragma once

// Seeded random inputs shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "discdyn/boundary.hpp"
#include "discdyn/moebius.hpp"

namespace discdyn::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

/// Uniform in the disc of radius r.
inline Complex disc_point(Rng& rng, double r) {
  const double rho = r * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(rho, uniform(rng, 0.0, kTwoPi));
}

/// Rotation after recentering at a point of modulus <= r, so the
/// translation length stays bounded by log((1 + r) / (1 - r)).
inline MoebiusElement random_element(Rng& rng, double r = 0.8) {
  return compose(MoebiusElement::rotation(uniform(rng, 0.0, kTwoPi)),
                 MoebiusElement::recentering(disc_point(rng, r)));
}

inline MoebiusElement random_hyperbolic(Rng& rng, double max_log_lambda = 2.0) {
  const MoebiusElement conj = random_element(rng, 0.6);
  const MoebiusElement h = MoebiusElement::hyperbolic(std::exp(uniform(rng, 0.2, max_log_lambda)));
  return compose(compose(conj, h), inverse(conj));
}

inline Arc random_arc(Rng& rng) { return Arc::from_angles(uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)); }

/// 1..max_pieces pieces at random breakpoints with values in the closed disc.
inline BoundaryFunction random_boundary(Rng& rng, int max_pieces = 12, bool real = false) {
  const int pieces = std::uniform_int_distribution<int>(1, max_pieces)(rng);
  std::vector<double> bp(static_cast<std::size_t>(pieces));
  for (double& b : bp) b = uniform(rng, 0.0, kTwoPi);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<Complex> values(bp.size());
  for (Complex& v : values) v = real ? Complex(uniform(rng, -1.0, 1.0)) : disc_point(rng, 1.0);
  if (bp.size() == 1) return BoundaryFunction(values[0]);
  return {std::move(bp), std::move(values)};
}

/// Midpoint samples of fn on n equal pieces.
template <class Fn>
BoundaryFunction sampled(Fn fn, std::size_t n) {
  std::vector<double> bp(n);
  std::vector<Complex> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    bp[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    values[i] = fn(kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return {std::move(bp), std::move(values)};
}

}  // namespace discdyn::testing
