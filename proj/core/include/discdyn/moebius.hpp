#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace discdyn {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2pi).
double wrap_angle(double s) noexcept;

/// A point of the projective real line R ∪ {∞}. The point at infinity is a
/// tag, never a float sentinel.
class ExtendedReal {
 public:
  constexpr ExtendedReal(double x) noexcept : value_(x), infinite_(false) {}  // NOLINT(implicit)
  static constexpr ExtendedReal infinity() noexcept { return ExtendedReal(); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; throws Error(invalid_argument) at infinity.
  double value() const;

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  constexpr ExtendedReal() noexcept : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_;
};

/// Upper half-plane form x -> (a x + b) / (c x + d) with ad - bc = 1.
struct HalfPlaneMatrix {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const noexcept { return a * d - b * c; }
  ExtendedReal act(ExtendedReal x) const noexcept;
  /// The induced map on boundary angles, through x = tan(s/2). Stable for
  /// matrices with very large entries (no cancellation).
  double act_angle(double s) const noexcept;
  HalfPlaneMatrix inverse() const noexcept { return {d, -b, -c, a}; }

  static HalfPlaneMatrix dilation(double lambda);  // x -> lambda x
  static HalfPlaneMatrix translation(double shift) noexcept { return {1.0, shift, 0.0, 1.0}; }
};

HalfPlaneMatrix operator*(const HalfPlaneMatrix& g, const HalfPlaneMatrix& h) noexcept;

enum class ElementClass { identity, elliptic, parabolic, hyperbolic };

const char* to_string(ElementClass kind) noexcept;

/// Disc isometry z -> (alpha z + beta) / (conj(beta) z + conj(alpha)) with
/// |alpha|^2 - |beta|^2 = 1, modulo the sign of (alpha, beta).
///
/// The representative is canonical: Re alpha > 0, or Re alpha == 0 and
/// Im alpha > 0. Construction renormalizes the determinant.
class MoebiusElement {
 public:
  MoebiusElement() noexcept = default;
  MoebiusElement(Complex alpha, Complex beta);

  static MoebiusElement identity() noexcept { return {}; }
  /// z -> e^{is} z.
  static MoebiusElement rotation(double s);
  static MoebiusElement from_half_plane(const HalfPlaneMatrix& m);
  /// Conjugate of x -> lambda x; fixes 1 (repelling for lambda > 1) and -1.
  static MoebiusElement hyperbolic(double lambda);
  /// Conjugate of x -> x + shift; fixes -1.
  static MoebiusElement parabolic(double shift);
  /// The isometry sending z to 0: w -> (w - z) / (1 - conj(z) w).
  static MoebiusElement recentering(Complex z);

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }
  double trace() const noexcept { return 2.0 * alpha_.real(); }
  double determinant() const noexcept { return std::norm(alpha_) - std::norm(beta_); }

  HalfPlaneMatrix to_half_plane() const noexcept;

  Complex act(Complex z) const noexcept;
  /// Boundary action in angles, result in [0, 2pi).
  double act_angle(double s) const noexcept;
  /// |g'(e^{is})| = 1 / |conj(alpha) + conj(beta) e^{is}|^2.
  double boundary_derivative(double s) const noexcept;

  /// Fixed points on the unit circle (two for hyperbolic, one for
  /// parabolic, none otherwise).
  std::vector<Complex> boundary_fixed_points() const;

 private:
  Complex alpha_{1.0, 0.0};
  Complex beta_{0.0, 0.0};
};

MoebiusElement compose(const MoebiusElement& g, const MoebiusElement& h) noexcept;
MoebiusElement inverse(const MoebiusElement& g) noexcept;
inline MoebiusElement operator*(const MoebiusElement& g, const MoebiusElement& h) noexcept {
  return compose(g, h);
}
/// g^k for any integer k, by repeated squaring.
MoebiusElement power(const MoebiusElement& g, long k) noexcept;

MoebiusElement from_half_plane(const HalfPlaneMatrix& m);

/// Throws Error(invalid_argument) if |z| > 1 + 1e-12.
Complex act_disc(const MoebiusElement& g, Complex z);
ExtendedReal act_line(const MoebiusElement& g, ExtendedReal x) noexcept;

inline constexpr double kClassifyTolerance = 1e-9;
ElementClass classify(const MoebiusElement& g, double tol = kClassifyTolerance) noexcept;

/// Equality in PSU(1,1), componentwise within tol, modulo sign.
bool approx_equal(const MoebiusElement& g, const MoebiusElement& h, double tol = 1e-12) noexcept;

/// Conjugation taking a hyperbolic or parabolic element to its line normal
/// form: conjugator * g * inverse(conjugator) acts on R as x -> multiplier x
/// (multiplier > 1) or x -> x + shift.
struct NormalForm {
  ElementClass kind = ElementClass::identity;
  MoebiusElement conjugator;
  double multiplier = 1.0;
  double shift = 0.0;
};

/// Throws Error(non_divergent_sequence) for identity and elliptic elements.
NormalForm normal_form(const MoebiusElement& g);

}  // namespace discdyn
