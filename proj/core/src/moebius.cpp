#include "discdyn/moebius.hpp"

#include <cmath>
#include <utility>

#include "discdyn/error.hpp"

namespace discdyn {

double wrap_angle(double s) noexcept {
  double r = std::fmod(s, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double ExtendedReal::value() const {
  if (infinite_) throw Error(Errc::invalid_argument, "value() of the point at infinity");
  return value_;
}

ExtendedReal HalfPlaneMatrix::act(ExtendedReal x) const noexcept {
  if (x.is_infinite()) {
    if (c == 0.0) return ExtendedReal::infinity();
    return a / c;
  }
  const double den = c * x.value() + d;
  if (den == 0.0) return ExtendedReal::infinity();
  return (a * x.value() + b) / den;
}

double HalfPlaneMatrix::act_angle(double s) const noexcept {
  // The boundary point e^{is} is the projective point (sin(s/2) : cos(s/2)).
  const double sn = std::sin(0.5 * s);
  const double cs = std::cos(0.5 * s);
  return wrap_angle(2.0 * std::atan2(a * sn + b * cs, c * sn + d * cs));
}

HalfPlaneMatrix HalfPlaneMatrix::dilation(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(Errc::invalid_argument, "dilation factor must be positive and finite");
  const double r = std::sqrt(lambda);
  return {r, 0.0, 0.0, 1.0 / r};
}

HalfPlaneMatrix operator*(const HalfPlaneMatrix& g, const HalfPlaneMatrix& h) noexcept {
  return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c,
          g.c * h.b + g.d * h.d};
}

const char* to_string(ElementClass kind) noexcept {
  switch (kind) {
    case ElementClass::identity: return "identity";
    case ElementClass::elliptic: return "elliptic";
    case ElementClass::parabolic: return "parabolic";
    case ElementClass::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

MoebiusElement::MoebiusElement(Complex alpha, Complex beta) {
  const double det = std::norm(alpha) - std::norm(beta);
  if (!(det > 0.0) || !std::isfinite(det))
    throw Error(Errc::invalid_matrix, "|alpha|^2 - |beta|^2 must be positive");
  const double scale = 1.0 / std::sqrt(det);
  alpha *= scale;
  beta *= scale;
  if (alpha.real() < 0.0 || (alpha.real() == 0.0 && alpha.imag() < 0.0)) {
    alpha = -alpha;
    beta = -beta;
  }
  alpha_ = alpha;
  beta_ = beta;
}

MoebiusElement MoebiusElement::rotation(double s) { return {std::polar(1.0, 0.5 * s), 0.0}; }

MoebiusElement MoebiusElement::from_half_plane(const HalfPlaneMatrix& m) {
  if (!(std::abs(m.det() - 1.0) <= 1e-9))
    throw Error(Errc::invalid_matrix, "half-plane matrix must satisfy ad - bc = 1");
  const Complex alpha(0.5 * (m.a + m.d), 0.5 * (m.b - m.c));
  const Complex beta(0.5 * (m.d - m.a), 0.5 * (m.b + m.c));
  return {alpha, beta};
}

MoebiusElement MoebiusElement::hyperbolic(double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::invalid_argument, "multiplier must be positive");
  const double half = 0.5 * std::log(lambda);
  return {std::cosh(half), -std::sinh(half)};
}

MoebiusElement MoebiusElement::parabolic(double shift) {
  return from_half_plane(HalfPlaneMatrix::translation(shift));
}

MoebiusElement MoebiusElement::recentering(Complex z) {
  if (!(std::abs(z) < 1.0)) throw Error(Errc::near_boundary, "recentering point must be inside the disc");
  const double s = 1.0 / std::sqrt(1.0 - std::norm(z));
  return {s, -z * s};
}

HalfPlaneMatrix MoebiusElement::to_half_plane() const noexcept {
  return {alpha_.real() - beta_.real(), alpha_.imag() + beta_.imag(),
          beta_.imag() - alpha_.imag(), alpha_.real() + beta_.real()};
}

Complex MoebiusElement::act(Complex z) const noexcept {
  return (alpha_ * z + beta_) / (std::conj(beta_) * z + std::conj(alpha_));
}

double MoebiusElement::act_angle(double s) const noexcept {
  // g(e^{is}) = e^{is} q / conj(q) with q = alpha + beta e^{-is}.
  const Complex q = alpha_ + beta_ * std::polar(1.0, -s);
  return wrap_angle(s + 2.0 * std::arg(q));
}

double MoebiusElement::boundary_derivative(double s) const noexcept {
  return 1.0 / std::norm(alpha_ + beta_ * std::polar(1.0, -s));
}

std::vector<Complex> MoebiusElement::boundary_fixed_points() const {
  // conj(beta) z^2 - 2i Im(alpha) z - beta = 0, discriminant Re(alpha)^2 - 1.
  if (std::abs(beta_) == 0.0) return {};
  const double disc = alpha_.real() * alpha_.real() - 1.0;
  const Complex i_im(0.0, alpha_.imag());
  const Complex bc = std::conj(beta_);
  if (disc < -kClassifyTolerance) return {};
  if (disc <= kClassifyTolerance) {
    const Complex p = i_im / bc;
    return {p / std::abs(p)};
  }
  const double root = std::sqrt(disc);
  Complex p = (i_im + root) / bc;
  Complex q = (i_im - root) / bc;
  return {p / std::abs(p), q / std::abs(q)};
}

MoebiusElement compose(const MoebiusElement& g, const MoebiusElement& h) noexcept {
  const Complex a = g.alpha() * h.alpha() + g.beta() * std::conj(h.beta());
  const Complex b = g.alpha() * h.beta() + g.beta() * std::conj(h.alpha());
  return {a, b};
}

MoebiusElement inverse(const MoebiusElement& g) noexcept { return {std::conj(g.alpha()), -g.beta()}; }

MoebiusElement power(const MoebiusElement& g, long k) noexcept {
  MoebiusElement base = k < 0 ? inverse(g) : g;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  MoebiusElement result;
  while (e > 0) {
    if (e & 1UL) result = compose(result, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

MoebiusElement from_half_plane(const HalfPlaneMatrix& m) { return MoebiusElement::from_half_plane(m); }

Complex act_disc(const MoebiusElement& g, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12) throw Error(Errc::invalid_argument, "point outside the closed disc");
  return g.act(z);
}

ExtendedReal act_line(const MoebiusElement& g, ExtendedReal x) noexcept { return g.to_half_plane().act(x); }

ElementClass classify(const MoebiusElement& g, double tol) noexcept {
  const double t = std::abs(g.trace());
  if (t > 2.0 + tol) return ElementClass::hyperbolic;
  if (t < 2.0 - tol) return ElementClass::elliptic;
  if (std::abs(g.beta()) <= tol && std::abs(g.alpha().imag()) <= tol) return ElementClass::identity;
  return ElementClass::parabolic;
}

bool approx_equal(const MoebiusElement& g, const MoebiusElement& h, double tol) noexcept {
  auto close = [tol](Complex a, Complex b) { return std::abs(a - b) <= tol; };
  return (close(g.alpha(), h.alpha()) && close(g.beta(), h.beta())) ||
         (close(g.alpha(), -h.alpha()) && close(g.beta(), -h.beta()));
}

namespace {

ExtendedReal to_line(Complex p) {
  // Cayley map i(1-z)/(1+z) on the unit circle is tan(arg z / 2).
  const double s = std::arg(p);
  if (s == kPi || s == -kPi) return ExtendedReal::infinity();
  return std::tan(0.5 * s);
}

// Half-plane map taking p to 0 and q to infinity, in PSL(2,R).
HalfPlaneMatrix send_to_zero_and_infinity(ExtendedReal p, ExtendedReal q) {
  if (q.is_infinite()) return {1.0, -p.value(), 0.0, 1.0};
  if (p.is_infinite()) return {0.0, -1.0, 1.0, -q.value()};
  const double pv = p.value(), qv = q.value();
  if (pv > qv) {
    const double s = 1.0 / std::sqrt(pv - qv);
    return {s, -pv * s, s, -qv * s};
  }
  const double s = 1.0 / std::sqrt(qv - pv);
  return {-s, pv * s, s, -qv * s};
}

}  // namespace

NormalForm normal_form(const MoebiusElement& g) {
  const ElementClass kind = classify(g);
  NormalForm nf;
  nf.kind = kind;
  if (kind == ElementClass::hyperbolic) {
    auto fixed = g.boundary_fixed_points();
    Complex rep = fixed[0], att = fixed[1];
    if (g.boundary_derivative(std::arg(rep)) < g.boundary_derivative(std::arg(att))) std::swap(rep, att);
    nf.conjugator = from_half_plane(send_to_zero_and_infinity(to_line(rep), to_line(att)));
    const double t = std::abs(g.trace());
    const double root = 0.5 * (t + std::sqrt(t * t - 4.0));
    nf.multiplier = root * root;
    return nf;
  }
  if (kind == ElementClass::parabolic) {
    auto fixed = g.boundary_fixed_points();
    const ExtendedReal p = to_line(fixed.at(0));
    if (!p.is_infinite()) nf.conjugator = from_half_plane({0.0, -1.0, 1.0, -p.value()});
    const HalfPlaneMatrix n = compose(compose(nf.conjugator, g), inverse(nf.conjugator)).to_half_plane();
    nf.shift = n.b / n.d;
    return nf;
  }
  throw Error(Errc::non_divergent_sequence,
              std::string("element is ") + to_string(kind) + ", iterates stay bounded");
}

}  // namespace discdyn
