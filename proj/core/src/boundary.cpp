#include "discdyn/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "discdyn/error.hpp"

namespace discdyn {

namespace {

// Positive-sense angular distance from a to b in [0, 2pi). A result within
// rounding of 2pi means the points coincide.
double ccw_distance(double a, double b) {
  double d = wrap_angle(b - a);
  if (d > kTwoPi - 1e-13) d = 0.0;
  return d;
}

}  // namespace

Arc::Arc(Complex z, double t) : zeta(z), theta(t) {
  if (!std::isfinite(t) || t < 0.0 || t > kTwoPi + 1e-12)
    throw Error(Errc::invalid_argument, "arc length must lie in [0, 2pi]");
  const double m = std::abs(z);
  if (!std::isfinite(m) || std::abs(m - 1.0) > 1e-12)
    throw Error(Errc::invalid_argument, "arc start must lie on the unit circle");
  zeta = z / m;
  theta = std::min(t, kTwoPi);
}

Arc Arc::from_angles(double start, double length) { return {std::polar(1.0, start), length}; }

bool Arc::contains(double angle) const noexcept {
  if (theta >= kTwoPi) return true;
  return wrap_angle(angle - start_angle()) <= theta;
}

// ---------------------------------------------------------------------------

CircleMap::CircleMap(AngleFn forward, AngleFn inverse, bool preserves_orientation)
    : forward_(std::move(forward)), inverse_(std::move(inverse)), preserves_orientation_(preserves_orientation) {}

CircleMap CircleMap::identity() {
  auto id = [](double s) { return s; };
  return {id, id, true};
}

CircleMap CircleMap::from(const MoebiusElement& g) {
  const MoebiusElement gi = discdyn::inverse(g);
  return {[g](double s) { return g.act_angle(s); }, [gi](double s) { return gi.act_angle(s); }, true};
}

CircleMap CircleMap::from(const HalfPlaneMatrix& m) {
  if (!(m.det() > 0.0)) throw Error(Errc::invalid_matrix, "half-plane matrix must have positive determinant");
  const HalfPlaneMatrix mi = m.inverse();
  return {[m](double s) { return m.act_angle(s); }, [mi](double s) { return mi.act_angle(s); }, true};
}

CircleMap CircleMap::power_of(const MoebiusElement& h, long n) {
  const ElementClass kind = classify(h);
  if (kind != ElementClass::hyperbolic && kind != ElementClass::parabolic) return from(power(h, n));
  const NormalForm nf = normal_form(h);
  HalfPlaneMatrix core;
  if (kind == ElementClass::hyperbolic) {
    const double exponent = static_cast<double>(n) * std::log(nf.multiplier);
    if (std::abs(exponent) > 1400.0) throw Error(Errc::resolution, "power exceeds double range");
    const double r = std::exp(0.5 * exponent);
    core = {r, 0.0, 0.0, 1.0 / r};
  } else {
    core = HalfPlaneMatrix::translation(static_cast<double>(n) * nf.shift);
  }
  const HalfPlaneMatrix c = nf.conjugator.to_half_plane();
  const HalfPlaneMatrix ci = c.inverse();
  const HalfPlaneMatrix core_inv = core.inverse();
  return {[=](double s) { return ci.act_angle(core.act_angle(c.act_angle(s))); },
          [=](double s) { return ci.act_angle(core_inv.act_angle(c.act_angle(s))); }, true};
}

Arc CircleMap::image(const Arc& x) const {
  if (x.theta <= 0.0) return Arc::from_angles((*this)(x.start_angle()), 0.0);
  const double a = x.start_angle();
  const double m = a + 0.5 * x.theta;
  const double b = a + x.theta;
  const double fa = (*this)(a), fm = (*this)(m), fb = (*this)(b);
  if (x.theta >= kTwoPi) return Arc::from_angles(preserves_orientation_ ? fa : fb, kTwoPi);
  if (preserves_orientation_) return Arc::from_angles(fa, std::min(kTwoPi, ccw_distance(fa, fm) + ccw_distance(fm, fb)));
  return Arc::from_angles(fb, std::min(kTwoPi, ccw_distance(fb, fm) + ccw_distance(fm, fa)));
}

CircleMap compose(const CircleMap& a, const CircleMap& b) {
  return {[a, b](double s) { return a(b(s)); }, [a, b](double s) { return b.inverse(a.inverse(s)); },
          a.preserves_orientation() == b.preserves_orientation()};
}

// ---------------------------------------------------------------------------

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<Complex> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty()) throw Error(Errc::invalid_partition, "step function needs at least one value");
  if (breakpoints_.empty()) {
    if (values_.size() != 1) throw Error(Errc::invalid_partition, "constant function takes exactly one value");
  } else if (breakpoints_.size() != values_.size()) {
    throw Error(Errc::invalid_partition, "need one value per breakpoint");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    if (!std::isfinite(b) || b < 0.0 || b >= kTwoPi)
      throw Error(Errc::invalid_partition, "breakpoints must lie in [0, 2pi)");
    if (i > 0 && !(b > breakpoints_[i - 1])) throw Error(Errc::invalid_partition, "breakpoints must increase");
  }
  for (const Complex& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(Errc::invalid_argument, "step values must be finite");
  canonicalize();
}

void StepFunction::canonicalize() {
  // Drop pieces narrower than the resolution; the predecessor absorbs them.
  bool changed = true;
  while (changed && breakpoints_.size() > 1) {
    changed = false;
    const std::size_t m = breakpoints_.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double next = (i + 1 < m) ? breakpoints_[i + 1] : breakpoints_[0] + kTwoPi;
      if (next - breakpoints_[i] < kBreakpointResolution) {
        breakpoints_.erase(breakpoints_.begin() + static_cast<long>(i));
        values_.erase(values_.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  // Merge equal cyclic neighbours.
  std::vector<double> b;
  std::vector<Complex> v;
  const std::size_t m = breakpoints_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Complex& prev = values_[(i + m - 1) % m];
    if (values_[i] == prev) continue;
    b.push_back(breakpoints_[i]);
    v.push_back(values_[i]);
  }
  if (b.size() <= 1) {
    const Complex c = values_.front();
    breakpoints_.clear();
    values_.assign(1, c);
    return;
  }
  breakpoints_ = std::move(b);
  values_ = std::move(v);
}

StepFunction StepFunction::indicator(const Arc& arc, Complex value) {
  if (arc.theta < kBreakpointResolution) return StepFunction();
  if (arc.theta > kTwoPi - kBreakpointResolution) return StepFunction(value);
  const double s = arc.start_angle();
  const double e = wrap_angle(s + arc.theta);
  if (s < e) return {{s, e}, {value, 0.0}};
  return {{e, s}, {0.0, value}};
}

StepFunction StepFunction::indicator(std::span<const Arc> arcs) {
  StepFunction sum;
  for (const Arc& a : arcs) sum = sum + indicator(a);
  return sum.map_values([](Complex c) { return c == Complex{} ? Complex{} : Complex{1.0}; });
}

double StepFunction::piece_start(std::size_t i) const { return breakpoints_.empty() ? 0.0 : breakpoints_.at(i); }

double StepFunction::piece_length(std::size_t i) const {
  if (breakpoints_.empty()) return kTwoPi;
  const std::size_t m = breakpoints_.size();
  const double next = (i + 1 < m) ? breakpoints_[i + 1] : breakpoints_[0] + kTwoPi;
  return next - breakpoints_.at(i);
}

Complex StepFunction::operator()(double angle) const {
  if (breakpoints_.empty()) return values_[0];
  const double s = wrap_angle(angle);
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  if (it == breakpoints_.begin()) return values_.back();
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::sup_norm() const noexcept {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

Complex StepFunction::integral() const noexcept {
  Complex sum{};
  for (std::size_t i = 0; i < values_.size(); ++i) sum += values_[i] * piece_length(i);
  return sum;
}

double StepFunction::l1_norm() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) sum += std::abs(values_[i]) * piece_length(i);
  return sum;
}

Complex StepFunction::spread_center() const noexcept {
  double lo_r = values_[0].real(), hi_r = lo_r, lo_i = values_[0].imag(), hi_i = lo_i;
  for (const Complex& v : values_) {
    lo_r = std::min(lo_r, v.real());
    hi_r = std::max(hi_r, v.real());
    lo_i = std::min(lo_i, v.imag());
    hi_i = std::max(hi_i, v.imag());
  }
  return {0.5 * (lo_r + hi_r), 0.5 * (lo_i + hi_i)};
}

double StepFunction::spread() const noexcept {
  const Complex c = spread_center();
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v - c));
  return m;
}

bool StepFunction::is_real() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) { return v.imag() == 0.0; });
}

StepFunction StepFunction::pull_back(const CircleMap& h) const {
  if (breakpoints_.empty()) return *this;
  const std::size_t m = breakpoints_.size();
  // Pieces of f ∘ h are the preimages of the pieces of f, listed in positive
  // cyclic order as (start angle, value).
  std::vector<double> t(m);
  std::vector<Complex> v(m);
  if (h.preserves_orientation()) {
    for (std::size_t i = 0; i < m; ++i) {
      t[i] = h.inverse(breakpoints_[i]);
      v[i] = values_[i];
    }
  } else {
    // Piece [b_i, b_{i+1}) pulls back to [h^{-1} b_{i+1}, h^{-1} b_i).
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = m - 1 - j;
      t[j] = h.inverse(breakpoints_[(i + 1) % m]);
      v[j] = values_[i];
    }
  }
  // Unwrap into a non-decreasing sequence spanning at most one turn.
  std::vector<double> u(m);
  u[0] = t[0];
  for (std::size_t i = 1; i < m; ++i) u[i] = std::min(u[i - 1] + ccw_distance(t[i - 1], t[i]), u[0] + kTwoPi);
  // Rotate so the breakpoints come out sorted in [0, 2pi).
  std::size_t r = m;
  for (std::size_t i = 1; i < m; ++i)
    if (u[i] >= kTwoPi) {
      r = i;
      break;
    }
  std::vector<double> nb;
  std::vector<Complex> nv;
  nb.reserve(m);
  nv.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = (r + k) % m;
    double a = (i >= r) ? u[i] - kTwoPi : u[i];
    a = std::clamp(a, 0.0, std::nextafter(kTwoPi, 0.0));
    if (!nb.empty() && a <= nb.back()) {
      // Collapsed piece: the later value takes over.
      nv.back() = v[i];
      continue;
    }
    nb.push_back(a);
    nv.push_back(v[i]);
  }
  if (nb.size() == 1) return StepFunction(nv[0]);
  return {std::move(nb), std::move(nv)};
}

StepFunction StepFunction::restricted(std::span<const Arc> arcs) const { return *this * indicator(arcs); }

StepFunction StepFunction::map_values(const std::function<Complex(Complex)>& fn) const {
  StepFunction out = *this;
  for (Complex& v : out.values_) v = fn(v);
  out.canonicalize();
  return out;
}

namespace {

template <class Op>
StepFunction combine(const StepFunction& f, const StepFunction& h, Op op) {
  if (f.is_constant() && h.is_constant()) return StepFunction(op(f.values()[0], h.values()[0]));
  std::vector<double> b;
  b.reserve(f.breakpoints().size() + h.breakpoints().size());
  std::merge(f.breakpoints().begin(), f.breakpoints().end(), h.breakpoints().begin(), h.breakpoints().end(),
             std::back_inserter(b));
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<Complex> v;
  v.reserve(b.size());
  for (double s : b) v.push_back(op(f(s), h(s)));
  return {std::move(b), std::move(v)};
}

}  // namespace

StepFunction operator+(const StepFunction& f, const StepFunction& h) {
  return combine(f, h, [](Complex a, Complex b) { return a + b; });
}
StepFunction operator-(const StepFunction& f, const StepFunction& h) {
  return combine(f, h, [](Complex a, Complex b) { return a - b; });
}
StepFunction operator*(const StepFunction& f, const StepFunction& h) {
  return combine(f, h, [](Complex a, Complex b) { return a * b; });
}
StepFunction operator*(Complex c, const StepFunction& f) {
  return f.map_values([c](Complex v) { return c * v; });
}

// ---------------------------------------------------------------------------

BoundaryFunction::BoundaryFunction(Complex constant) : BoundaryFunction(StepFunction(constant)) {}

BoundaryFunction::BoundaryFunction(std::vector<double> breakpoints, std::vector<Complex> values)
    : BoundaryFunction(StepFunction(std::move(breakpoints), std::move(values))) {}

BoundaryFunction::BoundaryFunction(StepFunction f) : StepFunction(std::move(f)) {
  if (sup_norm() > 1.0 + 1e-12) throw Error(Errc::invalid_argument, "boundary function must satisfy sup |f| <= 1");
}

BoundaryFunction indicator(const Arc& arc) { return BoundaryFunction(StepFunction::indicator(arc)); }

BoundaryFunction compose_with_moebius(const BoundaryFunction& f, const MoebiusElement& g) {
  return BoundaryFunction(f.pull_back(CircleMap::from(g)));
}

double l1_distance(const StepFunction& f, const StepFunction& h) { return (f - h).l1_norm(); }

double LazyBoundaryFunction::unresolved_length() const noexcept {
  double sum = 0.0;
  for (const Arc& a : unresolved) sum += a.theta;
  return std::min(sum, kTwoPi);
}

LazyBoundaryFunction LazyBoundaryFunction::pull_back(const CircleMap& h) const {
  LazyBoundaryFunction out;
  auto ev = evaluator;
  out.evaluator = [ev, h](double s) { return ev(h(s)); };
  out.materialized = BoundaryFunction(materialized.pull_back(h));
  const CircleMap hi = h.inverted();
  out.unresolved.reserve(unresolved.size());
  for (const Arc& a : unresolved) out.unresolved.push_back(hi.image(a));
  out.tail_bound = tail_bound;
  out.defect_bound = defect_bound;
  return out;
}

// ---------------------------------------------------------------------------

ExtendedReal cayley(Complex z) {
  const double m = std::abs(z);
  if (!std::isfinite(m) || std::abs(m - 1.0) > 1e-12)
    throw Error(Errc::invalid_argument, "Cayley map is applied to points of the unit circle");
  return line_from_angle(std::arg(z));
}

Complex cayley_inv(ExtendedReal x) noexcept {
  if (x.is_infinite()) return -1.0;
  // (1 + ix) / (1 - ix), exact at x = 0.
  const double x2 = x.value() * x.value();
  return Complex(1.0 - x2, 2.0 * x.value()) / (1.0 + x2);
}

ExtendedReal line_from_angle(double s) noexcept {
  const double w = wrap_angle(s);
  if (w == kPi) return ExtendedReal::infinity();
  return std::tan(0.5 * w);
}

double angle_from_line(ExtendedReal x) noexcept {
  if (x.is_infinite()) return kPi;
  return wrap_angle(2.0 * std::atan(x.value()));
}

namespace {

// Angles of the closed interval in (-pi, pi]: lo maps to start, hi to end.
std::pair<double, double> interval_angles(const LineInterval& iv) {
  const double lo = iv.lo.is_infinite() ? -kPi : 2.0 * std::atan(iv.lo.value());
  const double hi = iv.hi.is_infinite() ? kPi : 2.0 * std::atan(iv.hi.value());
  if (!(lo <= hi)) throw Error(Errc::invalid_partition, "interval endpoints out of order");
  return {lo, hi};
}

void check_disjoint(std::vector<std::pair<double, double>> spans) {
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first < spans[i - 1].second) throw Error(Errc::invalid_partition, "line intervals overlap");
}

}  // namespace

Arc to_arc(const LineInterval& interval) {
  const auto [lo, hi] = interval_angles(interval);
  return Arc::from_angles(lo, hi - lo);
}

BoundaryFunction from_line_segments(std::span<const LineSegment> segments) {
  std::vector<std::pair<double, double>> spans;
  for (const LineSegment& s : segments) spans.push_back(interval_angles(s.interval));
  check_disjoint(spans);
  StepFunction sum;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (std::abs(segments[i].value) > 1.0 + 1e-12)
      throw Error(Errc::invalid_argument, "segment values must lie in the closed unit disc");
    sum = sum + StepFunction::indicator(Arc::from_angles(spans[i].first, spans[i].second - spans[i].first),
                                        segments[i].value);
  }
  return BoundaryFunction(sum);
}

double arc_length_of_region(std::span<const LineInterval> intervals) {
  std::vector<std::pair<double, double>> spans;
  double total = 0.0;
  for (const LineInterval& iv : intervals) {
    spans.push_back(interval_angles(iv));
    total += spans.back().second - spans.back().first;
  }
  check_disjoint(spans);
  return total;
}

}  // namespace discdyn
