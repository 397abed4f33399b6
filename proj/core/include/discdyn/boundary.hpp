#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "discdyn/moebius.hpp"

namespace discdyn {

/// Breakpoints closer than this are merged; pieces narrower are dropped.
inline constexpr double kBreakpointResolution = 1e-14;

/// The arc {zeta e^{i t theta} : 0 <= t <= 1}. theta = 0 is a trivial arc,
/// theta = 2pi a full circle with marked start.
struct Arc {
  Complex zeta{1.0, 0.0};
  double theta = 0.0;

  Arc() = default;
  Arc(Complex zeta, double theta);
  static Arc from_angles(double start, double length);

  double start_angle() const noexcept { return wrap_angle(std::arg(zeta)); }
  double end_angle() const noexcept { return wrap_angle(std::arg(zeta) + theta); }
  bool contains(double angle) const noexcept;
};

/// Orientation-aware homeomorphism of the circle given on angles, with its
/// inverse.
class CircleMap {
 public:
  using AngleFn = std::function<double(double)>;

  CircleMap(AngleFn forward, AngleFn inverse, bool preserves_orientation = true);

  static CircleMap identity();
  static CircleMap from(const MoebiusElement& g);
  static CircleMap from(const HalfPlaneMatrix& m);
  /// h^n for hyperbolic or parabolic h, evaluated through the normal form so
  /// large powers stay accurate. Other classes fall back to power().
  static CircleMap power_of(const MoebiusElement& h, long n);

  double operator()(double s) const { return wrap_angle(forward_(s)); }
  double inverse(double s) const { return wrap_angle(inverse_(s)); }
  bool preserves_orientation() const noexcept { return preserves_orientation_; }
  CircleMap inverted() const { return {inverse_, forward_, preserves_orientation_}; }

  /// Image of an arc; the image is traversed from the image of the start in
  /// the positive sense (so for reversing maps it starts at the image of the end).
  Arc image(const Arc& x) const;

 private:
  AngleFn forward_;
  AngleFn inverse_;
  bool preserves_orientation_;
};

/// a ∘ b
CircleMap compose(const CircleMap& a, const CircleMap& b);

/// Piecewise-constant complex function on S^1, right-continuous:
/// values()[i] holds on [breakpoints()[i], breakpoints()[i+1]) and the last
/// value wraps around to the first breakpoint. No breakpoints means constant.
///
/// The representation is canonical: pieces narrower than
/// kBreakpointResolution are dropped and equal neighbours merged.
class StepFunction {
 public:
  StepFunction() : values_{Complex{}} {}
  explicit StepFunction(Complex constant) : values_{constant} {}
  StepFunction(std::vector<double> breakpoints, std::vector<Complex> values);

  static StepFunction indicator(const Arc& arc, Complex value = 1.0);
  static StepFunction indicator(std::span<const Arc> disjoint_arcs);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  std::size_t pieces() const noexcept { return values_.size(); }
  bool is_constant() const noexcept { return breakpoints_.empty(); }

  double piece_start(std::size_t i) const;
  double piece_length(std::size_t i) const;

  Complex operator()(double angle) const;

  double sup_norm() const noexcept;
  /// ∫_0^{2pi} f(s) ds.
  Complex integral() const noexcept;
  /// ∫_0^{2pi} |f(s)| ds.
  double l1_norm() const noexcept;
  /// Centre of the bounding box of the values and sup |f - centre|.
  Complex spread_center() const noexcept;
  double spread() const noexcept;
  bool is_real() const noexcept;

  /// f ∘ h.
  StepFunction pull_back(const CircleMap& h) const;
  /// f · 1_{arcs}; arcs are assumed disjoint.
  StepFunction restricted(std::span<const Arc> arcs) const;
  StepFunction map_values(const std::function<Complex(Complex)>& fn) const;

  friend StepFunction operator+(const StepFunction& f, const StepFunction& h);
  friend StepFunction operator-(const StepFunction& f, const StepFunction& h);
  friend StepFunction operator*(const StepFunction& f, const StepFunction& h);
  friend StepFunction operator*(Complex c, const StepFunction& f);

 private:
  void canonicalize();
  std::vector<double> breakpoints_;
  std::vector<Complex> values_;
};

/// A step function with sup |f| <= 1, i.e. an element of the unit ball of
/// L^inf(S^1).
class BoundaryFunction : public StepFunction {
 public:
  BoundaryFunction() = default;
  explicit BoundaryFunction(Complex constant);
  BoundaryFunction(std::vector<double> breakpoints, std::vector<Complex> values);
  /// Throws Error(invalid_argument) when sup |f| > 1 + 1e-12.
  explicit BoundaryFunction(StepFunction f);
};

BoundaryFunction indicator(const Arc& arc);
/// f ∘ g. For the group action (g, f) -> f ∘ g^{-1} pass inverse(g).
BoundaryFunction compose_with_moebius(const BoundaryFunction& f, const MoebiusElement& g);
/// ∫_0^{2pi} |f - h| ds, exact on the merged partition.
double l1_distance(const StepFunction& f, const StepFunction& h);

/// Boundary data known exactly through an evaluator, materialized as a finite
/// step function off a set of unresolved arcs. On the unresolved arcs the
/// materialization may differ from the evaluator by at most defect_bound.
struct LazyBoundaryFunction {
  std::function<Complex(double)> evaluator;
  BoundaryFunction materialized;
  std::vector<Arc> unresolved;
  double tail_bound = 1.0;    // sup |evaluator| on the unresolved arcs
  double defect_bound = 1.0;  // sup |evaluator - materialized| there

  Complex operator()(double angle) const { return evaluator(angle); }
  double unresolved_length() const noexcept;
  /// Upper bound for ∫ |evaluator - materialized|.
  double l1_defect_bound() const noexcept { return defect_bound * unresolved_length(); }
  /// f ∘ h for both the evaluator and the materialization.
  LazyBoundaryFunction pull_back(const CircleMap& h) const;
};

/// Cayley correspondence z -> i(1-z)/(1+z) between S^1 and R ∪ {∞}.
ExtendedReal cayley(Complex z);
Complex cayley_inv(ExtendedReal x) noexcept;
ExtendedReal line_from_angle(double s) noexcept;
double angle_from_line(ExtendedReal x) noexcept;

/// Closed interval of the extended line. An infinite lo means -∞, an
/// infinite hi means +∞; both infinite is the whole line.
struct LineInterval {
  ExtendedReal lo;
  ExtendedReal hi;
};

Arc to_arc(const LineInterval& interval);

struct LineSegment {
  LineInterval interval;
  Complex value;
};

/// Throws Error(invalid_partition) for overlapping intervals.
BoundaryFunction from_line_segments(std::span<const LineSegment> segments);
/// Total S^1 arclength of the Cayley preimage of disjoint intervals.
double arc_length_of_region(std::span<const LineInterval> intervals);

/// JSON form {"breakpoints":[...],"values":[[re,im],...]}, 17 significant digits.
std::string to_json(const StepFunction& f);
BoundaryFunction boundary_from_json(const std::string& text);
BoundaryFunction read_boundary_file(const std::string& path);

}  // namespace discdyn
