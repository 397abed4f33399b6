#pragma once

#include <vector>

#include "discdyn/boundary.hpp"

namespace discdyn {

/// (1 - |z|^2) / |e^{is} - z|^2. Throws Error(near_boundary) for |z| > 1 - 1e-12.
double poisson_kernel(Complex z, double s);

/// Harmonic measure at z of the arc [start, start + length]: the Poisson
/// integral of its indicator, in closed form.
double harmonic_measure(Complex z, double start, double length);

/// Poisson extension of piecewise-constant data, exact per piece.
/// Throws Error(near_boundary) for |z| > 1 - 1e-9.
Complex extend(const StepFunction& f, Complex z);

/// Harmonic conjugate of real data normalized to vanish at 0 (imaginary part
/// of the Schwarz integral). Throws Error(invalid_argument) for complex data.
double harmonic_conjugate(const StepFunction& f, Complex z);

/// Poisson extension of boundary data. The data may be the materialization of
/// a lazily known function; sup_defect and l1_defect bound its distance to the
/// true data in L^inf and L^1 and feed the metric error bars.
class HarmonicFunction {
 public:
  HarmonicFunction() = default;
  explicit HarmonicFunction(StepFunction boundary, double sup_defect = 0.0, double l1_defect = 0.0);
  static HarmonicFunction from_lazy(const LazyBoundaryFunction& f);

  const StepFunction& boundary() const noexcept { return boundary_; }
  double sup_defect() const noexcept { return sup_defect_; }
  double l1_defect() const noexcept { return l1_defect_; }

  Complex operator()(Complex z) const { return extend(boundary_, z); }
  /// Boundary data transported by g: the extension of f ∘ g^{-1}.
  HarmonicFunction acted_by(const MoebiusElement& g) const;

  friend HarmonicFunction operator-(const HarmonicFunction& a, const HarmonicFunction& b);

 private:
  StepFunction boundary_;
  double sup_defect_ = 0.0;
  double l1_defect_ = 0.0;
};

/// K_n = {|z| <= 1 - 1/n}, n = 1..n_max.
struct CompactExhaustion {
  int n_max = 40;
  /// Target for each weighted term sup_{K_n}|phi| / (n^2 2^n).
  double term_tolerance = 1e-13;
  /// Evaluation budget per circle; exhausting it widens the bracket only.
  int max_evaluations = 400000;

  double radius(int n) const noexcept { return 1.0 - 1.0 / n; }
  double weight(int n) const noexcept;
};

/// Certified value: the true quantity lies in [value - error_bar, value + error_bar].
struct MetricValue {
  double value = 0.0;
  double error_bar = 0.0;
  double lower() const noexcept { return value - error_bar; }
  double upper() const noexcept { return value + error_bar; }
};

/// Bracket [lower, upper] for sup_t |P[f](r e^{it})|.
struct SupBracket {
  double lower = 0.0;
  double upper = 0.0;
  long evaluations = 0;
};

/// Branch-and-bound over angles with a rigorous bound on the second angular
/// derivative; stops once upper - lower <= tol or the budget is spent.
SupBracket circle_sup(const StepFunction& f, double r, double tol, long max_evaluations = 400000);

MetricValue metric_norm(const HarmonicFunction& phi, const CompactExhaustion& ex = {});
MetricValue metric_distance(const HarmonicFunction& a, const HarmonicFunction& b, const CompactExhaustion& ex = {});

/// |five-point Laplacian| at z with step h. Throws Error(stencil_outside_disc)
/// unless |z| + 2h <= 1 - 1e-6.
double harmonicity_residual(const HarmonicFunction& phi, Complex z, double h);

/// Central-difference Cauchy-Riemann defect of Re phi + i conj(Re phi) at z,
/// the max of |d_x conj + d_y u| and |d_y conj - d_x u|.
double cauchy_riemann_residual(const StepFunction& real_data, Complex z, double h);

struct LimitRow {
  long n = 0;
  double oscillation = 0.0;  // upper bound for sup_{K_3} |g^n.phi - g^n.phi(0)|
  Complex value;             // g^n.phi(0)
};

/// Rows n = 0..n_max for the orbit g^n . phi. Throws
/// Error(non_divergent_sequence) unless g is hyperbolic or parabolic.
std::vector<LimitRow> limit_diagnostic(const StepFunction& f, const MoebiusElement& g, long n_max);

}  // namespace discdyn
