#include "discdyn/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "discdyn/error.hpp"
#include "discdyn/parallel.hpp"

namespace discdyn {

namespace {

void require_interior(Complex z, double margin) {
  const double m = std::abs(z);
  if (!std::isfinite(m)) throw Error(Errc::invalid_argument, "non-finite point");
  if (m > 1.0 - margin) throw Error(Errc::near_boundary, "point too close to the unit circle");
}

}  // namespace

double poisson_kernel(Complex z, double s) {
  require_interior(z, 1e-12);
  return (1.0 - std::norm(z)) / std::norm(std::polar(1.0, s) - z);
}

double harmonic_measure(Complex z, double start, double length) {
  if (length <= 0.0) return 0.0;
  if (length >= kTwoPi) return 1.0;
  // d/ds [2 arg(e^{is} - z) - s] is the Poisson kernel, and the measure lies
  // in [0, 1], which pins the arg increment to [length/2, length/2 + pi].
  const Complex e1 = std::polar(1.0, start) - z;
  const Complex e2 = std::polar(1.0, start + length) - z;
  const double p = std::arg(e2 * std::conj(e1));
  const double delta = p + kTwoPi * std::round((0.5 * length + 0.5 * kPi - p) / kTwoPi);
  return std::clamp(delta / kPi - length / kTwoPi, 0.0, 1.0);
}

Complex extend(const StepFunction& f, Complex z) {
  require_interior(z, 1e-9);
  if (f.is_constant()) return f.values()[0];
  Complex sum{};
  for (std::size_t i = 0; i < f.pieces(); ++i)
    sum += f.values()[i] * harmonic_measure(z, f.piece_start(i), f.piece_length(i));
  return sum;
}

double harmonic_conjugate(const StepFunction& f, Complex z) {
  if (!f.is_real()) throw Error(Errc::invalid_argument, "harmonic conjugate needs real boundary data");
  require_interior(z, 1e-9);
  if (f.is_constant()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    const double s0 = f.piece_start(i);
    const double s1 = s0 + f.piece_length(i);
    sum += f.values()[i].real() * std::log(std::abs(std::polar(1.0, s1) - z) / std::abs(std::polar(1.0, s0) - z));
  }
  return -sum / kPi;
}

// ---------------------------------------------------------------------------

HarmonicFunction::HarmonicFunction(StepFunction boundary, double sup_defect, double l1_defect)
    : boundary_(std::move(boundary)), sup_defect_(sup_defect), l1_defect_(l1_defect) {}

HarmonicFunction HarmonicFunction::from_lazy(const LazyBoundaryFunction& f) {
  return HarmonicFunction(f.materialized, f.unresolved.empty() ? 0.0 : f.defect_bound, f.l1_defect_bound());
}

HarmonicFunction HarmonicFunction::acted_by(const MoebiusElement& g) const {
  // The L^1 defect is not Moebius invariant; only the sup survives.
  return HarmonicFunction(boundary_.pull_back(CircleMap::from(inverse(g))), sup_defect_,
                          sup_defect_ > 0.0 ? kTwoPi * sup_defect_ : 0.0);
}

HarmonicFunction operator-(const HarmonicFunction& a, const HarmonicFunction& b) {
  return HarmonicFunction(a.boundary_ - b.boundary_, a.sup_defect_ + b.sup_defect_, a.l1_defect_ + b.l1_defect_);
}

double CompactExhaustion::weight(int n) const noexcept {
  return std::ldexp(1.0 / (static_cast<double>(n) * n), -n);
}

// ---------------------------------------------------------------------------

SupBracket circle_sup(const StepFunction& f, double r, double tol, long max_evaluations) {
  if (f.is_constant() || r == 0.0) {
    const double v = std::abs(extend(f, 0.0));
    return {v, v, 1};
  }
  const double l1 = f.l1_norm();
  // Hard ceilings: maximum principle and the kernel bound (1+r)/(1-r).
  const double ceiling = std::min(f.sup_norm(), (1.0 + r) / (1.0 - r) * l1 / kTwoPi);

  // Second angular derivative of t -> P[f](r e^{it}). Two bounds:
  // (2/pi)|P_r'(t*)| sup|f - c|, from the total variation of P_r', and
  // sup|P_r''| ∫|f| / 2pi with sup|P_r''| = |P_r''(0)|.
  const double q = 1.0 + r * r;
  const double cos_star = (-q + std::sqrt(q * q + 32.0 * r * r)) / (4.0 * r);
  const double sin_star = std::sqrt(std::max(0.0, 1.0 - cos_star * cos_star));
  const double den = q - 2.0 * r * cos_star;
  const double dp_max = 2.0 * r * (1.0 - r * r) * sin_star / (den * den);
  const double d2p_max = 2.0 * r * (1.0 + r) / std::pow(1.0 - r, 3);
  const double l2 = std::min(f.spread() * dp_max * 2.0 / kPi, d2p_max * l1 / kTwoPi);

  auto eval = [&](double t) { return std::abs(extend(f, std::polar(r, t))); };

  struct Cell {
    double a, b, fa, fb, upper;
    bool operator<(const Cell& o) const { return upper < o.upper; }
  };
  auto make = [&](double a, double b, double fa, double fb, double parent) {
    const double h = b - a;
    return Cell{a, b, fa, fb, std::min({std::max(fa, fb) + l2 * h * h / 8.0, parent, ceiling})};
  };

  constexpr int kGrid = 256;
  std::vector<double> grid(kGrid + 1);
  for (int j = 0; j < kGrid; ++j) grid[j] = eval(kTwoPi * j / kGrid);
  grid[kGrid] = grid[0];
  long evaluations = kGrid;
  double lower = *std::max_element(grid.begin(), grid.end());
  std::priority_queue<Cell> heap;
  for (int j = 0; j < kGrid; ++j)
    heap.push(make(kTwoPi * j / kGrid, kTwoPi * (j + 1) / kGrid, grid[j], grid[j + 1], ceiling));

  double upper = lower;
  while (!heap.empty()) {
    const Cell top = heap.top();
    if (top.upper - lower <= tol || evaluations >= max_evaluations) {
      upper = std::max(lower, top.upper);
      break;
    }
    heap.pop();
    const double m = 0.5 * (top.a + top.b);
    const double fm = eval(m);
    ++evaluations;
    lower = std::max(lower, fm);
    heap.push(make(top.a, m, top.fa, fm, top.upper));
    heap.push(make(m, top.b, fm, top.fb, top.upper));
  }
  return {lower, std::max(upper, lower), evaluations};
}

MetricValue metric_norm(const HarmonicFunction& phi, const CompactExhaustion& ex) {
  if (ex.n_max < 1) throw Error(Errc::invalid_argument, "exhaustion needs n_max >= 1");
  const StepFunction& f = phi.boundary();
  std::vector<SupBracket> terms(static_cast<std::size_t>(ex.n_max));
  parallel_for(terms.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    if (n == 1) {
      const double v = std::abs(extend(f, 0.0));
      terms[i] = {v, v, 1};
      return;
    }
    terms[i] = circle_sup(f, ex.radius(n), ex.term_tolerance / ex.weight(n), ex.max_evaluations);
  });
  // Fixed-order reduction keeps the result independent of the worker count.
  MetricValue out;
  const double sup = f.sup_norm();
  for (int n = 1; n <= ex.n_max; ++n) {
    const SupBracket& b = terms[static_cast<std::size_t>(n) - 1];
    const double w = ex.weight(n);
    out.value += w * 0.5 * (b.lower + b.upper);
    out.error_bar += w * (0.5 * (b.upper - b.lower) + 1e-14 * sup);
    if (phi.sup_defect() > 0.0 || phi.l1_defect() > 0.0)
      out.error_bar += w * std::min(phi.sup_defect(), (2.0 * n - 1.0) * phi.l1_defect() / kTwoPi);
  }
  out.error_bar += (sup + phi.sup_defect()) * std::ldexp(1.0, -ex.n_max);
  return out;
}

MetricValue metric_distance(const HarmonicFunction& a, const HarmonicFunction& b, const CompactExhaustion& ex) {
  return metric_norm(a - b, ex);
}

double harmonicity_residual(const HarmonicFunction& phi, Complex z, double h) {
  if (!(h > 0.0) || std::abs(z) + 2.0 * h > 1.0 - 1e-6)
    throw Error(Errc::stencil_outside_disc, "finite-difference stencil leaves the disc");
  const Complex i{0.0, 1.0};
  const Complex lap = phi(z + h) + phi(z - h) + phi(z + i * h) + phi(z - i * h) - 4.0 * phi(z);
  return std::abs(lap) / (h * h);
}

double cauchy_riemann_residual(const StepFunction& f, Complex z, double h) {
  if (!(h > 0.0) || std::abs(z) + 2.0 * h > 1.0 - 1e-6)
    throw Error(Errc::stencil_outside_disc, "finite-difference stencil leaves the disc");
  const Complex i{0.0, 1.0};
  auto u = [&](Complex w) { return extend(f, w).real(); };
  auto v = [&](Complex w) { return harmonic_conjugate(f, w); };
  const double ux = (u(z + h) - u(z - h)) / (2.0 * h);
  const double uy = (u(z + i * h) - u(z - i * h)) / (2.0 * h);
  const double vx = (v(z + h) - v(z - h)) / (2.0 * h);
  const double vy = (v(z + i * h) - v(z - i * h)) / (2.0 * h);
  return std::max(std::abs(vx + uy), std::abs(vy - ux));
}

std::vector<LimitRow> limit_diagnostic(const StepFunction& f, const MoebiusElement& g, long n_max) {
  const ElementClass kind = classify(g);
  if (kind != ElementClass::hyperbolic && kind != ElementClass::parabolic)
    throw Error(Errc::non_divergent_sequence, std::string("element is ") + to_string(kind) + ", iterates stay bounded");
  std::vector<LimitRow> rows;
  constexpr double kRadius = 2.0 / 3.0;  // K_3
  for (long n = 0; n <= n_max; ++n) {
    StepFunction moved;
    try {
      moved = f.pull_back(CircleMap::power_of(g, -n));
    } catch (const Error& e) {
      if (e.code() == Errc::resolution) break;
      throw;
    }
    const Complex mean = moved.integral() / kTwoPi;
    const SupBracket osc = circle_sup(moved - StepFunction(mean), kRadius, 1e-10);
    rows.push_back({n, osc.upper, mean});
  }
  return rows;
}

}  // namespace discdyn
