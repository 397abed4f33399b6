#include "discdyn/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discdyn/arcspace.hpp"
#include "discdyn/error.hpp"

namespace discdyn {

namespace {

// Smallest d >= 1 with lambda^d > target, confirmed with pow on both sides.
// The relative margin keeps the strict inequality robust when lambda carries
// rounding from a trace (2^4 > 16 must fail for lambda = 2 + 1 ulp).
long minimal_exponent(double lambda, double target) {
  const double t = target * (1.0 + 1e-12);
  long d = std::max(1L, static_cast<long>(std::floor(std::log(t) / std::log(lambda))) + 1);
  while (d > 1 && std::pow(lambda, static_cast<double>(d - 1)) > t) --d;
  while (!(std::pow(lambda, static_cast<double>(d)) > t)) ++d;
  return d;
}

double min_piece_length(const StepFunction& f) {
  double m = kTwoPi;
  for (std::size_t i = 0; i < f.pieces(); ++i) m = std::min(m, f.piece_length(i));
  return m;
}

// Arc of the extended line between x = -h and x = h through 0.
Arc arc_around_zero(double h) { return Arc::from_angles(-2.0 * std::atan(h), 4.0 * std::atan(h)); }
// Arc of |x| >= h through infinity.
Arc arc_around_infinity(double h) { return Arc::from_angles(2.0 * std::atan(h), kTwoPi - 4.0 * std::atan(h)); }

constexpr int kMaxHyperbolicLevels = 4000;
constexpr int kMaxParabolicLevels = 20000;

}  // namespace

// ---------------------------------------------------------------------------

DenseOrbitSchedule make_schedule(double lambda, int levels) {
  if (!std::isfinite(lambda) || !(lambda > 1.0 + 1e-9))
    throw Error(Errc::not_hyperbolic, "dense schedule needs a multiplier lambda > 1");
  if (levels < 1) throw Error(Errc::invalid_argument, "schedule needs at least one level");
  DenseOrbitSchedule s;
  s.kind = ElementClass::hyperbolic;
  s.lambda = lambda;
  s.k.push_back(1);
  for (int n = 1; n < levels; ++n) s.k.push_back(s.k.back() + minimal_exponent(lambda, double(n) * (n + 1)));
  const double log_lambda = std::log(lambda);
  for (int n = 1; n <= levels; ++n) {
    const double kn = static_cast<double>(s.k[n - 1]);
    if (kn * log_lambda > 700.0) throw Error(Errc::resolution, "window endpoints underflow double precision");
    const double scale = std::pow(lambda, -kn);
    s.a.push_back(scale / n);
    s.b.push_back(scale * n);
  }
  return s;
}

DenseOrbitSchedule make_parabolic_schedule(double shift, int levels) {
  if (!std::isfinite(shift) || !(shift > 0.0))
    throw Error(Errc::not_parabolic, "parabolic schedule needs a shift a > 0");
  if (levels < 1) throw Error(Errc::invalid_argument, "schedule needs at least one level");
  DenseOrbitSchedule s;
  s.kind = ElementClass::parabolic;
  s.shift = shift;
  s.k.push_back(1);
  for (int n = 1; n < levels; ++n) {
    long gap = static_cast<long>(std::ceil((2.0 * n + 2.0) / shift));
    while (!(shift * static_cast<double>(gap) > 2.0 * n + 1.0)) ++gap;
    s.k.push_back(s.k.back() + gap);
  }
  return s;
}

DenseOrbitSchedule DenseOrbitSchedule::extended(int n) const {
  return kind == ElementClass::parabolic ? make_parabolic_schedule(shift, n) : make_schedule(lambda, n);
}

bool schedule_is_valid(const DenseOrbitSchedule& s) {
  if (s.k.empty() || s.k.front() < 1) return false;
  for (std::size_t i = 1; i < s.k.size(); ++i) {
    const long d = s.k[i] - s.k[i - 1];
    const long n = static_cast<long>(i);
    if (d < 1) return false;
    if (s.kind == ElementClass::parabolic) {
      if (!(s.shift * static_cast<double>(d) > 2.0 * n + 1.0)) return false;
      continue;
    }
    const double target = double(n) * (n + 1);
    const double lambda_int = std::round(s.lambda);
    if (lambda_int == s.lambda && d * std::log2(s.lambda) < 62.0) {
      // Exact integer power.
      unsigned long long p = 1;
      for (long j = 0; j < d; ++j) p *= static_cast<unsigned long long>(lambda_int);
      if (!(p > static_cast<unsigned long long>(n) * static_cast<unsigned long long>(n + 1))) return false;
    } else if (!(std::pow(s.lambda, static_cast<double>(d)) > target * (1.0 + 1e-12))) {
      return false;
    }
    if (!(s.b[i] < s.a[i - 1])) return false;
  }
  return true;
}

std::vector<LineInterval> DenseOrbitSchedule::windows(int n) const {
  if (n < 1 || n > levels()) throw Error(Errc::invalid_argument, "level outside the schedule");
  if (kind == ElementClass::parabolic) {
    const double c = -shift * static_cast<double>(k[n - 1]);
    return {{c - n, c + n}};
  }
  return {{-b[n - 1], -a[n - 1]}, {a[n - 1], b[n - 1]}};
}

CircleMap DenseOrbitSchedule::power(long j) const {
  if (kind == ElementClass::parabolic) return CircleMap::from(HalfPlaneMatrix::translation(shift * static_cast<double>(j)));
  const double exponent = static_cast<double>(j) * std::log(lambda);
  if (std::abs(exponent) > 1400.0) throw Error(Errc::resolution, "power exceeds double range");
  const double r = std::pow(lambda, 0.5 * static_cast<double>(j));
  return CircleMap::from(HalfPlaneMatrix{r, 0.0, 0.0, 1.0 / r});
}

std::vector<LineInterval> DenseOrbitSchedule::complement_of_target(int n) const {
  const double nd = n;
  if (kind == ElementClass::parabolic) return {{ExtendedReal::infinity(), -nd}, {nd, ExtendedReal::infinity()}};
  return {{ExtendedReal::infinity(), -nd}, {-1.0 / nd, 1.0 / nd}, {nd, ExtendedReal::infinity()}};
}

// ---------------------------------------------------------------------------

namespace {

const std::vector<Complex>& value_grid() {
  static const std::vector<Complex> grid = [] {
    std::vector<Complex> g;
    for (int p = -2; p <= 2; ++p)
      for (int q = -2; q <= 2; ++q)
        if (p * p + q * q <= 4) g.emplace_back(0.5 * p, 0.5 * q);
    return g;
  }();
  return grid;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

__extension__ typedef unsigned __int128 u128;

}  // namespace

TargetFamily::TargetFamily(int size, std::uint64_t seed) : seed_(seed) {
  if (size < 1) throw Error(Errc::invalid_argument, "target family needs at least one element");
  prefix_.reserve(static_cast<std::size_t>(size));
  for (int n = 1; n <= size; ++n) prefix_.push_back(element(n, seed));
}

BoundaryFunction TargetFamily::operator()(long n) const {
  if (n >= 1 && n <= size()) return prefix_[static_cast<std::size_t>(n - 1)];
  return element(n, seed_);
}

BoundaryFunction TargetFamily::element(long n, std::uint64_t seed) {
  if (n < 1) throw Error(Errc::invalid_argument, "family index starts at 1");
  const auto& grid = value_grid();
  const std::uint64_t base = grid.size();
  const int j = static_cast<int>((n - 1) % 5);
  const std::uint64_t m = static_cast<std::uint64_t>((n - 1) / 5);
  const int pieces = 1 << j;
  std::uint64_t modulus = 1;
  for (int i = 0; i < pieces; ++i) modulus *= base;  // at most 13^16 < 2^60
  // Affine bijection of Z/13^{pieces} scrambling the value patterns.
  std::uint64_t mult = 6364136223846793005ULL % modulus;
  while (mult % base == 0) ++mult;
  const std::uint64_t offset = splitmix64(seed ^ (0x632BE59BD9B4E019ULL * (j + 1))) % modulus;
  std::uint64_t idx = static_cast<std::uint64_t>((u128(mult) * (m % modulus) + offset) % modulus);
  std::vector<double> breakpoints;
  std::vector<Complex> values;
  for (int i = 0; i < pieces; ++i) {
    values.push_back(grid[idx % base]);
    idx /= base;
    if (pieces > 1) breakpoints.push_back(kTwoPi * i / pieces);
  }
  return {std::move(breakpoints), std::move(values)};
}

// ---------------------------------------------------------------------------

StepFunction dense_level_window(const TargetFamily& family, const DenseOrbitSchedule& sched, int n) {
  const StepFunction content = family(n).pull_back(sched.power(sched.k.at(static_cast<std::size_t>(n - 1))));
  std::vector<Arc> arcs;
  for (const LineInterval& w : sched.windows(n)) arcs.push_back(to_arc(w));
  return content.restricted(arcs);
}

DenseSeed build_dense_seed(const TargetFamily& family, const DenseOrbitSchedule& sched, int materialized_levels) {
  if (materialized_levels < 1) throw Error(Errc::invalid_argument, "materialize at least one level");
  DenseSeed seed;
  const bool parabolic = sched.kind == ElementClass::parabolic;
  seed.schedule = sched.levels() > materialized_levels ? sched : sched.extended(materialized_levels + 1);
  seed.materialized_levels = materialized_levels;

  StepFunction sum;
  for (int n = 1; n <= materialized_levels; ++n) sum = sum + dense_level_window(family, seed.schedule, n);
  seed.f_inf.materialized = BoundaryFunction(sum);

  const int next = materialized_levels + 1;
  if (parabolic) {
    const double c = -sched.shift * static_cast<double>(seed.schedule.k[next - 1]);
    seed.f_inf.unresolved.push_back(to_arc({ExtendedReal::infinity(), c + next}));
  } else {
    seed.f_inf.unresolved.push_back(arc_around_zero(seed.schedule.b[next - 1]));
  }
  seed.f_inf.tail_bound = 1.0;
  seed.f_inf.defect_bound = 1.0;

  // The exact evaluator walks the schedule as far as double range allows.
  DenseOrbitSchedule deep = sched;
  if (parabolic) {
    deep = sched.extended(std::max(next, std::min(kMaxParabolicLevels, sched.levels() + 2000)));
  } else {
    int levels = next;
    const double log_lambda = std::log(sched.lambda);
    long k = 1;
    for (int n = 1; n < kMaxHyperbolicLevels; ++n) {
      k += minimal_exponent(sched.lambda, double(n) * (n + 1));
      if (static_cast<double>(k) * log_lambda > 650.0) break;
      levels = std::max(levels, n + 1);
    }
    deep = make_schedule(sched.lambda, levels);
  }
  const TargetFamily fam = family;
  seed.f_inf.evaluator = [deep, fam](double s) -> Complex {
    const ExtendedReal xe = line_from_angle(s);
    if (xe.is_infinite()) return 0.0;
    const double x = xe.value();
    for (int n = 1; n <= deep.levels(); ++n) {
      const double kn = static_cast<double>(deep.k[n - 1]);
      if (deep.kind == ElementClass::parabolic) {
        const double c = -deep.shift * kn;
        if (x > c + n) return 0.0;
        if (x >= c - n) return fam(n)(angle_from_line(x + deep.shift * kn));
      } else {
        const double ax = std::abs(x);
        if (ax > deep.b[n - 1]) return 0.0;
        if (ax >= deep.a[n - 1]) return fam(n)(angle_from_line(std::pow(deep.lambda, kn) * x));
      }
    }
    return 0.0;
  };
  return seed;
}

std::vector<DenseRow> dense_orbit_report(const TargetFamily& family, const DenseOrbitSchedule& sched,
                                         const CompactExhaustion& ex) {
  const int levels = sched.levels();
  const DenseSeed seed = build_dense_seed(family, sched.extended(levels + 3), levels + 2);
  std::vector<DenseRow> rows;
  for (int n = 1; n <= levels; ++n) {
    DenseRow row;
    row.n = n;
    row.k = sched.k[static_cast<std::size_t>(n - 1)];
    const LazyBoundaryFunction moved = seed.f_inf.pull_back(sched.power(-row.k));
    row.dist = metric_distance(HarmonicFunction::from_lazy(moved), HarmonicFunction(family(n)), ex);
    const auto complement = sched.complement_of_target(n);
    row.bound = arc_length_of_region(complement) / kPi;
    row.ok = row.dist.value <= row.bound + row.dist.error_bar;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

PeriodicApproximant build_periodic_approximant(const BoundaryFunction& f, double epsilon, const MoebiusElement& gamma) {
  if (!(epsilon > 0.0) || epsilon > 2.0) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 2]");
  const ElementClass kind = classify(gamma);
  if (kind != ElementClass::hyperbolic && kind != ElementClass::parabolic)
    throw Error(Errc::not_hyperbolic, "periodic approximants need a hyperbolic or parabolic element");
  const bool parabolic = kind == ElementClass::parabolic;
  const NormalForm nf = normal_form(gamma);
  const MoebiusElement N = nf.conjugator;
  const CircleMap to_normal = CircleMap::from(N);
  const CircleMap from_normal = CircleMap::from(inverse(N));
  const MoebiusElement N_inv = inverse(N);

  // l(B_n^c) measured in the original coordinates.
  auto complement_length = [&](long n) {
    const double nd = static_cast<double>(n);
    double len = image_arc_length(N_inv, arc_around_infinity(nd));
    if (!parabolic) len += image_arc_length(N_inv, arc_around_zero(1.0 / nd));
    return len;
  };
  constexpr long kMaxN = 1000000;
  const double target = epsilon * kPi;
  long hi = 1;
  while (complement_length(hi) > target) {
    if (hi > kMaxN) throw Error(Errc::resolution, "epsilon too small for double precision");
    hi *= 2;
  }
  long lo = hi / 2;  // complement_length(lo) > target, or lo == 0
  while (hi - lo > 1) {
    const long mid = (lo + hi) / 2;
    (complement_length(mid) > target ? lo : hi) = mid;
  }
  const long n = hi;
  if (n > kMaxN) throw Error(Errc::resolution, "epsilon too small for double precision");
  const double nd = static_cast<double>(n);

  PeriodicApproximant out;
  out.kind = kind;
  out.n = static_cast<int>(n);
  out.complement_length = complement_length(n);

  const double mu = nf.multiplier;
  const double a = nf.shift;
  if (parabolic) {
    long k = std::max(1L, static_cast<long>(std::floor(2.0 * nd / std::abs(a))) + 1);
    while (k > 1 && std::abs(a) * static_cast<double>(k - 1) > 2.0 * nd) --k;
    while (!(std::abs(a) * static_cast<double>(k) > 2.0 * nd)) ++k;
    out.k = k;
  } else {
    out.k = minimal_exponent(mu, nd * nd);
  }
  const double kd = static_cast<double>(out.k);

  // Normalized-coordinate power gamma^j.
  auto normal_power = [&](long j) {
    if (parabolic) return CircleMap::from(HalfPlaneMatrix::translation(a * static_cast<double>(j)));
    const double exponent = static_cast<double>(j) * std::log(mu);
    if (std::abs(exponent) > 1400.0) throw Error(Errc::resolution, "power exceeds double range");
    const double r = std::exp(0.5 * exponent);
    return CircleMap::from(HalfPlaneMatrix{r, 0.0, 0.0, 1.0 / r});
  };

  std::vector<Arc> b_arcs;
  if (parabolic) {
    b_arcs.push_back(to_arc({-nd, nd}));
  } else {
    b_arcs.push_back(to_arc({1.0 / nd, nd}));
    b_arcs.push_back(to_arc({-nd, -1.0 / nd}));
  }
  const StepFunction base = f.pull_back(from_normal).restricted(b_arcs);

  // Resolved span in normalized line coordinates after translates m_lo..m_hi:
  // hyperbolic |x| in [lo, hi], parabolic x in [lo, hi].
  auto span_lo = [&](long m_hi, long m_lo) {
    if (parabolic) return std::min(-nd - a * kd * m_hi, -nd - a * kd * m_lo);
    return std::exp(-static_cast<double>(m_hi) * kd * std::log(mu)) / nd;
  };
  auto span_hi = [&](long m_hi, long m_lo) {
    if (parabolic) return std::max(nd - a * kd * m_hi, nd - a * kd * m_lo);
    return std::exp(-static_cast<double>(m_lo) * kd * std::log(mu)) * nd;
  };
  // Hole lengths (normalized angles) beyond the outermost translate on each side.
  const double hole_target = parabolic ? 0.01 * epsilon * kPi : 1e-12;
  constexpr double kMinWidth = 1e-10;
  constexpr long kMaxTranslates = 20000;

  StepFunction sum = base;
  out.translates = 1;
  long m_hi = 0, m_lo = 0;
  for (int side : {+1, -1}) {
    for (long step = 1; step <= kMaxTranslates; ++step) {
      const long m = side * step;
      // Hole left on this side with the current outermost translate.
      double hole;
      if (parabolic) {
        const double edge = (side > 0) == (a > 0) ? -span_lo(m_hi, m_lo) : span_hi(m_hi, m_lo);
        hole = 2.0 * (kPi / 2.0 - std::atan(std::max(edge, 0.0)));
      } else {
        hole = side > 0 ? 4.0 * std::atan(span_lo(m_hi, m_lo)) : 4.0 * std::atan(1.0 / span_hi(m_hi, m_lo));
      }
      if (hole <= hole_target) break;
      StepFunction translate;
      try {
        translate = base.pull_back(normal_power(m * out.k));
      } catch (const Error& e) {
        if (e.code() == Errc::resolution) break;
        throw;
      }
      if (min_piece_length(translate.pull_back(to_normal)) < kMinWidth) break;
      sum = sum + translate;
      ++out.translates;
      (side > 0 ? m_hi : m_lo) = m;
    }
  }

  const double edge_lo = span_lo(m_hi, m_lo), hi_edge = span_hi(m_hi, m_lo);
  std::vector<Arc> holes, compared;
  if (parabolic) {
    holes.push_back(Arc::from_angles(2.0 * std::atan(hi_edge), kTwoPi - 2.0 * (std::atan(hi_edge) - std::atan(edge_lo))));
    const double c_lo = std::max(edge_lo, edge_lo + a * kd), c_hi = std::min(hi_edge, hi_edge + a * kd);
    if (c_lo < c_hi) compared.push_back(to_arc({c_lo, c_hi}));
  } else {
    holes.push_back(arc_around_zero(edge_lo));
    holes.push_back(arc_around_infinity(hi_edge));
    const double c_lo = edge_lo * std::exp(kd * std::log(mu));
    if (c_lo < hi_edge) {
      compared.push_back(to_arc({c_lo, hi_edge}));
      compared.push_back(to_arc({-hi_edge, -c_lo}));
    }
  }
  for (const Arc& h : holes) out.hole_length += image_arc_length(N_inv, h);
  for (const Arc& c : compared) out.compared.push_back(from_normal.image(c));
  out.f_eps = BoundaryFunction(sum.pull_back(to_normal));
  return out;
}

PeriodicityCheck check_periodicity(const PeriodicApproximant& p, const MoebiusElement& gamma) {
  PeriodicityCheck out;
  double compared_length = 0.0;
  for (const Arc& c : p.compared) compared_length += c.theta;
  out.excluded_length = kTwoPi - compared_length;
  if (p.compared.empty()) return out;
  const StepFunction here = p.f_eps.restricted(p.compared);
  // gamma^k . f = f ∘ gamma^{-k}: breakpoints move forward under gamma^k, which
  // is well conditioned in angle coordinates at both fixed points.
  const StepFunction moved = p.f_eps.pull_back(CircleMap::power_of(gamma, -p.k)).restricted(p.compared);
  out.l1_mismatch = l1_distance(here, moved);
  out.breakpoints = here.breakpoints().size();
  const std::size_t count = here.breakpoints().size();
  if (moved.breakpoints().size() != count) {
    out.max_shift = out.backward_shift = kPi;
    return out;
  }
  if (count == 0) {
    out.exact = std::abs(here.values()[0] - moved.values()[0]) <= 1e-12;
    return out;
  }
  auto cyclic = [](double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, kTwoPi - d);
  };
  // A breakpoint near 0 may be stored as 2pi - delta on one side, so align
  // the two breakpoint lists cyclically before pairing them.
  std::size_t offset = 0;
  for (std::size_t j = 1; j < count; ++j)
    if (cyclic(here.breakpoints()[0], moved.breakpoints()[j]) <
        cyclic(here.breakpoints()[0], moved.breakpoints()[offset]))
      offset = j;
  // Rounding of a source breakpoint b is amplified by (gamma^k)'(b) in the
  // image; dividing by that factor where it exceeds 1 measures the shift at b.
  const MoebiusElement back = power(gamma, -p.k);
  bool values_match = true;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = (i + offset) % count;
    const double t = here.breakpoints()[i];
    const double d = cyclic(t, moved.breakpoints()[j]);
    out.max_shift = std::max(out.max_shift, d);
    out.backward_shift = std::max(out.backward_shift, d * std::min(1.0, back.boundary_derivative(t)));
    if (std::abs(here.values()[i] - moved.values()[j]) > 1e-12) values_match = false;
  }
  out.exact = values_match && out.backward_shift <= 1e-12;
  return out;
}

PeriodicRow periodic_report(const BoundaryFunction& f, double epsilon, const MoebiusElement& gamma,
                            const CompactExhaustion& ex) {
  const PeriodicApproximant p = build_periodic_approximant(f, epsilon, gamma);
  PeriodicRow row;
  row.epsilon = epsilon;
  row.n = p.n;
  row.k = p.k;
  row.l1_defect = l1_distance(f, p.f_eps);
  row.l1_bound = 2.0 * p.complement_length;
  // Where translates were not materialized the stored value 0 may differ from
  // the true f_eps by at most 1.
  const HarmonicFunction phi_eps(p.f_eps, p.hole_length > 0.0 ? 1.0 : 0.0, p.hole_length);
  row.metric_defect = metric_distance(HarmonicFunction(f), phi_eps, ex);
  row.periodicity = check_periodicity(p, gamma);
  row.ok = row.l1_defect <= row.l1_bound + 1e-12 && row.metric_defect.upper() <= epsilon && row.periodicity.exact;
  return row;
}

// ---------------------------------------------------------------------------

SensitivityResult sensitivity_probe(const StepFunction& f, std::span<const StepFunction> perturbed,
                                    const MoebiusElement& gamma, long n_max, const CompactExhaustion& ex) {
  if (n_max < 0) throw Error(Errc::invalid_argument, "n_max must be non-negative");
  SensitivityResult out;
  out.running_max.reserve(static_cast<std::size_t>(n_max) + 1);
  for (long n = 0; n <= n_max; ++n) {
    const CircleMap back = CircleMap::power_of(gamma, -n);
    const StepFunction moved = f.pull_back(back);
    for (std::size_t t = 0; t < perturbed.size(); ++t) {
      const StepFunction other = perturbed[t].pull_back(back);
      const double d = metric_distance(HarmonicFunction(moved), HarmonicFunction(other), ex).value;
      if (d > out.max_separation) {
        out.max_separation = d;
        out.at_n = n;
        out.trial = t;
      }
    }
    out.running_max.push_back(out.max_separation);
  }
  return out;
}

}  // namespace discdyn
