#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "discdyn/boundary.hpp"
#include "discdyn/poisson.hpp"

namespace discdyn {

/// Levels of the dense-orbit construction for the normalized generator
/// x -> lambda x (hyperbolic) or x -> x + shift (parabolic).
///
/// Hyperbolic: n(n+1) < lambda^{k_{n+1} - k_n}, windows ±[a_n, b_n] with
/// a_n = lambda^{-k_n}/n, b_n = n lambda^{-k_n}.
/// Parabolic: shift (k_{n+1} - k_n) > 2n + 1, window [-shift k_n - n, -shift k_n + n].
struct DenseOrbitSchedule {
  ElementClass kind = ElementClass::hyperbolic;
  double lambda = 2.0;
  double shift = 1.0;
  std::vector<long> k;
  std::vector<double> a, b;  // hyperbolic only

  int levels() const noexcept { return static_cast<int>(k.size()); }
  /// Same parameters, `levels` levels.
  DenseOrbitSchedule extended(int levels) const;
  /// Line intervals of level n (1-based) on which f_n is planted.
  std::vector<LineInterval> windows(int n) const;
  /// gamma^j for the normalized generator.
  CircleMap power(long j) const;
  /// Line intervals of the complement of A_n, the set where gamma^{k_n} f_inf = f_n.
  std::vector<LineInterval> complement_of_target(int n) const;
};

/// Throws Error(not_hyperbolic) for lambda <= 1 + 1e-9.
DenseOrbitSchedule make_schedule(double lambda, int levels);
/// k_1 = 1, k_{n+1} = k_n + ceil((2n + 2) / shift). Throws Error(not_parabolic) for shift <= 0.
DenseOrbitSchedule make_parabolic_schedule(double shift, int levels);
/// Growth inequality and window disjointness, checked with exact integer
/// powers where possible.
bool schedule_is_valid(const DenseOrbitSchedule& s);

/// Enumeration of the unit ball: element n has 2^j equal pieces,
/// j = (n - 1) mod 5, with values on the 13 points of (Z/2 + iZ/2) in the
/// closed disc. Assignments run through a seeded bijection of all 13^{2^j}
/// value patterns.
class TargetFamily {
 public:
  explicit TargetFamily(int size, std::uint64_t seed = 0);

  int size() const noexcept { return static_cast<int>(prefix_.size()); }
  std::uint64_t seed() const noexcept { return seed_; }
  /// 1-based; elements past the prefix are generated on demand.
  BoundaryFunction operator()(long n) const;
  static BoundaryFunction element(long n, std::uint64_t seed);

 private:
  std::vector<BoundaryFunction> prefix_;
  std::uint64_t seed_;
};

struct DenseSeed {
  DenseOrbitSchedule schedule;
  LazyBoundaryFunction f_inf;
  int materialized_levels = 0;
};

/// f_inf on the line: f_n(gamma^{k_n} x) on level-n windows, 0 elsewhere.
/// Levels 1..materialized_levels are exact; deeper levels form one unresolved
/// arc around the accumulation point.
DenseSeed build_dense_seed(const TargetFamily& family, const DenseOrbitSchedule& sched, int materialized_levels);
/// Level-n contribution (f_n ∘ gamma^{k_n}) · 1_{windows}.
StepFunction dense_level_window(const TargetFamily& family, const DenseOrbitSchedule& sched, int n);

struct DenseRow {
  int n = 0;
  long k = 0;
  MetricValue dist;    // ||gamma^{k_n} phi_inf - phi_n||
  double bound = 0.0;  // l(B_n^c) / pi
  bool ok = false;     // dist.value <= bound + dist.error_bar
};

/// Rows n = 1..sched.levels(), using materialization to levels() + 2.
std::vector<DenseRow> dense_orbit_report(const TargetFamily& family, const DenseOrbitSchedule& sched,
                                         const CompactExhaustion& ex = {});

struct PeriodicApproximant {
  BoundaryFunction f_eps;
  ElementClass kind = ElementClass::hyperbolic;
  int n = 0;                        // B = eta^{-1}(A_n) in normalized coordinates
  long k = 0;                       // period
  long translates = 0;              // materialized translates
  double complement_length = 0.0;   // l(B^c) in the original coordinates
  double hole_length = 0.0;         // unmaterialized region, where f_eps is stored as 0
  std::vector<Arc> compared;        // region on which periodicity is exact
};

/// f_eps = sum_m (1_B f) ∘ gamma^{mk} for hyperbolic or parabolic gamma.
/// Throws Error(resolution) when B would need n > 1e6 or the powers overflow.
PeriodicApproximant build_periodic_approximant(const BoundaryFunction& f, double epsilon, const MoebiusElement& gamma);

/// Compares gamma^k . f_eps = f_eps ∘ gamma^{-k} with f_eps on the compared
/// region. The pull-back by gamma^k is reported too; it amplifies the angle
/// rounding at the attracting fixed point by lambda^k.
struct PeriodicityCheck {
  bool exact = false;  // backward_shift <= 1e-12 and equal values on the compared region
  std::size_t breakpoints = 0;
  double max_shift = 0.0;       // largest angle between paired breakpoints of f_eps and gamma^k . f_eps
  double backward_shift = 0.0;  // max_shift measured at the source breakpoint
  double l1_mismatch = 0.0;
  double excluded_length = 0.0;
};

PeriodicityCheck check_periodicity(const PeriodicApproximant& p, const MoebiusElement& gamma);

struct PeriodicRow {
  double epsilon = 0.0;
  int n = 0;
  long k = 0;
  double l1_defect = 0.0;  // ∫|f - f_eps|
  double l1_bound = 0.0;   // 2 l(B^c)
  MetricValue metric_defect;
  PeriodicityCheck periodicity;
  bool ok = false;  // l1 and metric bounds hold and periodicity is exact
};

PeriodicRow periodic_report(const BoundaryFunction& f, double epsilon, const MoebiusElement& gamma,
                            const CompactExhaustion& ex = {});

struct SensitivityResult {
  double max_separation = 0.0;
  long at_n = 0;
  std::size_t trial = 0;
  std::vector<double> running_max;  // index n: max over m <= n and all trials
};

/// max over n <= n_max and trials of ||gamma^n phi - gamma^n phi'||.
SensitivityResult sensitivity_probe(const StepFunction& f, std::span<const StepFunction> perturbed,
                                    const MoebiusElement& gamma, long n_max, const CompactExhaustion& ex = {});

/// Homeomorphism h of S^1 with h ∘ gamma2 = gamma1 ∘ h, so that f -> f ∘ h
/// intertwines the two actions.
struct Conjugacy {
  ElementClass kind = ElementClass::hyperbolic;
  double exponent = 1.0;  // hyperbolic: ln lambda1 / ln lambda2; parabolic: shift1 / shift2
  CircleMap h = CircleMap::identity();
};

/// Throws Error(not_conjugate) unless both are hyperbolic or both parabolic.
Conjugacy conjugating_map(const MoebiusElement& gamma1, const MoebiusElement& gamma2);

/// dist(Phi(gamma1 . phi), gamma2 . Phi(phi)) with Phi(f) = f ∘ h.
MetricValue intertwining_residual(const Conjugacy& c, const MoebiusElement& gamma1, const MoebiusElement& gamma2,
                                  const StepFunction& f, const CompactExhaustion& ex = {});

}  // namespace discdyn
