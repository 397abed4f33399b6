#include <gtest/gtest.h>

#include <cmath>

#include "discdyn/chaos.hpp"
#include "discdyn/error.hpp"
#include "generators.hpp"

namespace discdyn {
namespace {

using testing::Rng;

// Point of the line as a boundary angle.
double at(double x) { return angle_from_line(x); }

TEST(Schedule, MinimalHyperbolicExamples) {
  EXPECT_EQ(make_schedule(2.0, 4).k, (std::vector<long>{1, 3, 6, 10}));
  EXPECT_EQ(make_schedule(10.0, 3).k, (std::vector<long>{1, 2, 3}));
  for (double lambda : {1.1, 2.0, 3.7, 10.0}) {
    const DenseOrbitSchedule s = make_schedule(lambda, 8);
    EXPECT_TRUE(schedule_is_valid(s));
    for (int n = 1; n < s.levels(); ++n) {
      const auto i = static_cast<std::size_t>(n - 1);
      const long gap = s.k[i + 1] - s.k[i];
      EXPECT_LT(double(n) * (n + 1), std::pow(lambda, double(gap)));
      EXPECT_GE(double(n) * (n + 1), std::pow(lambda, double(gap - 1)) * (1 - 1e-12));  // minimal
      EXPECT_LT(s.b[i + 1], s.a[i]);
      EXPECT_DOUBLE_EQ(s.a[i], std::pow(lambda, -double(s.k[i])) / n);
      EXPECT_DOUBLE_EQ(s.b[i], n * std::pow(lambda, -double(s.k[i])));
    }
  }
}

TEST(Schedule, Errors) {
  try {
    make_schedule(1.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_hyperbolic);
  }
  try {
    make_parabolic_schedule(-1.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_parabolic);
  }
}

TEST(Schedule, ParabolicWindowsDisjoint) {
  for (double a : {0.3, 1.0, 2.5}) {
    const DenseOrbitSchedule s = make_parabolic_schedule(a, 10);
    EXPECT_TRUE(schedule_is_valid(s));
    EXPECT_EQ(s.k[0], 1);
    for (int n = 1; n < s.levels(); ++n) {
      const auto i = static_cast<std::size_t>(n - 1);
      EXPECT_GT(a * double(s.k[i + 1] - s.k[i]), 2.0 * n + 1);
      EXPECT_EQ(s.k[i + 1] - s.k[i], static_cast<long>(std::ceil((2.0 * n + 2) / a)));
    }
  }
}

TEST(TargetFamily, DeterministicUnitBall) {
  const TargetFamily a(12, 7), b(12, 7), c(12, 8);
  bool differs = false;
  for (long n = 1; n <= 12; ++n) {
    EXPECT_EQ(a(n).breakpoints(), b(n).breakpoints());
    EXPECT_EQ(a(n).values(), b(n).values());
    EXPECT_LE(a(n).sup_norm(), 1.0);
    EXPECT_LE(a(n).pieces(), std::size_t{1} << ((n - 1) % 5));
    const BoundaryFunction fn = a(n);
    for (Complex v : fn.values()) {
      EXPECT_EQ(2 * v.real(), std::round(2 * v.real()));
      EXPECT_EQ(2 * v.imag(), std::round(2 * v.imag()));
    }
    differs = differs || a(n).values() != c(n).values();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a(40).values(), TargetFamily::element(40, 7).values());
}

TEST(DenseSeed, EvaluatorFollowsDefinition) {
  const DenseOrbitSchedule s = make_schedule(2.0, 5);
  const TargetFamily fam(5, 3);
  const DenseSeed seed = build_dense_seed(fam, s, 5);
  const double lambda = 2.0;
  Rng rng(1);
  for (int n = 1; n <= 5; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    const double scale = std::pow(lambda, double(s.k[i]));
    for (int j = 0; j < 20; ++j) {
      const double x = testing::uniform(rng, s.a[i], s.b[i]) * (j % 2 ? -1 : 1);
      const double sx = at(scale * x);
      // Skip points within rounding of a breakpoint of f_n.
      bool near = false;
      for (double b : fam(n).breakpoints()) near = near || std::abs(sx - b) < 1e-9;
      if (near) continue;
      EXPECT_EQ(seed.f_inf(at(x)), fam(n)(sx));
      EXPECT_EQ(seed.f_inf.materialized(at(x)), fam(n)(sx));
    }
    if (n < 5) {
      const double gap = 0.5 * (s.a[i] + s.b[i + 1]);
      EXPECT_EQ(seed.f_inf(at(gap)), Complex(0.0));
      EXPECT_EQ(seed.f_inf(at(-gap)), Complex(0.0));
    }
  }
  EXPECT_EQ(seed.f_inf(at(2.0 * s.b[0])), Complex(0.0));
  EXPECT_EQ(seed.f_inf(at(-7.0)), Complex(0.0));
}

TEST(DenseSeed, OrbitHitsTargetOnA) {
  const DenseOrbitSchedule s = make_schedule(2.0, 5);
  const TargetFamily fam(5, 11);
  const DenseSeed seed = build_dense_seed(fam, s, 5);
  Rng rng(2);
  for (int n = 1; n <= 5; ++n) {
    const LazyBoundaryFunction moved = seed.f_inf.pull_back(s.power(-s.k[static_cast<std::size_t>(n - 1)]));
    for (int j = 0; j < 50; ++j) {
      const double x = (j % 2 ? -1 : 1) * std::exp(testing::uniform(rng, -std::log(double(n)), std::log(double(n))));
      const double sx = at(x);
      bool near = false;
      for (double b : fam(n).breakpoints()) near = near || std::abs(sx - b) < 1e-9;
      if (!near) EXPECT_EQ(moved(sx), fam(n)(sx)) << "n=" << n << " x=" << x;
    }
  }
}

TEST(DenseReport, RowsSatisfyCertificate) {
  const DenseOrbitSchedule s = make_schedule(2.0, 5);
  const auto rows = dense_orbit_report(TargetFamily(5, 0), s);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_NEAR(rows[0].bound, 2.0, 1e-15);  // A_1 is two points
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].ok);
    EXPECT_LE(rows[i].dist.value, rows[i].bound + rows[i].dist.error_bar);
    EXPECT_EQ(rows[i].k, s.k[i]);
    if (i > 0) EXPECT_LT(rows[i].bound, rows[i - 1].bound);
  }
}

TEST(DenseReport, ParabolicAnalog) {
  const DenseOrbitSchedule s = make_parabolic_schedule(1.0, 4);
  const auto rows = dense_orbit_report(TargetFamily(4, 0), s);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].ok);
    EXPECT_NEAR(rows[i].bound, 4.0 * std::atan(1.0 / double(i + 1)) / kPi, 1e-14);
  }
}

TEST(Periodic, MinimalParameters) {
  const BoundaryFunction f = TargetFamily::element(3, 0);
  const PeriodicApproximant h = build_periodic_approximant(f, 0.7, MoebiusElement::hyperbolic(2.0));
  EXPECT_EQ(h.n, 4);
  EXPECT_EQ(h.k, 5);  // 2^5 = 32 > 16 = n^2 and 2^4 = 16 is not
  EXPECT_LE(h.complement_length, 0.7 * kPi);
  const PeriodicApproximant p = build_periodic_approximant(f, 0.5, MoebiusElement::parabolic(1.0));
  EXPECT_EQ(p.n, 3);
  EXPECT_EQ(p.k, 7);  // 7 > 6 = 2n
}

TEST(Periodic, ReportRowsHold) {
  const BoundaryFunction f = TargetFamily::element(8, 1);
  for (const MoebiusElement& gamma : {MoebiusElement::hyperbolic(2.0), MoebiusElement::parabolic(1.0)}) {
    for (double eps : {0.3, 0.1}) {
      const PeriodicRow r = periodic_report(f, eps, gamma);
      EXPECT_TRUE(r.ok) << eps;
      EXPECT_LE(r.l1_defect, r.l1_bound + 1e-12);
      EXPECT_LE(r.metric_defect.upper(), eps);
      EXPECT_TRUE(r.periodicity.exact);
      EXPECT_LE(r.periodicity.backward_shift, 1e-12);
      EXPECT_LE(r.periodicity.l1_mismatch, 1e-10);
    }
  }
}

TEST(Periodic, PointwisePeriodicity) {
  Rng rng(3);
  const MoebiusElement gamma = MoebiusElement::hyperbolic(3.0);
  const PeriodicApproximant p = build_periodic_approximant(testing::random_boundary(rng), 0.2, gamma);
  EXPECT_LE(p.f_eps.sup_norm(), 1.0);
  const CircleMap back = CircleMap::power_of(gamma, -p.k);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 300; ++i) {
    const double s = testing::uniform(rng, 0, kTwoPi);
    bool inside = false;
    for (const Arc& a : p.compared) inside = inside || a.contains(s);
    if (!inside) continue;
    const double t = back(s);
    bool near = false;
    for (double b : p.f_eps.breakpoints()) near = near || std::abs(s - b) < 1e-9 || std::abs(t - b) < 1e-9;
    if (near) continue;
    EXPECT_EQ(p.f_eps(t), p.f_eps(s));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Periodic, TinyEpsilonIsAResolutionError) {
  try {
    build_periodic_approximant(TargetFamily::element(2, 0), 1e-8, MoebiusElement::hyperbolic(2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::resolution);
  }
  EXPECT_THROW(build_periodic_approximant(TargetFamily::element(2, 0), 0.1, MoebiusElement::rotation(1.0)), Error);
}

TEST(Sensitivity, SeparatesZeroedWindow) {
  const DenseOrbitSchedule s = make_schedule(2.0, 6);
  const TargetFamily fam(6, 5);
  const DenseSeed seed = build_dense_seed(fam, s, 6);
  const StepFunction f = seed.f_inf.materialized;
  const StepFunction g = f - dense_level_window(fam, s, 5);
  const StepFunction same[] = {f};
  const StepFunction perturbed[] = {g};
  const MoebiusElement gamma = MoebiusElement::hyperbolic(2.0);
  EXPECT_EQ(sensitivity_probe(f, same, gamma, 5).max_separation, 0.0);
  const SensitivityResult r = sensitivity_probe(f, perturbed, gamma, s.k[4]);
  EXPECT_GT(r.max_separation, 0.01);
  EXPECT_LE(r.at_n, s.k[4]);
  for (std::size_t i = 1; i < r.running_max.size(); ++i) EXPECT_GE(r.running_max[i], r.running_max[i - 1]);
  const double one = kPi * kPi / 12.0 - 0.5 * std::log(2.0) * std::log(2.0);
  EXPECT_LE(r.max_separation, 2.0 * one);
}

TEST(Conjugacy, IdentityForEqualElements) {
  const MoebiusElement g = MoebiusElement::hyperbolic(2.0);
  const Conjugacy c = conjugating_map(g, g);
  for (double s : {0.1, 2.0, 5.0}) EXPECT_NEAR(c.h(s), s, 1e-15);
}

TEST(Conjugacy, SquareRootLawForTwoAndFour) {
  const MoebiusElement g1 = MoebiusElement::hyperbolic(2.0), g2 = MoebiusElement::hyperbolic(4.0);
  const Conjugacy c = conjugating_map(g1, g2);
  EXPECT_NEAR(c.exponent, 0.5, 1e-14);
  for (double x : {-9.0, -0.25, 0.01, 4.0}) {
    EXPECT_NEAR(line_from_angle(c.h(at(x))).value(), std::copysign(std::sqrt(std::abs(x)), x), 1e-12 * (1 + std::abs(x)));
  }
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double s = testing::uniform(rng, 0, kTwoPi);
    const double d = std::abs(c.h(g2.act_angle(s)) - g1.act_angle(c.h(s)));
    EXPECT_LT(std::min(d, kTwoPi - d), 1e-12);
  }
  for (int i = 0; i < 5; ++i) EXPECT_LT(intertwining_residual(c, g1, g2, testing::random_boundary(rng)).upper(), 1e-9);
}

TEST(Conjugacy, ParabolicAndConjugatedElements) {
  Rng rng(5);
  const MoebiusElement p1 = MoebiusElement::parabolic(1.0), p2 = MoebiusElement::parabolic(2.5);
  const Conjugacy c = conjugating_map(p1, p2);
  EXPECT_EQ(c.kind, ElementClass::parabolic);
  for (int i = 0; i < 3; ++i) EXPECT_LT(intertwining_residual(c, p1, p2, testing::random_boundary(rng)).upper(), 1e-9);
  const MoebiusElement h1 = testing::random_hyperbolic(rng), h2 = testing::random_hyperbolic(rng);
  const Conjugacy ch = conjugating_map(h1, h2);
  for (int i = 0; i < 100; ++i) {
    const double s = testing::uniform(rng, 0, kTwoPi);
    const double d = std::abs(ch.h(h2.act_angle(s)) - h1.act_angle(ch.h(s)));
    EXPECT_LT(std::min(d, kTwoPi - d), 1e-9);
  }
}

TEST(Conjugacy, MixedClassesRejected) {
  for (const auto& [a, b] : {std::pair{MoebiusElement::hyperbolic(2.0), MoebiusElement::parabolic(1.0)},
                             std::pair{MoebiusElement::parabolic(1.0), MoebiusElement::hyperbolic(3.0)},
                             std::pair{MoebiusElement::rotation(1.0), MoebiusElement::rotation(1.0)}}) {
    try {
      conjugating_map(a, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::not_conjugate);
    }
  }
}

}  // namespace
}  // namespace discdyn
