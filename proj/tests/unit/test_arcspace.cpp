#include <gtest/gtest.h>

#include <cmath>

#include "discdyn/arcspace.hpp"
#include "discdyn/error.hpp"
#include "discdyn/poisson.hpp"
#include "generators.hpp"
#include "quadrature.hpp"

namespace discdyn {
namespace {

using testing::Rng;

double arc_gap(const Arc& a, const Arc& b) { return std::abs(a.zeta - b.zeta) + std::abs(a.theta - b.theta); }

TEST(ActArc, IdentityAndRotation) {
  const Arc x = Arc::from_angles(0.4, 2.2);
  EXPECT_LT(arc_gap(act_arc(MoebiusElement::identity(), x), x), 1e-15);
  const Arc r = act_arc(MoebiusElement::rotation(1.1), x);
  EXPECT_LT(std::abs(r.zeta - std::polar(1.0, 1.5)), 1e-15);
  EXPECT_NEAR(r.theta, 2.2, 1e-14);
}

TEST(ActArc, LengthMatchesDerivativeQuadrature) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const Arc x = testing::random_arc(rng);
    const double start = x.start_angle();
    const auto q = testing::integrate(
        [&](double s) { return 1.0 / std::norm(std::conj(g.alpha()) + std::conj(g.beta()) * std::polar(1.0, start + s)); },
        0.0, x.theta);
    EXPECT_NEAR(image_arc_length(g, x), q.value, 1e-10);
    EXPECT_LT(std::abs(act_arc(g, x).zeta - g.act(x.zeta)), 1e-14);
  }
}

TEST(ActArc, PartitionLengthsSumToFullCircle) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testing::random_element(rng, 0.9);
    std::vector<double> cuts(8);
    for (double& c : cuts) c = testing::uniform(rng, 0, kTwoPi);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double a = cuts[j], b = j + 1 < 8 ? cuts[j + 1] : cuts[0] + kTwoPi;
      total += act_arc(g, Arc::from_angles(a, b - a)).theta;
    }
    EXPECT_NEAR(total, kTwoPi, 1e-10);
  }
}

TEST(ActArc, BoundaryCirclesInvariant) {
  Rng rng(3);
  const MoebiusElement g = testing::random_element(rng);
  EXPECT_EQ(act_arc(g, Arc(std::polar(1.0, 0.3), 0.0)).theta, 0.0);
  EXPECT_EQ(act_arc(g, Arc(std::polar(1.0, 0.3), kTwoPi)).theta, kTwoPi);
}

TEST(ActArc, IndicatorConsistency) {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const Arc x = testing::random_arc(rng);
    const BoundaryFunction lhs = indicator(act_arc(g, x));
    const BoundaryFunction rhs = compose_with_moebius(indicator(x), inverse(g));
    int agree = 0, checked = 0;
    for (int j = 0; j < 1000; ++j) {
      const double s = testing::uniform(rng, 0, kTwoPi);
      bool near = false;
      for (double b : lhs.breakpoints()) near = near || std::abs(std::polar(1.0, s) - std::polar(1.0, b)) < 1e-9;
      if (near) continue;
      ++checked;
      agree += lhs(s) == rhs(s);
    }
    EXPECT_EQ(agree, checked);
  }
}

TEST(ActArc, ActionLaw) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const MoebiusElement g = testing::random_element(rng), h = testing::random_element(rng);
    const Arc x = testing::random_arc(rng);
    const Arc lhs = act_arc(compose(g, h), x), rhs = act_arc(g, act_arc(h, x));
    EXPECT_LT(std::abs(lhs.zeta - rhs.zeta), 1e-10);
    EXPECT_NEAR(lhs.theta, rhs.theta, 1e-10);
  }
}

TEST(ActArc, LengthMonotoneAndAdditive) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const double start = testing::uniform(rng, 0, kTwoPi);
    double t1 = testing::uniform(rng, 0, kTwoPi), t2 = testing::uniform(rng, 0, kTwoPi);
    if (t1 > t2) std::swap(t1, t2);
    const double l1 = image_arc_length(g, Arc::from_angles(start, t1));
    const double l2 = image_arc_length(g, Arc::from_angles(start, t2));
    EXPECT_LT(l1, l2);
    const double rest = image_arc_length(g, Arc::from_angles(start + t1, t2 - t1));
    EXPECT_NEAR(l1 + rest, l2, 1e-10);
  }
}

TEST(BigF, Examples) {
  const Arc x = Arc::from_angles(0.7, 2.0);
  EXPECT_NEAR(big_F(0.0, x), 2.0 / kTwoPi, 1e-15);
  EXPECT_EQ(big_F(Complex(0.3, 0.5), Arc(std::polar(1.0, 2.0), 0.0)), 0.0);
  EXPECT_EQ(big_F(Complex(0.3, 0.5), Arc(std::polar(1.0, 2.0), kTwoPi)), 1.0);
  EXPECT_THROW(big_F(Complex(0.9999999999, 0), x), Error);
}

TEST(BigF, LowerSemicircleAgreesWithFZero) {
  Rng rng(7);
  const BoundaryFunction f0 = indicator(Arc(-1.0, kPi));
  for (int i = 0; i < 50; ++i) {
    const Complex z = testing::disc_point(rng, 0.95);
    EXPECT_NEAR(big_F(z, Arc(-1.0, kPi)), extend(f0, z).real(), 1e-12);
  }
}

TEST(BigF, AgreesWithExtensionAndQuadrature) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const Arc x = testing::random_arc(rng);
    const Complex z = testing::disc_point(rng, 0.9);
    const double f = big_F(z, x);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_NEAR(f, extend(indicator(x), z).real(), 1e-10);
    if (i < 40) EXPECT_NEAR(f, testing::poisson_by_quadrature(indicator(x), z).real(), 1e-10);
  }
}

TEST(Equivariance, RandomSuite) {
  Rng rng(9);
  EXPECT_LT(check_equivariance(MoebiusElement::identity(), Complex(0.2, 0.3), Arc::from_angles(1, 2)), 1e-15);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const Complex z = testing::disc_point(rng, 0.9);
    worst = std::max(worst, check_equivariance(g, z, testing::random_arc(rng)));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Equivariance, StableUnderIteration) {
  const MoebiusElement g = compose(MoebiusElement::rotation(0.4), MoebiusElement::hyperbolic(1.5));
  ASSERT_EQ(classify(g), ElementClass::hyperbolic);
  Complex z(0.1, -0.2);
  Arc x = Arc::from_angles(2.0, 1.3);
  const double f = big_F(z, x);
  for (int n = 0; n < 20; ++n) {
    z = g.act(z);
    x = act_arc(g, x);
  }
  ASSERT_LT(std::abs(z), 1.0 - 1e-9);
  EXPECT_LT(std::abs(big_F(z, x) - f), 1e-8);
}

TEST(Isotropy, DiagonalSubgroupFixesUpperArc) {
  for (double t : {0.3, 1.0, 2.5}) {
    const MoebiusElement a = from_half_plane({std::exp(t / 2), 0, 0, std::exp(-t / 2)});
    EXPECT_LT(isotropy_residual(a), 1e-10);
  }
  EXPECT_GT(isotropy_residual(MoebiusElement::rotation(kPi / 3)), 0.1);
  EXPECT_EQ(isotropy_residual(MoebiusElement::identity()), 0.0);
  EXPECT_GT(isotropy_residual(MoebiusElement::parabolic(0.5)), 1e-3);
}

TEST(Sphere, QuotientAndAction) {
  Rng rng(10);
  EXPECT_EQ(quotient_to_sphere(Arc(std::polar(1.0, 1.0), 0.0)).kind, SpherePoint::Kind::south);
  EXPECT_EQ(quotient_to_sphere(Arc(std::polar(1.0, 1.0), kTwoPi)).kind, SpherePoint::Kind::north);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    EXPECT_EQ(act_sphere(g, SpherePoint::north()).kind, SpherePoint::Kind::north);
    EXPECT_EQ(act_sphere(g, SpherePoint::south()).kind, SpherePoint::Kind::south);
    const Arc x = testing::random_arc(rng);
    const SpherePoint lhs = quotient_to_sphere(act_arc(g, x));
    const SpherePoint rhs = act_sphere(g, quotient_to_sphere(x));
    ASSERT_EQ(lhs.kind, SpherePoint::Kind::interior);
    ASSERT_EQ(rhs.kind, SpherePoint::Kind::interior);
    EXPECT_LT(arc_gap(lhs.arc, rhs.arc), 1e-15);
  }
}

}  // namespace
}  // namespace discdyn
