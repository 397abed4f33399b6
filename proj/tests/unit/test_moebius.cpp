#include <gtest/gtest.h>

#include <cmath>

#include "discdyn/error.hpp"
#include "discdyn/moebius.hpp"
#include "generators.hpp"

namespace discdyn {
namespace {

using testing::Rng;

void expect_close(Complex a, Complex b, double tol) { EXPECT_LE(std::abs(a - b), tol) << a << " vs " << b; }

TEST(FromHalfPlane, IdentityMatrix) {
  const MoebiusElement g = from_half_plane({1, 0, 0, 1});
  expect_close(g.alpha(), 1.0, 1e-15);
  expect_close(g.beta(), 0.0, 1e-15);
}

TEST(FromHalfPlane, DiagonalGivesCoshSinh) {
  for (double t : {0.1, 1.0, 3.5}) {
    const MoebiusElement g = from_half_plane({std::exp(t / 2), 0, 0, std::exp(-t / 2)});
    expect_close(g.alpha(), std::cosh(t / 2), 1e-13);
    expect_close(g.beta(), -std::sinh(t / 2), 1e-13);
  }
}

TEST(FromHalfPlane, TranslationGivesUnipotentPair) {
  for (double s : {-2.0, 0.5, 7.0}) {
    const MoebiusElement g = from_half_plane({1, s, 0, 1});
    expect_close(g.alpha(), Complex(1, s / 2), 1e-14);
    expect_close(g.beta(), Complex(0, s / 2), 1e-14);
    EXPECT_NEAR(g.determinant(), 1.0, 1e-12);
  }
}

TEST(FromHalfPlane, RejectsNonUnimodular) {
  try {
    from_half_plane({2, 0, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_matrix);
  }
}

TEST(FromHalfPlane, RoundTripUpToSign) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double a = testing::uniform(rng, 0.3, 3), b = testing::uniform(rng, -2, 2), c = testing::uniform(rng, -2, 2);
    const HalfPlaneMatrix m{a, b, c, (1 + b * c) / a};
    const HalfPlaneMatrix back = from_half_plane(m).to_half_plane();
    const double sign = back.a * m.a > 0 ? 1.0 : -1.0;
    EXPECT_NEAR(sign * back.a, m.a, 1e-12);
    EXPECT_NEAR(sign * back.b, m.b, 1e-12);
    EXPECT_NEAR(sign * back.c, m.c, 1e-12);
    EXPECT_NEAR(sign * back.d, m.d, 1e-12);
  }
}

TEST(Compose, IdentityAndInverse) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    EXPECT_TRUE(approx_equal(compose(g, MoebiusElement::identity()), g));
    EXPECT_TRUE(approx_equal(compose(g, inverse(g)), MoebiusElement::identity(), 1e-12));
  }
}

TEST(Compose, RotationsAdd) {
  const MoebiusElement r = compose(MoebiusElement::rotation(0.7), MoebiusElement::rotation(1.9));
  const MoebiusElement expected = MoebiusElement::rotation(2.6);
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0), Complex(0, 0.9), Complex(0.3, -0.3), Complex(0.6, 0.6)})
    expect_close(r.act(z), expected.act(z), 1e-14);
}

TEST(Compose, ActsAsComposition) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testing::random_element(rng), h = testing::random_element(rng);
    const Complex z = testing::disc_point(rng, 0.95);
    expect_close(compose(g, h).act(z), g.act(h.act(z)), 1e-12);
  }
}

TEST(Compose, DeterminantPreserved) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const MoebiusElement g = testing::random_element(rng), h = testing::random_element(rng);
    EXPECT_NEAR(compose(g, h).determinant(), 1.0, 1e-12);
    EXPECT_NEAR(inverse(g).determinant(), 1.0, 1e-12);
  }
}

TEST(Inverse, HyperbolicPairFlipsBeta) {
  const double u = 0.8;
  const MoebiusElement g(std::cosh(u), -std::sinh(u));
  const MoebiusElement gi = inverse(g);
  expect_close(gi.alpha(), std::cosh(u), 1e-15);
  expect_close(gi.beta(), std::sinh(u), 1e-15);
  // g^{-1}(z) = (conj(alpha) z - beta) / (alpha - conj(beta) z)
  for (Complex z : {Complex(0.2, 0.1), Complex(-0.7, 0.3)}) {
    const Complex a = g.alpha(), b = g.beta();
    expect_close(gi.act(z), (std::conj(a) * z - b) / (a - std::conj(b) * z), 1e-14);
  }
}

TEST(Inverse, UndoesActionAndIsInvolution) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const Complex z = testing::disc_point(rng, 0.99);
    expect_close(inverse(g).act(g.act(z)), z, 1e-12);
    EXPECT_TRUE(approx_equal(inverse(inverse(g)), g));
  }
  EXPECT_TRUE(approx_equal(inverse(MoebiusElement::identity()), MoebiusElement::identity()));
}

TEST(Canonical, SignRuleMakesNegationEqual) {
  const MoebiusElement g(Complex(-1.2, 0.3), Complex(0.1, -0.7));
  const MoebiusElement h(Complex(1.2, -0.3), Complex(-0.1, 0.7));
  EXPECT_GT(g.alpha().real(), 0.0);
  EXPECT_EQ(g.alpha(), h.alpha());
  EXPECT_EQ(g.beta(), h.beta());
}

TEST(ActDisc, Examples) {
  const double u = 0.6;
  const MoebiusElement g(std::cosh(u), -std::sinh(u));
  expect_close(act_disc(g, 0.0), -std::tanh(u), 1e-15);
  expect_close(act_disc(MoebiusElement::identity(), Complex(0.3, 0.4)), Complex(0.3, 0.4), 0.0);
  EXPECT_THROW(act_disc(g, 1.1), Error);
}

TEST(ActDisc, BoundaryToBoundaryAndInteriorInside) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const Complex w = std::polar(1.0, testing::uniform(rng, 0, kTwoPi));
    EXPECT_NEAR(std::abs(act_disc(g, w)), 1.0, 1e-12);
    EXPECT_LT(std::abs(act_disc(g, testing::disc_point(rng, 0.9))), 1.0);
  }
}

Complex cross_ratio(Complex a, Complex b, Complex c, Complex d) { return (a - c) * (b - d) / ((a - d) * (b - c)); }

TEST(ActDisc, PreservesCrossRatio) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    Complex p[4];
    for (Complex& z : p) z = testing::disc_point(rng, 0.9);
    const Complex before = cross_ratio(p[0], p[1], p[2], p[3]);
    const Complex after = cross_ratio(g.act(p[0]), g.act(p[1]), g.act(p[2]), g.act(p[3]));
    EXPECT_LE(std::abs(before - after), 1e-9 * std::max(1.0, std::abs(before)));
  }
}

TEST(ActDisc, PreservesHyperbolicDistance) {
  Rng rng(9);
  auto dist = [](Complex a, Complex b) { return std::abs((a - b) / (1.0 - std::conj(a) * b)); };
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testing::random_element(rng);
    const Complex a = testing::disc_point(rng, 0.8), b = testing::disc_point(rng, 0.8);
    EXPECT_NEAR(dist(g.act(a), g.act(b)), dist(a, b), 1e-12);
  }
}

TEST(ActLine, NormalForms) {
  const double t = 0.9;
  const MoebiusElement h = from_half_plane({std::exp(t / 2), 0, 0, std::exp(-t / 2)});
  EXPECT_NEAR(act_line(h, 2.0).value(), std::exp(t) * 2.0, 1e-13);
  EXPECT_TRUE(act_line(h, ExtendedReal::infinity()).is_infinite());
  EXPECT_EQ(act_line(h, 0.0), ExtendedReal(0.0));
  const MoebiusElement p = MoebiusElement::parabolic(1.5);
  EXPECT_NEAR(act_line(p, -3.0).value(), -1.5, 1e-14);
  EXPECT_TRUE(act_line(p, ExtendedReal::infinity()).is_infinite());
  EXPECT_NEAR(act_line(MoebiusElement::identity(), 4.25).value(), 4.25, 0.0);
}

TEST(ActLine, PoleIsExact) {
  // x -> -1/x sends 0 to infinity and infinity to 0.
  const MoebiusElement s = from_half_plane({0, -1, 1, 0});
  EXPECT_TRUE(act_line(s, 0.0).is_infinite());
  EXPECT_EQ(act_line(s, ExtendedReal::infinity()), ExtendedReal(0.0));
}

TEST(ActLine, AgreesWithDiscActionThroughCayley) {
  Rng rng(10);
  auto eta = [](Complex z) -> ExtendedReal {
    if (std::abs(z + 1.0) < 1e-300) return ExtendedReal::infinity();
    return (Complex(0, 1) * (1.0 - z) / (1.0 + z)).real();
  };
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testing::random_element(rng, 0.5);
    const Complex w = std::polar(1.0, testing::uniform(rng, 0, kTwoPi));
    const ExtendedReal x = eta(w);
    const ExtendedReal lhs = act_line(g, x);
    const ExtendedReal rhs = eta(g.act(w));
    ASSERT_FALSE(lhs.is_infinite() || rhs.is_infinite());
    EXPECT_LE(std::abs(lhs.value() - rhs.value()), 1e-9 * std::max(1.0, std::abs(rhs.value()) * std::abs(rhs.value())));
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(MoebiusElement::identity()), ElementClass::identity);
  EXPECT_EQ(classify(MoebiusElement(std::cosh(0.3), -std::sinh(0.3))), ElementClass::hyperbolic);
  EXPECT_EQ(classify(MoebiusElement::rotation(1.0)), ElementClass::elliptic);
  EXPECT_EQ(classify(MoebiusElement::parabolic(2.0)), ElementClass::parabolic);
  EXPECT_EQ(classify(MoebiusElement::rotation(kTwoPi)), ElementClass::identity);
}

TEST(FixedPoints, HyperbolicDistinctParabolicSingle) {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testing::random_hyperbolic(rng);
    const auto fp = g.boundary_fixed_points();
    ASSERT_EQ(fp.size(), 2u);
    EXPECT_NEAR(std::abs(fp[0]), 1.0, 1e-12);
    EXPECT_GT(std::abs(fp[0] - fp[1]), 1e-6);
    for (Complex p : fp) expect_close(g.act(p), p, 1e-9);
  }
  const auto fp = MoebiusElement::parabolic(1.0).boundary_fixed_points();
  ASSERT_EQ(fp.size(), 1u);
  expect_close(fp[0], -1.0, 1e-12);
}

TEST(NormalForm, ConjugatesToLineNormalForm) {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testing::random_hyperbolic(rng);
    const NormalForm nf = normal_form(g);
    const MoebiusElement n = compose(compose(nf.conjugator, g), inverse(nf.conjugator));
    for (double x : {-3.0, 0.5, 2.0}) EXPECT_NEAR(act_line(n, x).value(), nf.multiplier * x, 1e-8 * nf.multiplier);
    EXPECT_GT(nf.multiplier, 1.0);
  }
  EXPECT_THROW(normal_form(MoebiusElement::rotation(1.0)), Error);
}

TEST(Power, MatchesRepeatedComposition) {
  Rng rng(14);
  const MoebiusElement g = testing::random_element(rng, 0.3);
  MoebiusElement acc;
  for (long k = 0; k < 12; ++k) {
    EXPECT_TRUE(approx_equal(power(g, k), acc, 1e-9));
    acc = compose(acc, g);
  }
  EXPECT_TRUE(approx_equal(power(g, -3), inverse(power(g, 3)), 1e-12));
}

}  // namespace
}  // namespace discdyn
