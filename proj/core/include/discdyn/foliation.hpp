#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "discdyn/boundary.hpp"

namespace discdyn {

/// Finitely generated subgroup of PSU(1,1). Letters 2i and 2i+1 are the
/// generator i and its inverse; words are written with a, b, c, ... for
/// generators and A, B, C, ... for inverses, applied right to left.
struct FuchsianGroup {
  std::vector<MoebiusElement> generators;
  std::string label;
  std::string relation;  // cyclic word equal to the identity

  std::size_t letter_count() const noexcept { return 2 * generators.size(); }
  MoebiusElement letter(std::size_t i) const;
  char letter_name(std::size_t i) const noexcept;
  /// Product of a word; throws Error(invalid_argument) for unknown letters.
  MoebiusElement evaluate(const std::string& word) const;
};

/// Regular-octagon side pairings of a genus-2 surface:
/// alpha = 1 + sqrt 2, beta_k = sqrt(2 + 2 sqrt 2) e^{ik pi/4}, k = 0..3.
FuchsianGroup genus2_group();

/// Componentwise distance of the relation product from the identity, modulo sign.
double relation_residual(const FuchsianGroup& group);

struct ShortWordCheck {
  std::size_t words = 0;
  double min_abs_trace = 0.0;  // over reduced words of length 1..max_len
  bool all_hyperbolic = false;
};

/// A cocompact torsion-free group has only hyperbolic non-trivial elements;
/// reduced words shorter than half the relation are non-trivial.
ShortWordCheck short_word_check(const FuchsianGroup& group, int max_len);

struct OrbitSample {
  std::vector<Arc> points;
  std::vector<std::string> words;
  std::vector<int> word_lengths;
  std::uint64_t rng_seed = 0;
  bool base_on_boundary = false;
};

/// Images of base under n_walks reduced random walks of length max_word_len.
/// Every prefix is recorded, so the sample for a larger budget contains the
/// smaller one. Output order is (word length, word).
OrbitSample orbit_sample(const FuchsianGroup& group, const Arc& base, int n_walks, int max_word_len,
                         std::uint64_t seed);

/// Fraction of occupied cells of a grid x grid partition of
/// [0, 2pi) x [margin, 2pi - margin].
double coverage(const OrbitSample& sample, int grid = 32, double margin = 0.2);

/// F restricted to the leaves; equals big_F.
double leafwise_F0(Complex z, const Arc& x);
/// max over letters of |F(gz, gx) - F(z, x)|.
double generator_invariance_residual(const FuchsianGroup& group, Complex z, const Arc& x);

/// The universal function (z, f) -> P[f](z).
Complex tautological_eval(Complex z, const StepFunction& f);
/// |P[f](g^{-1} z) - P[f ∘ g^{-1}](z)|.
double tautological_equivariance_residual(const MoebiusElement& g, Complex z, const StepFunction& f);

/// Point [z1, z2, t] of the cone |z1|^2 - |z2|^2 = t^2 in RP^4, stored with
/// |z1| = 1 and z1 in the canonical half-plane (Re > 0, or Re = 0 and Im > 0).
class ProjectivePoint {
 public:
  /// Throws Error(invalid_point) off the cone (relative residual > 1e-10).
  ProjectivePoint(Complex z1, Complex z2, double t);

  Complex z1() const noexcept { return z1_; }
  Complex z2() const noexcept { return z2_; }
  double t() const noexcept { return t_; }
  double cone_residual() const noexcept;

  friend ProjectivePoint projective_act(const MoebiusElement& g, const ProjectivePoint& p);

 private:
  struct Unchecked {};
  ProjectivePoint(Complex z1, Complex z2, double t, Unchecked);
  void normalize();
  Complex z1_, z2_;
  double t_;
};

/// [alpha z1 + beta conj(z2), alpha z2 + beta conj(z1), t].
ProjectivePoint projective_act(const MoebiusElement& g, const ProjectivePoint& p);

/// (conj(u1) z - u2) / (-conj(u2) z + u1). Throws Error(singular_point) when
/// the denominator is below 1e-12, Error(invalid_argument) for |z| >= 1.
Complex projective_f(Complex z, const ProjectivePoint& p);

/// |d f / d conj(z)| by central differences; O(h^2) for holomorphic f.
double holomorphy_residual(const std::function<Complex(Complex)>& f, Complex z, double h);

}  // namespace discdyn
