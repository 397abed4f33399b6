#include "discdyn/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "discdyn/arcspace.hpp"
#include "discdyn/error.hpp"
#include "discdyn/parallel.hpp"
#include "discdyn/poisson.hpp"

namespace discdyn {

MoebiusElement FuchsianGroup::letter(std::size_t i) const {
  const MoebiusElement& g = generators.at(i / 2);
  return i % 2 == 0 ? g : inverse(g);
}

char FuchsianGroup::letter_name(std::size_t i) const noexcept {
  const char base = static_cast<char>('a' + i / 2);
  return i % 2 == 0 ? base : static_cast<char>(base - 'a' + 'A');
}

MoebiusElement FuchsianGroup::evaluate(const std::string& word) const {
  MoebiusElement w;
  for (char ch : word) {
    std::size_t i;
    if (ch >= 'a' && ch < static_cast<char>('a' + generators.size())) {
      i = 2 * static_cast<std::size_t>(ch - 'a');
    } else if (ch >= 'A' && ch < static_cast<char>('A' + generators.size())) {
      i = 2 * static_cast<std::size_t>(ch - 'A') + 1;
    } else {
      throw Error(Errc::invalid_argument, std::string("unknown letter '") + ch + "'");
    }
    w = compose(w, letter(i));
  }
  return w;
}

FuchsianGroup genus2_group() {
  FuchsianGroup g;
  g.label = "genus-2 regular octagon";
  const double a = 1.0 + std::sqrt(2.0);
  const double b = std::sqrt(2.0 + 2.0 * std::sqrt(2.0));
  for (int k = 0; k < 4; ++k) g.generators.emplace_back(Complex{a, 0.0}, std::polar(b, k * kPi / 4.0));
  g.relation = "aBcDAbCd";
  return g;
}

double relation_residual(const FuchsianGroup& group) {
  const MoebiusElement w = group.evaluate(group.relation);
  const double plus = std::max(std::abs(w.alpha() - 1.0), std::abs(w.beta()));
  const double minus = std::max(std::abs(w.alpha() + 1.0), std::abs(w.beta()));
  return std::min(plus, minus);
}

ShortWordCheck short_word_check(const FuchsianGroup& group, int max_len) {
  ShortWordCheck out;
  out.min_abs_trace = std::numeric_limits<double>::infinity();
  const std::size_t letters = group.letter_count();
  struct Node {
    MoebiusElement w;
    std::size_t last;
  };
  std::vector<Node> level;
  for (std::size_t i = 0; i < letters; ++i) level.push_back({group.letter(i), i});
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Node> next;
    for (const Node& node : level) {
      ++out.words;
      out.min_abs_trace = std::min(out.min_abs_trace, std::abs(node.w.trace()));
      if (len == max_len) continue;
      for (std::size_t i = 0; i < letters; ++i)
        if (i != (node.last ^ 1U)) next.push_back({compose(group.letter(i), node.w), i});
    }
    level = std::move(next);
  }
  out.all_hyperbolic = out.min_abs_trace > 2.0 + kClassifyTolerance;
  return out;
}

OrbitSample orbit_sample(const FuchsianGroup& group, const Arc& base, int n_walks, int max_word_len,
                         std::uint64_t seed) {
  if (n_walks < 0 || max_word_len < 0) throw Error(Errc::invalid_argument, "walk counts must be non-negative");
  const std::size_t letters = group.letter_count();
  if (letters == 0) throw Error(Errc::invalid_argument, "group has no generators");
  struct Entry {
    std::string word;
    Arc point;
  };
  std::vector<std::vector<Entry>> walks(static_cast<std::size_t>(n_walks));
  parallel_for(walks.size(), [&](std::size_t walk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(walk)};
    std::mt19937_64 rng(seq);
    Arc x = base;
    std::string word;
    std::size_t last = letters;  // none yet
    auto& out = walks[walk];
    out.reserve(static_cast<std::size_t>(max_word_len));
    for (int step = 0; step < max_word_len; ++step) {
      // Uniform over letters that do not cancel the previous one.
      const std::size_t choices = last == letters ? letters : letters - 1;
      std::size_t pick = static_cast<std::size_t>(rng() % choices);
      if (last != letters && pick >= (last ^ 1U)) ++pick;
      x = act_arc(group.letter(pick), x);
      word.insert(word.begin(), group.letter_name(pick));
      last = pick;
      out.push_back({word, x});
    }
  });
  std::vector<Entry> all{{std::string(), base}};
  for (auto& w : walks) all.insert(all.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  std::stable_sort(all.begin(), all.end(), [](const Entry& p, const Entry& q) {
    if (p.word.size() != q.word.size()) return p.word.size() < q.word.size();
    return p.word < q.word;
  });
  OrbitSample sample;
  sample.rng_seed = seed;
  sample.base_on_boundary = base.theta <= 0.0 || base.theta >= kTwoPi;
  for (auto& e : all) {
    sample.word_lengths.push_back(static_cast<int>(e.word.size()));
    sample.words.push_back(std::move(e.word));
    sample.points.push_back(e.point);
  }
  return sample;
}

double coverage(const OrbitSample& sample, int grid, double margin) {
  if (grid < 1 || !(margin >= 0.0) || 2.0 * margin >= kTwoPi)
    throw Error(Errc::invalid_argument, "coverage grid needs grid >= 1 and 0 <= margin < pi");
  std::set<long> cells;
  const double span = kTwoPi - 2.0 * margin;
  for (const Arc& p : sample.points) {
    if (p.theta < margin || p.theta > kTwoPi - margin) continue;
    const long i = std::min<long>(grid - 1, static_cast<long>(p.start_angle() / kTwoPi * grid));
    const long j = std::min<long>(grid - 1, static_cast<long>((p.theta - margin) / span * grid));
    cells.insert(i * grid + j);
  }
  return static_cast<double>(cells.size()) / (static_cast<double>(grid) * grid);
}

double leafwise_F0(Complex z, const Arc& x) { return big_F(z, x); }

double generator_invariance_residual(const FuchsianGroup& group, Complex z, const Arc& x) {
  double r = 0.0;
  for (std::size_t i = 0; i < group.letter_count(); ++i) r = std::max(r, check_equivariance(group.letter(i), z, x));
  return r;
}

Complex tautological_eval(Complex z, const StepFunction& f) { return extend(f, z); }

double tautological_equivariance_residual(const MoebiusElement& g, Complex z, const StepFunction& f) {
  const MoebiusElement gi = inverse(g);
  return std::abs(extend(f, act_disc(gi, z)) - extend(f.pull_back(CircleMap::from(gi)), z));
}

// ---------------------------------------------------------------------------

ProjectivePoint::ProjectivePoint(Complex z1, Complex z2, double t) : z1_(z1), z2_(z2), t_(t) {
  const double scale = std::max({std::abs(z1), std::abs(z2), std::abs(t)});
  if (!std::isfinite(scale) || scale == 0.0) throw Error(Errc::invalid_point, "projective point needs a non-zero finite vector");
  normalize();
  if (cone_residual() > 1e-10) throw Error(Errc::invalid_point, "point is off the cone |z1|^2 - |z2|^2 = t^2");
}

ProjectivePoint::ProjectivePoint(Complex z1, Complex z2, double t, Unchecked) : z1_(z1), z2_(z2), t_(t) {
  normalize();
}

void ProjectivePoint::normalize() {
  // On the cone |z1| dominates both other coordinates.
  const double m = std::max({std::abs(z1_), std::abs(z2_), std::abs(t_)});
  double s = 1.0 / m;
  if (z1_.real() < 0.0 || (z1_.real() == 0.0 && z1_.imag() < 0.0)) s = -s;
  z1_ *= s;
  z2_ *= s;
  t_ *= s;
}

double ProjectivePoint::cone_residual() const noexcept {
  return std::abs(std::norm(z1_) - std::norm(z2_) - t_ * t_);
}

ProjectivePoint projective_act(const MoebiusElement& g, const ProjectivePoint& p) {
  const Complex a = g.alpha(), b = g.beta();
  return {a * p.z1_ + b * std::conj(p.z2_), a * p.z2_ + b * std::conj(p.z1_), p.t_, ProjectivePoint::Unchecked{}};
}

Complex projective_f(Complex z, const ProjectivePoint& p) {
  if (!(std::abs(z) < 1.0)) throw Error(Errc::invalid_argument, "projective_f is defined on the open disc");
  const Complex u1 = p.z1(), u2 = p.z2();
  const Complex den = -std::conj(u2) * z + u1;
  if (std::abs(den) <= 1e-12) throw Error(Errc::singular_point, "denominator vanishes");
  return (std::conj(u1) * z - u2) / den;
}

double holomorphy_residual(const std::function<Complex(Complex)>& f, Complex z, double h) {
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "step must be positive");
  const Complex i{0.0, 1.0};
  const Complex fx = (f(z + h) - f(z - h)) / (2.0 * h);
  const Complex fy = (f(z + i * h) - f(z - i * h)) / (2.0 * h);
  return 0.5 * std::abs(fx + i * fy);
}

}  // namespace discdyn
