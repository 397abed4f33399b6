#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "discdyn/arcspace.hpp"
#include "discdyn/boundary.hpp"
#include "discdyn/chaos.hpp"
#include "discdyn/error.hpp"
#include "discdyn/foliation.hpp"
#include "discdyn/moebius.hpp"
#include "discdyn/poisson.hpp"

namespace discdyn::cli {

namespace {

constexpr Command kCommands[] = {Command::extend,  Command::act,       Command::orbit,
                                 Command::dense,   Command::periodic,  Command::arcflow,
                                 Command::foliate, Command::conjugate, Command::projective,
                                 Command::limit};

const char* description(Command c) {
  switch (c) {
    case Command::extend: return "Poisson extension of boundary data: PGM heatmap of Re phi and CSV of values";
    case Command::act: return "boundary data transported by a Moebius element, f o g^-1";
    case Command::orbit: return "orbit g^n . phi: value at a point and metric norm per step";
    case Command::dense: return "dense-orbit certificate ||gamma^{k_n} phi_inf - phi_n|| <= l(B_n^c)/pi";
    case Command::periodic: return "periodic approximant f_eps with gamma^k-periodicity and ||phi - phi_eps|| <= eps";
    case Command::arcflow: return "trajectory of an arc under iteration of g";
    case Command::foliate: return "genus-2 orbit sample on the arc cylinder with coverage summary";
    case Command::conjugate: return "conjugating boundary map and intertwining residual";
    case Command::projective: return "leafwise holomorphic function on the cone in RP^4";
    case Command::limit: return "oscillation of g^n . phi on K_3 and its value at 0";
  }
  return "";
}

// Empty default: required.
const std::map<Command, std::map<std::string, std::string>>& defaults_table() {
  static const std::map<Command, std::map<std::string, std::string>> table = {
      {Command::extend, {{"boundary", ""}, {"grid", "64"}, {"radius", "0.95"}}},
      {Command::act, {{"boundary", ""}, {"element", "lambda:2"}}},
      {Command::orbit, {{"boundary", ""}, {"element", "lambda:2"}, {"steps", "10"}, {"z", "0,0"}}},
      {Command::dense, {{"lambda", ""}, {"shift", ""}, {"levels", "6"}, {"seed", "0"}}},
      {Command::periodic,
       {{"epsilon", "0.3"}, {"lambda", ""}, {"shift", ""}, {"boundary", "target:3"}}},
      {Command::arcflow,
       {{"start", "0"}, {"length", "1.5707963267948966"}, {"element", "lambda:2"}, {"steps", "20"}}},
      {Command::foliate,
       {{"seed", "1"},
        {"points", "200"},
        {"max-word-len", "8"},
        {"base-zeta", "0"},
        {"base-theta", "3.1415926535897931"},
        {"grid", "32"}}},
      {Command::conjugate,
       {{"lambda1", ""}, {"lambda2", ""}, {"shift1", ""}, {"shift2", ""}, {"trials", "20"}, {"seed", "0"}}},
      {Command::projective, {{"z", "0.3,0.1"}, {"point", "1,0,0,0,1"}, {"element", "lambda:2"}, {"step", "1e-3"}}},
      {Command::limit, {{"boundary", "cos:720"}, {"element", "lambda:2"}, {"n-max", "60"}}},
  };
  return table;
}

// Keys that may stay unset: alternatives to another key.
bool optional_key(Command c, const std::string& key) {
  if ((key == "shift" || key == "lambda") && (c == Command::dense || c == Command::periodic)) return true;
  return c == Command::conjugate && key != "trials" && key != "seed";
}

Format default_format(Command c) {
  switch (c) {
    case Command::extend: return Format::pgm;
    case Command::act:
    case Command::conjugate:
    case Command::projective: return Format::json;
    default: return Format::csv;
  }
}

bool format_allowed(Command c, Format f) {
  if (f == default_format(c)) return true;
  switch (c) {
    case Command::orbit:
    case Command::dense:
    case Command::periodic:
    case Command::arcflow:
    case Command::limit: return f == Format::json;
    default: return false;
  }
}

Command command_from_string(const std::string& s) {
  for (Command c : kCommands)
    if (s == to_string(c)) return c;
  throw UsageError("unknown command '" + s + "'");
}

Format format_from_string(const std::string& s) {
  for (Format f : {Format::csv, Format::json, Format::pgm})
    if (s == to_string(f)) return f;
  throw UsageError("unknown format '" + s + "' (csv, json, pgm)");
}

// ---------------------------------------------------------------------------
// Parameter access.

class Params {
 public:
  explicit Params(const RunConfig& cfg) : cfg_(cfg) {}

  bool has(const std::string& key) const {
    auto it = cfg_.params.find(key);
    return it != cfg_.params.end() && !it->second.empty();
  }
  const std::string& str(const std::string& key) const {
    auto it = cfg_.params.find(key);
    if (it == cfg_.params.end() || it->second.empty()) throw UsageError("missing --" + key);
    return it->second;
  }
  double num(const std::string& key) const { return parse_number(str(key), key); }
  long integer(const std::string& key) const {
    const double v = num(key);
    if (v != std::floor(v) || std::abs(v) > 9e15) throw UsageError("--" + key + " must be an integer");
    return static_cast<long>(v);
  }
  std::vector<double> list(const std::string& key) const { return parse_list(str(key), key); }

  static double parse_number(const std::string& s, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("--" + key + ": '" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("--" + key + ": '" + s + "' is not a number");
    return v;
  }
  static std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, key));
    return out;
  }

 private:
  const RunConfig& cfg_;
};

std::string num17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string two_way(const std::string& key, const std::string& spec, std::size_t& colon) {
  colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--" + key + ": expected kind:values, got '" + spec + "'");
  return spec.substr(0, colon);
}

// lambda:L, shift:A, rotation:S, matrix:a,b,c,d or disc:Re a,Im a,Re b,Im b.
MoebiusElement parse_element(const std::string& spec) {
  std::size_t colon = 0;
  const std::string kind = two_way("element", spec, colon);
  const std::vector<double> v = Params::parse_list(spec.substr(colon + 1), "element");
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw UsageError("--element " + kind + " takes " + std::to_string(n) + " numbers");
  };
  if (kind == "lambda") {
    need(1);
    return MoebiusElement::hyperbolic(v[0]);
  }
  if (kind == "shift") {
    need(1);
    return MoebiusElement::parabolic(v[0]);
  }
  if (kind == "rotation") {
    need(1);
    return MoebiusElement::rotation(v[0]);
  }
  if (kind == "matrix") {
    need(4);
    return from_half_plane(HalfPlaneMatrix{v[0], v[1], v[2], v[3]});
  }
  if (kind == "disc") {
    need(4);
    return {Complex(v[0], v[1]), Complex(v[2], v[3])};
  }
  throw UsageError("--element: unknown kind '" + kind + "' (lambda, shift, rotation, matrix, disc)");
}

// A JSON path, target:N[,seed], cos:PIECES, or indicator:start,length.
BoundaryFunction parse_boundary(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind = colon == std::string::npos ? "" : spec.substr(0, colon);
  if (kind == "target") {
    const std::vector<double> v = Params::parse_list(spec.substr(colon + 1), "boundary");
    if (v.empty() || v.size() > 2 || v[0] < 1 || v[0] != std::floor(v[0]))
      throw UsageError("--boundary target:N[,seed] with N >= 1");
    return TargetFamily::element(static_cast<long>(v[0]), v.size() == 2 ? static_cast<std::uint64_t>(v[1]) : 0);
  }
  if (kind == "cos") {
    const std::vector<double> v = Params::parse_list(spec.substr(colon + 1), "boundary");
    if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) throw UsageError("--boundary cos:PIECES");
    const auto pieces = static_cast<std::size_t>(v[0]);
    std::vector<double> bp(pieces);
    std::vector<Complex> val(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
      bp[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(pieces);
      val[i] = std::cos(kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(pieces));
    }
    return {std::move(bp), std::move(val)};
  }
  if (kind == "indicator") {
    const std::vector<double> v = Params::parse_list(spec.substr(colon + 1), "boundary");
    if (v.size() != 2) throw UsageError("--boundary indicator:start,length");
    return indicator(Arc::from_angles(v[0], v[1]));
  }
  return read_boundary_file(spec);
}

Complex parse_point(const Params& p, const std::string& key) {
  const std::vector<double> v = p.list(key);
  if (v.size() != 2) throw UsageError("--" + key + " takes re,im");
  return {v[0], v[1]};
}

// ---------------------------------------------------------------------------
// Output plumbing.

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!*file_) throw UsageError("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw UsageError("write failed for " + (path.empty() ? std::string("output") : path));
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string replace_extension(const std::string& path, const std::string& ext) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void write_csv(std::ostream& os, const std::string& title, const std::string& echo) const {
    os << "# discdyn " << title << '\n' << "# config " << echo << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  }

  // Cells are numbers or already-quoted strings.
  void write_json(std::ostream& os, const std::string& title, const std::string& echo,
                  const std::string& extra = "") const {
    os << "{\"title\":" << nlohmann::json(title).dump() << ",\"config\":" << echo << ",\"rows\":[";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      os << (r ? "," : "") << '{';
      for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << '"' << columns[i] << "\":" << rows[r][i];
      os << '}';
    }
    os << ']' << extra << "}\n";
  }
};

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }
std::string boolean(bool b) { return b ? "true" : "false"; }

void emit_table(const RunConfig& cfg, Format fmt, const Table& t, const std::string& title, std::ostream& out) {
  Sink sink(cfg.output_path, out);
  const std::string echo = config_echo(cfg);
  if (fmt == Format::json) {
    t.write_json(*sink, title, echo);
  } else {
    t.write_csv(*sink, title, echo);
  }
  sink.finish(cfg.output_path);
}

// ---------------------------------------------------------------------------
// Commands.

int run_extend(const RunConfig& cfg, const Params& p, std::ostream& out) {
  const BoundaryFunction f = parse_boundary(p.str("boundary"));
  const long grid = p.integer("grid");
  const double radius = p.num("radius");
  if (grid < 2 || grid > 4096) throw UsageError("--grid must be in [2, 4096]");
  if (!(radius > 0.0) || radius > 1.0 - 1e-9) throw UsageError("--radius must be in (0, 1 - 1e-9]");
  const auto n = static_cast<std::size_t>(grid);
  std::vector<double> re(n * n, 0.0);
  std::vector<char> inside(n * n, 0);
  Table csv{{"x", "y", "re", "im"}, {}};
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t row = 0; row < n; ++row) {
    const double y = radius - 2.0 * radius * static_cast<double>(row) / static_cast<double>(n - 1);
    for (std::size_t col = 0; col < n; ++col) {
      const double x = -radius + 2.0 * radius * static_cast<double>(col) / static_cast<double>(n - 1);
      const Complex z(x, y);
      if (std::abs(z) > radius) continue;
      const Complex v = extend(f, z);
      re[row * n + col] = v.real();
      inside[row * n + col] = 1;
      lo = std::min(lo, v.real());
      hi = std::max(hi, v.real());
      csv.add({num17(x), num17(y), num17(v.real()), num17(v.imag())});
    }
  }
  const std::string echo = config_echo(cfg);
  {
    Sink pgm(cfg.output_path, out, true);
    *pgm << "P5\n# discdyn extend: Re phi on |z| <= " << num17(radius) << "\n# config " << echo << "\n# gray 0..255 maps Re phi from "
         << num17(lo) << " to " << num17(hi) << "; pixels outside the disc are 0\n"
         << n << ' ' << n << "\n255\n";
    for (std::size_t i = 0; i < n * n; ++i) {
      unsigned char g = 0;
      if (inside[i]) {
        const double t = hi > lo ? (re[i] - lo) / (hi - lo) : 0.5;
        g = static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
      }
      (*pgm).put(static_cast<char>(g));
    }
    pgm.finish(cfg.output_path);
  }
  std::string csv_path = cfg.report_path;
  if (csv_path.empty() && !cfg.output_path.empty()) csv_path = replace_extension(cfg.output_path, ".csv");
  if (!csv_path.empty()) {
    Sink sink(csv_path, out);
    csv.write_csv(*sink, "extend: phi(z) on the heatmap grid", echo);
    sink.finish(csv_path);
  }
  return kExitOk;
}

int run_act(const RunConfig& cfg, const Params& p, std::ostream& out) {
  const BoundaryFunction f = parse_boundary(p.str("boundary"));
  const MoebiusElement g = parse_element(p.str("element"));
  const BoundaryFunction moved = compose_with_moebius(f, inverse(g));
  Sink sink(cfg.output_path, out);
  std::string body = to_json(moved);
  *sink << "{\"config\":" << config_echo(cfg) << ',' << body.substr(1) << '\n';
  sink.finish(cfg.output_path);
  return kExitOk;
}

int run_orbit(const RunConfig& cfg, const Params& p, Format fmt, std::ostream& out) {
  const BoundaryFunction f = parse_boundary(p.str("boundary"));
  const MoebiusElement g = parse_element(p.str("element"));
  const long steps = p.integer("steps");
  const Complex z = parse_point(p, "z");
  if (steps < 0) throw UsageError("--steps must be non-negative");
  Table t{{"step", "value_re", "value_im", "norm", "norm_error_bar"}, {}};
  for (long n = 0; n <= steps; ++n) {
    const StepFunction moved = f.pull_back(CircleMap::power_of(g, -n));
    const Complex v = extend(moved, z);
    const MetricValue m = metric_norm(HarmonicFunction(moved));
    t.add({std::to_string(n), num17(v.real()), num17(v.imag()), num17(m.value), num17(m.error_bar)});
  }
  emit_table(cfg, fmt, t, "orbit: g^n . phi", out);
  return kExitOk;
}

int run_dense(const RunConfig& cfg, const Params& p, Format fmt, std::ostream& out) {
  const int levels = static_cast<int>(p.integer("levels"));
  if (levels < 1 || levels > 40) throw UsageError("--levels must be in [1, 40]");
  const DenseOrbitSchedule sched =
      p.has("shift") ? make_parabolic_schedule(p.num("shift"), levels) : make_schedule(p.num("lambda"), levels);
  const TargetFamily family(levels, static_cast<std::uint64_t>(p.integer("seed")));
  const std::vector<DenseRow> rows = dense_orbit_report(family, sched);
  Table t{{"n", "k_n", "dist", "bound", "error_bar", "ok"}, {}};
  bool ok = schedule_is_valid(sched);
  for (const DenseRow& r : rows) {
    t.add({std::to_string(r.n), std::to_string(r.k), num17(r.dist.value), num17(r.bound), num17(r.dist.error_bar),
           fmt == Format::json ? boolean(r.ok) : std::to_string(r.ok ? 1 : 0)});
    ok = ok && r.ok;
  }
  emit_table(cfg, fmt, t, "dense: ||gamma^{k_n} phi_inf - phi_n|| against l(B_n^c)/pi", out);
  return ok ? kExitOk : kExitViolation;
}

int run_periodic(const RunConfig& cfg, const Params& p, Format fmt, std::ostream& out) {
  const BoundaryFunction f = parse_boundary(p.str("boundary"));
  const MoebiusElement gamma =
      p.has("shift") ? MoebiusElement::parabolic(p.num("shift")) : MoebiusElement::hyperbolic(p.num("lambda"));
  const std::vector<double> eps = p.list("epsilon");
  if (eps.empty()) throw UsageError("--epsilon needs at least one value");
  Table t{{"epsilon", "n", "k", "l1_defect", "l1_bound", "metric_defect", "metric_error_bar", "periodic",
           "max_shift", "ok"},
          {}};
  bool ok = true;
  std::string approximants;
  for (double e : eps) {
    if (!(e > 0.0) || e > 2.0) throw UsageError("--epsilon values must be in (0, 2]");
    const PeriodicRow r = periodic_report(f, e, gamma);
    auto flag = [&](bool b) { return fmt == Format::json ? boolean(b) : std::to_string(b ? 1 : 0); };
    t.add({num17(e), std::to_string(r.n), std::to_string(r.k), num17(r.l1_defect), num17(r.l1_bound),
           num17(r.metric_defect.value), num17(r.metric_defect.error_bar), flag(r.periodicity.exact),
           num17(r.periodicity.max_shift), flag(r.ok)});
    ok = ok && r.ok;
    if (!cfg.report_path.empty()) {
      const PeriodicApproximant a = build_periodic_approximant(f, e, gamma);
      approximants += std::string(approximants.empty() ? "" : ",") + "{\"epsilon\":" + num17(e) +
                      ",\"k\":" + std::to_string(a.k) + ",\"f_eps\":" + to_json(a.f_eps) + '}';
    }
  }
  emit_table(cfg, fmt, t, "periodic: f_eps = sum_m (1_B f) o gamma^{mk}", out);
  if (!cfg.report_path.empty()) {
    Sink sink(cfg.report_path, out);
    *sink << "{\"config\":" << config_echo(cfg) << ",\"approximants\":[" << approximants << "]}\n";
    sink.finish(cfg.report_path);
  }
  return ok ? kExitOk : kExitViolation;
}

int run_arcflow(const RunConfig& cfg, const Params& p, Format fmt, std::ostream& out) {
  const MoebiusElement g = parse_element(p.str("element"));
  const long steps = p.integer("steps");
  if (steps < 0) throw UsageError("--steps must be non-negative");
  Arc x = Arc::from_angles(p.num("start"), p.num("length"));
  Table t{{"step", "zeta_re", "zeta_im", "theta"}, {}};
  for (long n = 0; n <= steps; ++n) {
    if (n > 0) x = act_arc(g, x);
    t.add({std::to_string(n), num17(x.zeta.real()), num17(x.zeta.imag()), num17(x.theta)});
  }
  emit_table(cfg, fmt, t, "arcflow: (zeta, theta) -> (g zeta, Theta_g(zeta, theta))", out);
  return kExitOk;
}

int run_foliate(const RunConfig& cfg, const Params& p, std::ostream& out) {
  const long points = p.integer("points");
  const long max_len = p.integer("max-word-len");
  const long grid = p.integer("grid");
  if (points < 1 || max_len < 0 || grid < 1) throw UsageError("--points, --grid must be positive and --max-word-len >= 0");
  const FuchsianGroup group = genus2_group();
  const Arc base = Arc::from_angles(p.num("base-zeta"), p.num("base-theta"));
  const OrbitSample s = orbit_sample(group, base, static_cast<int>(points), static_cast<int>(max_len),
                                     static_cast<std::uint64_t>(p.integer("seed")));
  const double cov = coverage(s, static_cast<int>(grid));
  Table t{{"word_length", "word", "zeta_re", "zeta_im", "theta"}, {}};
  for (std::size_t i = 0; i < s.points.size(); ++i)
    t.add({std::to_string(s.word_lengths[i]), s.words[i].empty() ? "e" : s.words[i], num17(s.points[i].zeta.real()),
           num17(s.points[i].zeta.imag()), num17(s.points[i].theta)});
  const std::string echo = config_echo(cfg);
  const auto cells = std::lround(cov * static_cast<double>(grid * grid));
  const std::string summary = "{\"config\":" + echo + ",\"coverage\":" + num17(cov) + ",\"cells\":" +
                              std::to_string(cells) + ",\"grid\":" + std::to_string(grid) +
                              ",\"points\":" + std::to_string(s.points.size()) +
                              ",\"base_on_boundary\":" + boolean(s.base_on_boundary) + "}";
  {
    Sink sink(cfg.output_path, out);
    t.write_csv(*sink, "foliate: genus-2 orbit of an arc", echo);
    if (cfg.report_path.empty() && cfg.output_path.empty()) *sink << "# summary " << summary << '\n';
    sink.finish(cfg.output_path);
  }
  std::string summary_path = cfg.report_path;
  if (summary_path.empty() && !cfg.output_path.empty()) summary_path = replace_extension(cfg.output_path, ".json");
  if (!summary_path.empty()) {
    Sink sink(summary_path, out);
    *sink << summary << '\n';
    sink.finish(summary_path);
  }
  return kExitOk;
}

int run_conjugate(const RunConfig& cfg, const Params& p, std::ostream& out) {
  auto element = [&](const char* lambda, const char* shift) {
    if (p.has(lambda) == p.has(shift))
      throw UsageError(std::string("give exactly one of --") + lambda + " and --" + shift);
    return p.has(lambda) ? MoebiusElement::hyperbolic(p.num(lambda)) : MoebiusElement::parabolic(p.num(shift));
  };
  const MoebiusElement g1 = element("lambda1", "shift1");
  const MoebiusElement g2 = element("lambda2", "shift2");
  const long trials = p.integer("trials");
  if (trials < 1) throw UsageError("--trials must be positive");
  const Conjugacy c = conjugating_map(g1, g2);
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  double worst = 0.0, worst_bar = 0.0;
  std::string residuals;
  for (long i = 1; i <= trials; ++i) {
    const MetricValue r = intertwining_residual(c, g1, g2, TargetFamily::element(i, seed));
    if (r.upper() > worst + worst_bar) {
      worst = r.value;
      worst_bar = r.error_bar;
    }
    residuals += std::string(i > 1 ? "," : "") + num17(r.upper());
  }
  const bool ok = worst + worst_bar < 1e-9;
  Sink sink(cfg.output_path, out);
  *sink << "{\"config\":" << config_echo(cfg) << ",\"kind\":" << quoted(to_string(c.kind))
        << ",\"exponent\":" << num17(c.exponent) << ",\"max_residual\":" << num17(worst)
        << ",\"max_error_bar\":" << num17(worst_bar) << ",\"residual_upper\":[" << residuals
        << "],\"ok\":" << boolean(ok) << "}\n";
  sink.finish(cfg.output_path);
  return ok ? kExitOk : kExitViolation;
}

int run_projective(const RunConfig& cfg, const Params& p, std::ostream& out) {
  const Complex z = parse_point(p, "z");
  const std::vector<double> v = p.list("point");
  if (v.size() != 5) throw UsageError("--point takes Re z1,Im z1,Re z2,Im z2,t");
  const ProjectivePoint pt(Complex(v[0], v[1]), Complex(v[2], v[3]), v[4]);
  const MoebiusElement g = parse_element(p.str("element"));
  const double h = p.num("step");
  const Complex value = projective_f(z, pt);
  const ProjectivePoint moved = projective_act(g, pt);
  const double invariance = std::abs(projective_f(g.act(z), moved) - value);
  const double cr = holomorphy_residual([&](Complex w) { return projective_f(w, pt); }, z, h);
  const bool ok = invariance < 1e-9 && moved.cone_residual() < 1e-9;
  Sink sink(cfg.output_path, out);
  *sink << "{\"config\":" << config_echo(cfg) << ",\"f\":[" << num17(value.real()) << ',' << num17(value.imag())
        << "],\"invariance_residual\":" << num17(invariance) << ",\"cone_residual\":" << num17(pt.cone_residual())
        << ",\"moved_cone_residual\":" << num17(moved.cone_residual())
        << ",\"cauchy_riemann_residual\":" << num17(cr) << ",\"ok\":" << boolean(ok) << "}\n";
  sink.finish(cfg.output_path);
  return ok ? kExitOk : kExitViolation;
}

int run_limit(const RunConfig& cfg, const Params& p, Format fmt, std::ostream& out) {
  const BoundaryFunction f = parse_boundary(p.str("boundary"));
  const MoebiusElement g = parse_element(p.str("element"));
  const long n_max = p.integer("n-max");
  if (n_max < 0) throw UsageError("--n-max must be non-negative");
  Table t{{"n", "oscillation", "value_re", "value_im"}, {}};
  for (const LimitRow& r : limit_diagnostic(f, g, n_max))
    t.add({std::to_string(r.n), num17(r.oscillation), num17(r.value.real()), num17(r.value.imag())});
  emit_table(cfg, fmt, t, "limit: oscillation of g^n . phi on K_3", out);
  return kExitOk;
}

RunConfig with_defaults(const RunConfig& cfg) {
  RunConfig full = cfg;
  for (const auto& [key, value] : parameter_defaults(cfg.command))
    if (!value.empty()) full.params.try_emplace(key, value);
  // lambda = 2 unless a parabolic shift was asked for.
  if ((cfg.command == Command::dense || cfg.command == Command::periodic) && !full.params.count("shift"))
    full.params.try_emplace("lambda", "2");
  if (!full.format) full.format = default_format(cfg.command);
  return full;
}

void validate(const RunConfig& cfg) {
  const auto& known = parameter_defaults(cfg.command);
  for (const auto& [key, value] : cfg.params)
    if (!known.count(key)) throw UsageError(std::string("unknown parameter '") + key + "' for " + to_string(cfg.command));
  for (const auto& [key, value] : known) {
    if (!value.empty() || optional_key(cfg.command, key)) continue;
    auto it = cfg.params.find(key);
    if (it == cfg.params.end() || it->second.empty())
      throw UsageError(std::string(to_string(cfg.command)) + " requires --" + key);
  }
  if (cfg.format && !format_allowed(cfg.command, *cfg.format))
    throw UsageError(std::string(to_string(cfg.command)) + " does not write " + to_string(*cfg.format));
  if ((cfg.command == Command::dense || cfg.command == Command::periodic) && cfg.params.count("lambda") &&
      cfg.params.count("shift"))
    throw UsageError("give --lambda or --shift, not both");
}

std::string scalar_to_param(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + scalar_to_param(v[i]);
    return s;
  }
  if (v.is_number_float()) return num17(v.get<double>());
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw UsageError("config values must be strings, numbers or arrays");
}

void apply_config_file(const std::string& path, std::optional<Command>& command, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("malformed config ") + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      const Command c = command_from_string(scalar_to_param(value));
      if (command && *command != c) throw UsageError("config command differs from the command line");
      command = c;
    } else if (key == "output") {
      cfg.output_path = scalar_to_param(value);
    } else if (key == "report") {
      cfg.report_path = scalar_to_param(value);
    } else if (key == "format") {
      cfg.format = format_from_string(scalar_to_param(value));
    } else if (key == "params") {
      if (!value.is_object()) throw UsageError("config \"params\" must be an object");
      for (const auto& [k, v] : value.items()) cfg.params[k] = scalar_to_param(v);
    } else {
      cfg.params[key] = scalar_to_param(value);
    }
  }
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::extend: return "extend";
    case Command::act: return "act";
    case Command::orbit: return "orbit";
    case Command::dense: return "dense";
    case Command::periodic: return "periodic";
    case Command::arcflow: return "arcflow";
    case Command::foliate: return "foliate";
    case Command::conjugate: return "conjugate";
    case Command::projective: return "projective";
    case Command::limit: return "limit";
  }
  return "unknown";
}

const char* to_string(Format f) noexcept {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::pgm: return "pgm";
  }
  return "unknown";
}

const std::map<std::string, std::string>& parameter_defaults(Command c) { return defaults_table().at(c); }

std::string config_echo(const RunConfig& config) {
  const RunConfig full = with_defaults(config);
  nlohmann::json doc;
  doc["command"] = to_string(full.command);
  doc["format"] = to_string(*full.format);
  doc["params"] = nlohmann::json::object();
  for (const auto& [key, value] : full.params) doc["params"][key] = value;
  return doc.dump();
}

RunConfig parse_command_line(const std::vector<std::string>& args) {
  CLI::App app{"discdyn: bounded harmonic functions on the disc under Moebius dynamics", "discdyn"};
  app.require_subcommand(0, 1);
  std::string config_path, output, report, format;
  app.add_option("--config", config_path, "JSON file with command, params, output, report, format");

  struct Bound {
    Command command;
    CLI::App* sub;
    std::map<std::string, std::string> values;
  };
  std::vector<std::unique_ptr<Bound>> subs;
  for (Command c : kCommands) {
    auto b = std::make_unique<Bound>();
    b->command = c;
    b->sub = app.add_subcommand(to_string(c), description(c));
    for (const auto& [key, def] : parameter_defaults(c)) {
      auto* opt = b->sub->add_option("--" + key, b->values[key]);
      if (!def.empty()) opt->description("default " + def);
    }
    b->sub->add_option("--config", config_path, "JSON config; flags override it");
    b->sub->add_option("-o,--output", output, "primary artifact path (default: stdout)");
    b->sub->add_option("--report", report, "companion artifact path");
    b->sub->add_option("--format", format, "csv, json or pgm");
    subs.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::optional<Command> command;
  const Bound* chosen = nullptr;
  for (const auto& b : subs)
    if (b->sub->parsed()) {
      command = b->command;
      chosen = b.get();
    }
  RunConfig cfg;
  if (!config_path.empty()) apply_config_file(config_path, command, cfg);
  if (!command) throw UsageError("no command given\n" + app.help());
  cfg.command = *command;
  if (chosen) {
    for (const auto& [key, value] : chosen->values)
      if (chosen->sub->count("--" + key) > 0) cfg.params[key] = value;
  }
  if (!output.empty()) cfg.output_path = output;
  if (!report.empty()) cfg.report_path = report;
  if (!format.empty()) cfg.format = format_from_string(format);
  validate(cfg);
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const RunConfig cfg = with_defaults(config);
    const Params p(cfg);
    const Format fmt = *cfg.format;
    switch (cfg.command) {
      case Command::extend: return run_extend(cfg, p, out);
      case Command::act: return run_act(cfg, p, out);
      case Command::orbit: return run_orbit(cfg, p, fmt, out);
      case Command::dense: return run_dense(cfg, p, fmt, out);
      case Command::periodic: return run_periodic(cfg, p, fmt, out);
      case Command::arcflow: return run_arcflow(cfg, p, fmt, out);
      case Command::foliate: return run_foliate(cfg, p, out);
      case Command::conjugate: return run_conjugate(cfg, p, out);
      case Command::projective: return run_projective(cfg, p, out);
      case Command::limit: return run_limit(cfg, p, fmt, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_command_line(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace discdyn::cli
