#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "discdyn/boundary.hpp"
#include "discdyn/error.hpp"

namespace discdyn {

namespace {

void append_number(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

std::string to_json(const StepFunction& f) {
  std::string out = "{\"breakpoints\":[";
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    if (i) out += ',';
    append_number(out, f.breakpoints()[i]);
  }
  out += "],\"values\":[";
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    if (i) out += ',';
    out += '[';
    append_number(out, f.values()[i].real());
    out += ',';
    append_number(out, f.values()[i].imag());
    out += ']';
  }
  out += "]}";
  return out;
}

BoundaryFunction boundary_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, std::string("boundary JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("breakpoints") || !doc.contains("values"))
    throw Error(Errc::parse, "boundary JSON needs \"breakpoints\" and \"values\"");
  std::vector<double> breakpoints;
  std::vector<Complex> values;
  try {
    for (const auto& b : doc.at("breakpoints")) breakpoints.push_back(b.get<double>());
    for (const auto& v : doc.at("values")) {
      if (v.is_number()) {
        values.emplace_back(v.get<double>(), 0.0);
      } else if (v.is_array() && v.size() == 2) {
        values.emplace_back(v[0].get<double>(), v[1].get<double>());
      } else {
        throw Error(Errc::parse, "boundary values are numbers or [re, im] pairs");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("boundary JSON: ") + e.what());
  }
  return {std::move(breakpoints), std::move(values)};
}

BoundaryFunction read_boundary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return boundary_from_json(ss.str());
}

}  // namespace discdyn
