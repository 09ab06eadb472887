#include "frob/problem_io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "frob/error.hpp"

namespace frob {

namespace {

using nlohmann::json;

QComplex coefficient(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return QComplex::parse(j.get<std::string>());
    if (j.is_number_integer()) return QComplex(Rational(j.get<long>()));
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected an exact string or an integer");
}

Rational real_coefficient(const json& j, const std::string& where) {
  const QComplex c = coefficient(j, where);
  if (!c.is_real()) throw ParseError(where + ": must be real");
  return c.re();
}

Poly poly(const json& obj, const char* key) {
  if (!obj.contains(key)) return Poly();
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw ParseError(std::string(key) + ": expected an array");
  std::vector<QComplex> c;
  for (std::size_t i = 0; i < arr.size(); ++i)
    c.push_back(coefficient(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return Poly(std::move(c));
}

CanonicalProblem canonical(const json& c) {
  if (!c.is_object()) throw ParseError("canonical: expected an object");
  for (const char* key : {"nu_plus", "nu_minus", "v"})
    if (!c.contains(key)) throw ParseError(std::string("canonical: missing '") + key + "'");
  CanonicalProblem cp;
  cp.nu_plus = real_coefficient(c.at("nu_plus"), "canonical.nu_plus");
  cp.nu_minus = real_coefficient(c.at("nu_minus"), "canonical.nu_minus");
  const json& v = c.at("v");
  if (!v.is_array()) throw ParseError("canonical.v: expected an array");
  for (std::size_t i = 0; i < v.size(); ++i)
    cp.v.push_back(real_coefficient(v[i], "canonical.v[" + std::to_string(i) + "]"));
  if (c.contains("s")) {
    if (!c.at("s").is_number()) throw ParseError("canonical.s: expected a number");
    cp.s = c.at("s").get<double>();
    if (!(cp.s > 0)) throw ParseError("canonical.s: must be positive");
  }
  return cp;
}

}  // namespace

ProblemFile parse_problem(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("problem file: expected a JSON object");

  const bool has_pqr = j.contains("p") || j.contains("q") || j.contains("r");
  const bool has_canonical = j.contains("canonical");
  if (has_pqr == has_canonical) throw ParseError("problem file: give exactly one of p/q/r or canonical");

  ProblemFile out;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ParseError("name: expected a string");
    out.name = j.at("name").get<std::string>();
  }
  try {
    if (has_canonical) {
      if (j.contains("center")) throw ParseError("center: only allowed with p/q/r");
      out.canonical = canonical(j.at("canonical"));
      out.problem = from_canonical(*out.canonical);
    } else {
      if (!j.contains("p")) throw ParseError("problem file: missing 'p'");
      out.problem = ODEProblem(poly(j, "p"), poly(j, "q"), poly(j, "r"));
      if (j.contains("center")) {
        const QComplex c = coefficient(j.at("center"), "center");
        if (!c.is_zero()) out.problem = recenter(out.problem, c);
      }
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (!init.is_array() || init.size() != 2) throw ParseError("initial: expected a pair");
    out.initial = std::pair{coefficient(init[0], "initial[0]"), coefficient(init[1], "initial[1]")};
  }
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_problem(text);
}

}  // namespace frob
