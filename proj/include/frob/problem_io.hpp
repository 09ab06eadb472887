#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "frob/ode.hpp"

namespace frob {

/// A problem as read from a JSON file. Either
///   {"p": [...], "q": [...], "r": [...]}
/// with coefficients in ascending powers as exact strings ("3/4", "-2",
/// "1.5e-2", "re,im") or integers, or
///   {"canonical": {"nu_plus": "1/2", "nu_minus": "0", "v": [...], "s": 1}}.
/// Optional keys: "name", "center" (expansion point, pqr form only) and
/// "initial" (a pair, meaning as in SolutionSpec).
struct ProblemFile {
  std::string name;
  ODEProblem problem;
  std::optional<CanonicalProblem> canonical;
  std::optional<std::pair<QComplex, QComplex>> initial;
};

/// Throws ParseError on malformed JSON or schema violations.
ProblemFile parse_problem(std::string_view json_text);

/// Reads a file; "-" reads standard input.
ProblemFile load_problem(const std::string& path);

}  // namespace frob
