#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frob::cli {

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 ok, 1 failed validation, 2 invalid input,
/// 3 unsupported case, 4 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frob::cli
