#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sumprod/finite_set.hpp"

namespace sumprod::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kExplicitFailure = 3,
  kOracleMismatch = 4,
  kResource = 5,
};

/// Reads a set file; duplicate warnings go to `diag`. Throws ParseError or IoError.
FiniteSet load_set_file(const std::string& path, std::ostream& diag);

/// args excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumprod::cli
