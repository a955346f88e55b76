#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hvlab::cli {

/// Exit codes: 0 when every checked property holds, 1 when one fails (a
/// witness is printed), 2 for malformed input or usage errors.
enum ExitCode : int { ok = 0, property_failed = 1, input_error = 2 };

/// Runs one command. args excludes the program name. Reports go to out,
/// diagnostics to err. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hvlab::cli
