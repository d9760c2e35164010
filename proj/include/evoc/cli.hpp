// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evoc::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;       // malformed or missing input, bad usage
inline constexpr int kExitValidation = 2;  // a numerical validity check failed

/// Runs the tool with `args` (program name excluded). Command summaries go to
/// `out`; failures are reported on `err` as a single JSON object
/// {"error": {"kind": "input" | "validation", "message": "..."}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evoc::cli
