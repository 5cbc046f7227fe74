#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nifront::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kCalibrationFailure = 3;

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nifront::cli
