#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ricci_lab {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIoError = 3,
  kChiRefusal = 4,
  kNotConverged = 5,
  kVerdictFailed = 6,
  kStepUnderflow = 7,
  kSolverFailed = 8,
  kInvalidMesh = 9,
};

/// Runs one `ricci-lab` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Output directory used when no --out-dir is given: $RICCI_LAB_OUT, else ".".
std::string default_output_dir();

}  // namespace ricci_lab
