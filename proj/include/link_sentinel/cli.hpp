#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace link_sentinel::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kNoIsolatingSet = 3,
    kInadmissibleFailure = 4,
    kTheoremViolation = 5,
};

inline constexpr const char* kSeedEnvVar = "LINK_SENTINEL_SEED";
inline constexpr unsigned long long kDefaultVerifySeed = 20120627ULL;

// Runs the command line (args excludes the program name); results go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace link_sentinel::cli
