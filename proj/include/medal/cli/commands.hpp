#pragma once

#include <string>
#include <vector>

namespace medal::cli {

/// Entry point behind the `medal` binary. Returns the process exit code:
/// 0 on success, 1 on partial failure, 2 on configuration/usage errors.
/// Outputs are written atomically (temp file + rename).
int dispatch(int argc, const char* const* argv);

/// Same, for in-process callers (tests); argv[0] is implied.
int dispatch(const std::vector<std::string>& args);

}  // namespace medal::cli
