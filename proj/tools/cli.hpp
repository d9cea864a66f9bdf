#pragma once

#include <iosfwd>

namespace gcf::cli {

enum ExitCode { kOk = 0, kCheckFailure = 1, kSolverFailure = 2, kUsage = 3 };

/// Full command line, argv[0] included.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcf::cli
