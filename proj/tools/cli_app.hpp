#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qs::cli {

/// Parse and run one invocation (argv without the program name).  Exit codes:
/// 0 = completed with the expected outcome, 1 = completed with anomalies
/// (non-convergence, counterexample, invalid certificate, failed --expect),
/// 2 = usage error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qs::cli
