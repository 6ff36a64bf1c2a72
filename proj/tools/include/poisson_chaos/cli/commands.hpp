#pragma once

#include <iosfwd>

#include "poisson_chaos/cli/config.hpp"

namespace poisson_chaos::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kCheckFailure = 2 };

// Loads, validates and executes; writes outputs and manifest.json into
// options.out. Messages go to `log`, problems to `err`.
int run(const RunOptions& options, std::ostream& log, std::ostream& err);

// Parses argv (CLI11) and calls run().
int main_entry(int argc, char** argv);

}  // namespace poisson_chaos::cli
