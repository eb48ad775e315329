#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexis::cli {

enum exit_code : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_data = 3,
    exit_internal = 4,
};

// Runs one command line (without the program name). Diagnostics go to `err`,
// short progress summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lexis::cli
