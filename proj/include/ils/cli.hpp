#pragma once
// Command-line front end. run() takes the argument list without the
// program name and writes results to `out`, diagnostics to `err`.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace ils::cli {

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ils::cli
