#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nestrec::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kIoError = 3,
};

/// Run the command line `args` (args[0] is the program name). Data goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nestrec::cli
