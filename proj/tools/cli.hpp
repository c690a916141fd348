#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spotsched::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kPreconditionError = 3,
    kNotConverged = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spotsched::cli
