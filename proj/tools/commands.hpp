#pragma once

#include "sasrate/error.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace sasrate::cli {

enum ExitCode { kOk = 0, kUsage = 2, kExternal = 3, kData = 4 };

int exit_code_for(ErrorKind kind);

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sasrate::cli
