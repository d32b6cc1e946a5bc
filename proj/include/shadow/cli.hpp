#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shadow {

/// Process exit codes of the `shadow` command.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitComputation = 2,
    kExitUsage = 64,
    kExitIo = 74,
};

/// Entry point of the `shadow` command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shadow
