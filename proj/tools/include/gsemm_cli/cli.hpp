#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsemm::cli {

enum ExitCode : int { Ok = 0, ConfigFailure = 1, NumericalFailure = 2 };

/// Entry point of the gsemm tool. argv[0] is the program name.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace gsemm::cli
