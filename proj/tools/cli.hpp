#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bbank::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kIo = 3 };

/// Entry point shared by the bbank binary and the CLI tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bbank::cli
