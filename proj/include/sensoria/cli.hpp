#pragma once

#include <string>
#include <vector>

namespace sensoria::cli {

// Full command-line entry point. Returns the process exit code:
// 0 success, 1 bad configuration or input, 2 runtime failure.
int run(int argc, const char* const* argv);

// Same, with arguments given without the program name.
int run(const std::vector<std::string>& args);

}  // namespace sensoria::cli
