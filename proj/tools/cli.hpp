#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vrlab::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;  // I/O or input parse failure
inline constexpr int kUsageError = 2;    // bad arguments

// Entry point of the vrlab tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vrlab::cli
