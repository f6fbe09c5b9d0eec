#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace macrovar {

inline constexpr const char* kVersion = "1.0.0";

/// Entry point of the `macrovar` tool; args exclude the program name.
/// Returns 0 on success, 2 on config errors, 3 on data errors and 4 on
/// numerical failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace macrovar
