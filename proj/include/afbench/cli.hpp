#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace afbench {

/// Entry point of the `afbench` tool. args excludes the program name.
/// Returns 0 on success, 1 on a computation failure, 2 on a usage or config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace afbench
