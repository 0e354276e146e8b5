#pragma once

#include <string>
#include <vector>

namespace strkit {

/// Entry point shared by the strkit binary and the tests. `args` excludes
/// the program name. Returns the process exit status: 0 on success, 1 on
/// usage/config errors, 2 when some entries failed but the run completed.
int run_cli(const std::vector<std::string>& args);

}  // namespace strkit
