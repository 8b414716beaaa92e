#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace llbc {

/// Exit codes: 0 success, 1 domain error, 2 usage error. `args` excludes the
/// program name. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace llbc
