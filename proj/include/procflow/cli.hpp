#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace procflow {

// Exit codes: 0 success, 1 validation/verification failure, 2 parse/IO/usage
// error. Reports go to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                std::ostream& err);

}  // namespace procflow
