#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigshift::cli {

// Runs one command line (args excludes the program name). Results go to `out`, the
// resolved-config echo and diagnostics to `err`.
// Exit codes: 0 ok, 1 runtime failure, 2 usage or config error, 3 generator rejection.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sigshift::cli
