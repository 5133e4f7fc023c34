#pragma once

#include <iosfwd>

namespace astopo {

/// Command-line entry point. Exit codes: 0 success, 1 usage error, 2 data
/// or I/O error. Reports go to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace astopo
