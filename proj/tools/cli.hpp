#pragma once

#include <iosfwd>

namespace sobolev::cli {

/// Exit codes: 0 every check passed, 1 a check failed (the row is printed), 2 usage or numeric error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sobolev::cli
