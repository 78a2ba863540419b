#pragma once

#include <iosfwd>

namespace helios {

/// Entry point of the `helios` executable. Exit codes: 0 success, 2 input
/// error, 3 domain error (e.g. sun below horizon), 4 numeric error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace helios
