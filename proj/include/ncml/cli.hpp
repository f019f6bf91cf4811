#pragma once

#include <iosfwd>

namespace ncml {

// Entry point for the ncml tool. Results go to --out or `out`; diagnostics
// go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncml
