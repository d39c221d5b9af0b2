#pragma once

#include <iosfwd>

namespace msr {

// Entry point of the msr command-line tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace msr
