#pragma once

#include <iosfwd>

namespace pspt {

// CLI entry point, factored out of main() so tests can drive it in-process.
// Exit codes: 0 success, 2 usage error, 1 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace pspt
