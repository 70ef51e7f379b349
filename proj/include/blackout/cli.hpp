#pragma once

#include <iosfwd>

namespace blackout::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit status: 0 on success, 2 on bad usage or unreadable/invalid input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blackout::cli
