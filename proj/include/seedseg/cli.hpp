#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seedseg {

/// Entry point of the `seedseg` tool. args[0] is the program name.
/// Returns 0 on success, 1 on a processing error and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seedseg
