#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccx {

/// Runs one subcommand: lift, matrices, pool, train, reduce-hasse or
/// features. args excludes the program name. Returns 0 on success, 2 on
/// invalid input or usage, 1 on internal failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccx
