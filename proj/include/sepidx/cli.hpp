#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepidx {

/// Runs `sepidx <subcommand> ...`. `args` excludes the program name. Results
/// go to `out`, diagnostics to `err`. Returns 0 on success, 2 on usage,
/// validation or parse errors, 1 on internal faults.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sepidx
