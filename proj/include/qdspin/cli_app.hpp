#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdspin::cli {

/// Runs one command-line invocation; `args` excludes the program name.
/// Configuration precedence: built-in defaults, then the config file
/// (--config or the QDSPIN_CONFIG environment variable), then flags.
/// Returns 0 on success, 1 on usage/parse errors, 2 on domain errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdspin::cli
