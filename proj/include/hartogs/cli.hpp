#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hartogs::cli {

/// Runs one subcommand. Reports go to --out (a path, or '-' for `out`);
/// diagnostics go to `err`. Exit codes: 0 the computation ran (whatever the
/// mathematical verdict), 2 invalid input, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

} // namespace hartogs::cli
