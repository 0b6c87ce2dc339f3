#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace convalg {

/// Exit codes of the command-line tool.
enum ExitCode : int { kPass = 0, kCheckFailed = 1, kParseError = 2, kPreconditionError = 3 };

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Runs the tool on `args` (without the program name). The JSON report goes to `out`
/// (or to the --out file), diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace convalg
