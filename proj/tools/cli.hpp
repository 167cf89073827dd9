#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mfcli {

enum ExitCode { kOk = 0, kInternal = 1, kNotConverged = 2, kInvalidConfig = 3 };

/// Runs one subcommand. CSV goes to `out` unless --out names a file; progress
/// and errors go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace mfcli
