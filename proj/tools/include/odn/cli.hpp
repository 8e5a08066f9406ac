#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace odn::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kDomainError = 2,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace odn::cli
