#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pswitch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Converts a decimal string such as "0.4278" to the rational with
/// denominator 10^digits. Throws DomainError if it has more fractional digits.
std::string decimal_to_fraction(const std::string &decimal, unsigned digits);

}  // namespace pswitch::cli
