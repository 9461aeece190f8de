#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hodisc::cli {

/// Runs the hodisc command line. Returns 0 on success, 2 on invalid input or
/// usage errors and 1 on internal failures.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace hodisc::cli
