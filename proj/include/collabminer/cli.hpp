#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cm::cli {

/// Runs one command line; `args` excludes the program name.
/// Returns 0 on success, 1 on hard validation errors, 2 on usage, I/O or
/// format errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace cm::cli
