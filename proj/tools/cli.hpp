#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace snowball::cli {

/// Runs one invocation (`args` excludes the program name) and returns the
/// process exit code. Diagnostics go to `err`, summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace snowball::cli
