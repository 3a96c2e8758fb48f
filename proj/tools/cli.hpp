#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ffm::cli {

/// Runs one CLI invocation. Errors are reported as a single line on `err`
/// and mapped to a nonzero exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ffm::cli
