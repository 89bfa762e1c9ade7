#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cacluster::cli {

// args excludes the program name. Returns the process exit status:
// 0 success, 1 runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cacluster::cli
