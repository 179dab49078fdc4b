#pragma once

#include <string>
#include <vector>

namespace persistra::cli {

// Runs the command line tool in-process. Returns the exit status:
// 0 success, 1 contract violation, 2 parse error.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace persistra::cli
