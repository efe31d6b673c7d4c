#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sp::cli {

// Exit status: 0 with results, 2 when a job finds nothing, 1 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sp::cli
