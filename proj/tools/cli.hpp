#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wdhg::cli {

// Exit codes: 0 success, 1 I/O or input-format failure, 2 invalid usage or
// configuration.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wdhg::cli
