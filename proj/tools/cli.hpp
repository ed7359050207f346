#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace certhom::cli {

// Exit codes: 0 success, 1 numerical or file failure (with an "error ..."
// line on err), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace certhom::cli
