#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace annuli {

// Routes argv to the module operations. Exit codes: 0 success, 1
// acceptance-band failure, 2 usage error, 3 resource error. JSON goes to
// `out` when --json is given; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace annuli
