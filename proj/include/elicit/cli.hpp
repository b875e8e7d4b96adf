#ifndef ELICIT_CLI_HPP
#define ELICIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace elicit::cli {

/// Exit codes: 0 success (an infeasible answer is still success), 1 invalid input or
/// illegal session transition, 2 usage error or missing input file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elicit::cli

#endif  // ELICIT_CLI_HPP
