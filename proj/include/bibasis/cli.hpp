// Command-line front end. Subcommands: system, constant, check, suite.
// Exit codes: 0 success / all checks pass, 1 a check failed or the run
// failed, 2 usage error (bad flag, unknown system or check id).
#ifndef BIBASIS_CLI_HPP
#define BIBASIS_CLI_HPP

#include "bibasis/system.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bibasis {

/// Construction parameters as given on the command line.
struct SystemArgs {
    std::string p = "2";
    std::optional<int> level;
    std::optional<int> m;
    std::optional<int> n;
};

class UnknownNameError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Names accepted by `system` and `constant --system`.
const std::vector<std::string>& system_names();

/// Builds a named system. Throws UnknownNameError for an unknown name and
/// std::invalid_argument for missing or invalid parameters.
System named_system(const std::string& name, const SystemArgs& args);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bibasis

#endif // BIBASIS_CLI_HPP
