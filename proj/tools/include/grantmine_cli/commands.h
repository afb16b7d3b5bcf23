#ifndef GRANTMINE_CLI_COMMANDS_H_
#define GRANTMINE_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace grantmine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       // a command could not finish
inline constexpr int kExitUsage = 2;         // bad flags, config or paths
inline constexpr int kExitRowsFailed = 3;    // report written, some rows failed

// Entry point behind the grantmine binary. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grantmine::cli

#endif  // GRANTMINE_CLI_COMMANDS_H_
