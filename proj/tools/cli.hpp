#ifndef TPA_TOOLS_CLI_HPP
#define TPA_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tpa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitGate = 2;

// Entry point of the `tpa` tool. `args` excludes the program name. Data goes
// to files under --out; reports go to `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tpa::cli

#endif  // TPA_TOOLS_CLI_HPP
