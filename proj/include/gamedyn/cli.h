#ifndef GAMEDYN_CLI_H_
#define GAMEDYN_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gamedyn {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitRuntime = 2,
  kExitValidation = 3,
};

// Decimal or 0x-prefixed hexadecimal 64-bit value.
std::uint64_t parse_seed(const std::string& text);

// Entry point for the gamedyn command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace gamedyn

#endif  // GAMEDYN_CLI_H_
