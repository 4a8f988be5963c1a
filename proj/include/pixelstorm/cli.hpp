#ifndef PIXELSTORM_CLI_HPP
#define PIXELSTORM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace pixelstorm::cli {

inline constexpr int exit_success = 0;
inline constexpr int exit_attack_failed = 1;
inline constexpr int exit_error = 2;

/// Runs `pixelstorm <subcommand> [flags]`. `args` excludes the program name.
/// attack:     0 when the label flipped, 1 when it did not, 2 on error.
/// campaign:   0 on completion, 2 on error.
/// gridsearch: 0 on completion, 2 on error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pixelstorm::cli

#endif  // PIXELSTORM_CLI_HPP
