#ifndef SGDLAB_TOOLS_COMMANDS_HPP_
#define SGDLAB_TOOLS_COMMANDS_HPP_

#include <optional>
#include <string>

#include "config.hpp"

namespace sgdlab::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericError = 3;

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> seed;
  std::optional<std::string> methods;
};

// Loads the config, applies overrides, runs the command and maps failures to
// exit codes. Diagnostics go to stderr.
int run_command(const std::string& command, const RunOptions& opts);

int cmd_sweep(const Config& cfg, const std::string& out);
int cmd_validate(const Config& cfg, const std::string& out);
int cmd_probe(const Config& cfg, const std::string& out);
int cmd_sgd(const Config& cfg, const std::string& out);
int cmd_fp(const Config& cfg, const std::string& out);
int cmd_reparam_check(const Config& cfg, const std::string& out);

}  // namespace sgdlab::cli

#endif  // SGDLAB_TOOLS_COMMANDS_HPP_
