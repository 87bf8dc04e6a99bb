#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tcone/io.hpp"

namespace tcone::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

const std::vector<std::string>& command_names();

/// Full default configuration of a subcommand; every accepted key appears here.
Json default_config(const std::string& command);

/// Defaults overlaid with the optional config file, then the seed and grid overrides.
Json resolve_config(const std::string& command, const std::optional<std::filesystem::path>& config_file,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& grid_overrides);

/// Runs a subcommand with a resolved configuration. Writes config.json (the echo)
/// and all outputs under `out`; progress goes to `log`. Returns the exit code;
/// ConfigError and DomainError propagate.
int run(const std::string& command, const Json& config, const std::filesystem::path& out, std::ostream& log);

}  // namespace tcone::cli
