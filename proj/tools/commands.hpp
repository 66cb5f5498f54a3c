#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"

namespace shellspectra::cli {

struct CommandOutput {
    std::string csv;                 // with the config echo as leading '#' lines
    nlohmann::ordered_json summary;  // always carries format_version and config
    std::vector<std::string> warnings;
};

// Dispatches on cfg.command. Library exceptions propagate.
CommandOutput run_command(const RunConfig& cfg);

// Nystrom grid for roughly `nodes` points on the given surface: {n1, n2}.
std::pair<int, int> nystrom_grid(const std::string& surface, int nodes);

}  // namespace shellspectra::cli
