#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shellspectra::cli {

inline constexpr const char* kFormatVersion = "shellspectra-output/1";

// Bad configuration: unknown key, malformed value, missing file. Exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& config_keys();

// key=value text with optional [section] headers. Keys before any header or under [common]
// apply to every command; keys under [<command>] apply to that command and win over common ones.
std::map<std::string, std::string> read_config_file(const std::string& path, const std::string& command);
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& command);

struct RunConfig {
    std::string command;
    std::string surface = "sphere";
    std::vector<double> m{10.0};
    std::vector<double> tau{-1.0};
    double R = 1.0;

    // modes-1d
    double delta = 1.0;
    std::optional<double> c;
    bool strict = false;

    // effective-spectrum
    std::string op = "upsilon";
    double theta = 0.0;
    int order = 16;
    int count = 20;

    // sphere-spectrum, weyl-count, asymptotics-check
    std::optional<int> kappa_max, lambda_grid;
    int jmax = 10;

    // bs-scan
    int nodes = 800;
    std::optional<double> lo, hi;
    int steps = 200;
    double threshold = 0.05;

    std::string out, json;

    // Fully resolved settings, one key=value per entry in a fixed order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Validates every value; throws ConfigError.
RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& values);

// %.17g: fixed width of precision so reruns are byte-identical.
std::string format_number(double x);

}  // namespace shellspectra::cli
