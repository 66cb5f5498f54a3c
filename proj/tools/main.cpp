#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "shellspectra/errors.hpp"

using namespace shellspectra;
using namespace shellspectra::cli;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

int numerical_failure(const std::string& command, const char* kind, const std::string& what) {
    nlohmann::ordered_json d{{"format_version", kFormatVersion}, {"command", command}, {"error", kind}, {"message", what}};
    std::cerr << d.dump(2) << '\n';
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gap eigenvalues of Dirac operators with a scalar shell interaction"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> flags;
    bool strict = false, dirichlet = false;

    struct KeyHelp {
        const char* key;
        const char* help;
    };
    const std::vector<KeyHelp> common{{"surface", "sphere[:R], ellipsoid:a,b,c or torus:R,r"},
                                      {"m", "mass, or a comma separated sweep"},
                                      {"tau", "coupling, or a comma separated list"},
                                      {"R", "sphere radius"},
                                      {"out", "CSV output path (default stdout)"},
                                      {"json", "JSON summary path"}};
    const std::map<std::string, std::vector<KeyHelp>> specific{
        {"modes-1d", {{"delta", "half width of the fiber interval"}, {"c", "Robin constant (omit for Dirichlet)"}}},
        {"sphere-spectrum", {{"kappa_max", "largest |kappa| to scan"}, {"lambda_grid", "scan points per channel"}}},
        {"effective-spectrum",
         {{"operator", "upsilon, bochner or intermediate"},
          {"theta", "connection strength for bochner"},
          {"order", "Galerkin order"},
          {"count", "number of eigenvalues (0 = all)"}}},
        {"bs-scan",
         {{"nodes", "Nystrom node count"},
          {"lo", "scan start"},
          {"hi", "scan end"},
          {"steps", "scan points"},
          {"threshold", "sigma_min cut for candidates"}}},
        {"asymptotics-check", {{"order", "Galerkin order"}, {"jmax", "eigenvalues per m"}}},
        {"weyl-count", {{"kappa_max", "largest |kappa| to scan"}, {"lambda_grid", "scan points per channel"}}}};

    const std::map<std::string, std::string> about{
        {"modes-1d", "ground energies of the 1D transverse models"},
        {"sphere-spectrum", "gap eigenvalues of the spherical shell by channel shooting"},
        {"effective-spectrum", "Galerkin spectrum of a surface operator"},
        {"bs-scan", "Birman-Schwinger scan of the Nystrom boundary operator"},
        {"asymptotics-check", "two-term, Weyl and envelope report over an m sweep"},
        {"weyl-count", "eigenvalue counts against the Weyl prediction"}};

    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config_path, "key=value config file");
        std::vector<KeyHelp> keys = common;
        const auto& extra = specific.at(name);
        keys.insert(keys.end(), extra.begin(), extra.end());
        for (const auto& k : keys) sub->add_option("--" + std::string(k.key), flags[k.key], k.help);
        if (name == "modes-1d") {
            sub->add_flag("--strict", strict, "exit 3 when there is no bound state");
            sub->add_flag("--dirichlet", dirichlet, "Dirichlet ends (the default without --c)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    CLI::App* sub = app.get_subcommands().front();
    try {
        std::map<std::string, std::string> values;
        if (!config_path.empty()) values = read_config_file(config_path, command);
        for (const auto& [k, v] : flags)
            if (sub->get_option_no_throw("--" + k) && sub->count("--" + k) > 0) values[k] = v;
        if (strict) values["strict"] = "true";
        if (dirichlet && values.count("c")) throw ConfigError("--dirichlet and --c are exclusive");

        const RunConfig cfg = resolve_config(command, values);
        const CommandOutput out = run_command(cfg);
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
        if (cfg.out.empty())
            std::cout << out.csv;
        else
            write_file(cfg.out, out.csv);
        if (!cfg.json.empty()) write_file(cfg.json, out.summary.dump(2) + "\n");
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const DecoupledShell& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const NoBoundState& e) {
        return numerical_failure(command, "NoBoundState", e.what());
    } catch (const RootBracketFailure& e) {
        return numerical_failure(command, "RootBracketFailure", e.what());
    } catch (const IllConditioned& e) {
        return numerical_failure(command, "IllConditioned", e.what());
    } catch (const NumericalFailure& e) {
        return numerical_failure(command, "NumericalFailure", e.what());
    } catch (const std::exception& e) {
        return numerical_failure(command, "Error", e.what());
    }
}
