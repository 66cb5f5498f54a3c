#include "run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace shellspectra::cli {

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"modes-1d",  "sphere-spectrum",   "effective-spectrum",
                                                "bs-scan",   "asymptotics-check", "weyl-count"};
    return names;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "surface", "m",  "tau",   "R",         "delta",       "c",     "strict", "operator",
        "theta",   "order", "count", "kappa_max", "lambda_grid", "jmax",  "nodes",  "lo",
        "hi",      "steps", "threshold", "out",   "json"};
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool known_key(const std::string& k) {
    const auto& keys = config_keys();
    return std::find(keys.begin(), keys.end(), k) != keys.end();
}

double to_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
        throw ConfigError(key + ": not a finite number: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    char* end = nullptr;
    errno = 0;
    const long x = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE || x < -1000000000L || x > 1000000000L)
        throw ConfigError(key + ": not an integer: '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw ConfigError(key + ": expected a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& command) {
    std::map<std::string, std::string> common, own;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "config line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            const auto& cmds = command_names();
            if (section != "common" && std::find(cmds.begin(), cmds.end(), section) == cmds.end())
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!known_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (section.empty() || section == "common")
            common[key] = value;
        else if (section == command)
            own[key] = value;
    }
    for (const auto& [k, v] : own) common[k] = v;
    return common;
}

std::map<std::string, std::string> read_config_file(const std::string& path, const std::string& command) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), command);
}

RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& values) {
    const auto& cmds = command_names();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) throw ConfigError("unknown command '" + command + "'");
    RunConfig c;
    c.command = command;
    for (const auto& [k, v] : values) {
        if (k == "surface") c.surface = trim(v);
        else if (k == "m") c.m = to_list(k, v);
        else if (k == "tau") c.tau = to_list(k, v);
        else if (k == "R") c.R = to_double(k, v);
        else if (k == "delta") c.delta = to_double(k, v);
        else if (k == "c") c.c = to_double(k, v);
        else if (k == "strict") c.strict = to_bool(k, v);
        else if (k == "operator") c.op = trim(v);
        else if (k == "theta") c.theta = to_double(k, v);
        else if (k == "order") c.order = to_int(k, v);
        else if (k == "count") c.count = to_int(k, v);
        else if (k == "kappa_max") c.kappa_max = to_int(k, v);
        else if (k == "lambda_grid") c.lambda_grid = to_int(k, v);
        else if (k == "jmax") c.jmax = to_int(k, v);
        else if (k == "nodes") c.nodes = to_int(k, v);
        else if (k == "lo") c.lo = to_double(k, v);
        else if (k == "hi") c.hi = to_double(k, v);
        else if (k == "steps") c.steps = to_int(k, v);
        else if (k == "threshold") c.threshold = to_double(k, v);
        else if (k == "out") c.out = trim(v);
        else if (k == "json") c.json = trim(v);
        else throw ConfigError("unknown key '" + k + "'");
    }
    if (!(c.R > 0.0)) throw ConfigError("R must be positive");
    if (!(c.delta > 0.0)) throw ConfigError("delta must be positive");
    if (c.op != "upsilon" && c.op != "bochner" && c.op != "intermediate")
        throw ConfigError("operator must be upsilon, bochner or intermediate");
    if (c.order < 4) throw ConfigError("order must be at least 4");
    if (c.count < 0) throw ConfigError("count must be nonnegative (0 = all)");
    if (c.kappa_max && *c.kappa_max < 1) throw ConfigError("kappa_max must be positive");
    if (c.lambda_grid && *c.lambda_grid < 8) throw ConfigError("lambda_grid must be at least 8");
    if (c.jmax < 1) throw ConfigError("jmax must be positive");
    if (c.nodes < 8) throw ConfigError("nodes must be at least 8");
    if (c.steps < 3) throw ConfigError("steps must be at least 3");
    if (!(c.threshold > 0.0)) throw ConfigError("threshold must be positive");
    return c;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e{{"command", command},
                                                       {"surface", surface},
                                                       {"m", join(m)},
                                                       {"tau", join(tau)},
                                                       {"R", format_number(R)}};
    auto opt = [](const auto& o) { return o ? format_number(double(*o)) : std::string("auto"); };
    if (command == "modes-1d") {
        e.emplace_back("delta", format_number(delta));
        e.emplace_back("c", c ? format_number(*c) : std::string("dirichlet"));
        e.emplace_back("strict", strict ? "true" : "false");
    } else if (command == "effective-spectrum") {
        e.emplace_back("operator", op);
        e.emplace_back("theta", format_number(theta));
        e.emplace_back("order", std::to_string(order));
        e.emplace_back("count", std::to_string(count));
    } else if (command == "sphere-spectrum" || command == "weyl-count") {
        e.emplace_back("kappa_max", opt(kappa_max));
        e.emplace_back("lambda_grid", opt(lambda_grid));
    } else if (command == "asymptotics-check") {
        e.emplace_back("order", std::to_string(order));
        e.emplace_back("jmax", std::to_string(jmax));
    } else if (command == "bs-scan") {
        e.emplace_back("nodes", std::to_string(nodes));
        e.emplace_back("lo", opt(lo));
        e.emplace_back("hi", opt(hi));
        e.emplace_back("steps", std::to_string(steps));
        e.emplace_back("threshold", format_number(threshold));
    }
    return e;
}

}  // namespace shellspectra::cli
