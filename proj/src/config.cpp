#include "qsu22/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qsu22 {

namespace {

const std::vector<std::string> kKnownKeys = {
    "q_re", "q_im", "g", "alpha_re", "alpha_im", "alpha_tilde_re", "alpha_tilde_im",
    "M1", "M2", "M3",
    "xplus1_re", "xplus1_im", "xplus2_re", "xplus2_im", "xplus3_re", "xplus3_im",
    "gamma1_re", "gamma1_im", "gamma2_re", "gamma2_im", "gamma3_re", "gamma3_im",
    "root1", "root2", "root3",
    "tolerance_rel", "tolerance_abs", "seed", "points", "suite", "output",
    "corrupt_s",
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void check_known(const std::map<std::string, std::string>& values) {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : values)
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), k) == kKnownKeys.end())
            unknown.push_back(k);
    if (!unknown.empty()) {
        std::string msg = "unknown configuration keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw config_error(msg);
    }
}

std::map<std::string, std::string> parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not key = value: " + line);
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

double to_number(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw config_error("value of '" + key + "' is not a finite number: " + v);
    return x;
}

}  // namespace

double RunConfig::number(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw config_error("missing required key: " + key);
    return to_number(key, it->second);
}

double RunConfig::number_or(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : to_number(key, it->second);
}

long RunConfig::integer(const std::string& key) const {
    const double x = number(key);
    return std::lround(x);
}

long RunConfig::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty()) throw config_error("missing command");
    RunConfig cfg;
    const std::string& cmd = args[0];
    if (cmd == "kinematics") cfg.command = Command::Kinematics;
    else if (cmd == "smat") cfg.command = Command::Smat;
    else if (cmd == "verify") cfg.command = Command::Verify;
    else if (cmd == "export") cfg.command = Command::Export;
    else throw config_error("unknown command: " + cmd);

    std::map<std::string, std::string> flags;
    std::string config_path;
    for (size_t i = 1; i < args.size(); ++i) {
        std::string a = args[i];
        if (a.rfind("--", 0) != 0) throw config_error("expected --key, got: " + a);
        a = a.substr(2);
        std::string value;
        const auto eq = a.find('=');
        if (eq != std::string::npos) {
            value = a.substr(eq + 1);
            a = a.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) throw config_error("flag --" + a + " needs a value");
            value = args[++i];
        }
        if (a == "config") config_path = value;
        else flags[a] = value;
    }
    if (!config_path.empty()) cfg.values = parse_file(config_path);
    for (const auto& [k, v] : flags) cfg.values[k] = v;  // flags win
    check_known(cfg.values);
    for (const auto& [k, v] : cfg.values)
        if (k != "suite" && k != "output") to_number(k, v);  // numeric keys validate eagerly
    cfg.output_path = cfg.text_or("output", "");
    return cfg;
}

const std::vector<std::string>& known_keys() { return kKnownKeys; }

}  // namespace qsu22
