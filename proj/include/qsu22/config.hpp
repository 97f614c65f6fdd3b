#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Run configuration for the command-line front end: plain key = value files
// merged with equivalent flags, flags winning.

namespace qsu22 {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { Kinematics, Smat, Verify, Export };

struct RunConfig {
    Command command = Command::Kinematics;
    std::map<std::string, std::string> values;
    std::string output_path;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
};

/// Parses `<command> [--key value]... [--config file]`.  File lines are
/// `key = value` (# comments allowed); flags override file values.  Unknown
/// keys raise config_error naming them all.
RunConfig parse_config(const std::vector<std::string>& args);

/// The key vocabulary accepted per command (for error messages and tests).
const std::vector<std::string>& known_keys();

}  // namespace qsu22
