#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace convlint {

enum class SeveritySetting { Error, Warning, Off };

/// Raised for malformed configuration values; `field` names the offending
/// config entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field_name, const std::string& detail)
        : std::runtime_error("config field \"" + field_name + "\": " + detail),
          field(std::move(field_name)) {}

    std::string field;
};

struct RuleConfig {
    std::string root_package = "fb6";
    std::vector<std::string> layers = {"ui", "lg", "db"}; // top -> bottom
    std::set<std::string> service_components = {"service"};
    std::string mutable_suffix = "Mut";
    std::vector<std::string> mutator_method_patterns = {"*Mut", "set*"};
    std::set<std::string> exc_base_types = {"multex.Exc"};
    std::set<std::string> failure_base_types = {"multex.Failure"};
    std::set<std::string> throw_helper_names = {"throwNew", "create"};
    std::map<std::string, SeveritySetting> severities; // rule id -> override
};

/// Name glob over a single identifier: `*` is allowed as a prefix and/or
/// suffix of the pattern and matches any (possibly empty) run of characters;
/// `*` elsewhere is not supported.
inline bool matches_name_glob(std::string_view name, std::string_view glob) {
    bool star_front = !glob.empty() && glob.front() == '*';
    bool star_back = glob.size() > (star_front ? 1u : 0u) && glob.back() == '*';
    std::string_view core = glob;
    if (star_front) core.remove_prefix(1);
    if (star_back) core.remove_suffix(1);
    if (star_front && star_back) return name.find(core) != std::string_view::npos;
    if (star_front) return name.size() >= core.size() && name.substr(name.size() - core.size()) == core;
    if (star_back) return name.substr(0, core.size()) == core;
    return name == core;
}

inline bool ends_with_suffix(std::string_view name, std::string_view suffix) {
    return name.size() >= suffix.size() && name.substr(name.size() - suffix.size()) == suffix;
}

} // namespace convlint
