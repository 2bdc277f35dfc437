#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convlint/config.hpp"
#include "convlint/diag.hpp"

namespace convlint {

namespace io_detail {

inline std::string read_file_or_throw(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(what, "cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline nlohmann::json parse_json_or_throw(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ConfigError(what, "not valid JSON");
    return j;
}

inline std::vector<std::string> string_array(const nlohmann::json& value, const char* field) {
    if (!value.is_array()) throw ConfigError(field, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) throw ConfigError(field, "expected an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

inline std::string identifier_segment(const nlohmann::json& value, const char* field) {
    if (!value.is_string()) throw ConfigError(field, "expected a string");
    std::string s = value.get<std::string>();
    if (s.empty() || s.find('.') != std::string::npos) {
        throw ConfigError(field, "expected a single package segment");
    }
    return s;
}

} // namespace io_detail

/// Parses configuration text; missing fields keep their defaults, unknown
/// top-level fields are rejected.
inline RuleConfig parse_config_json(const std::string& text) {
    nlohmann::json j = io_detail::parse_json_or_throw(text, "config");
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    RuleConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "root_package") {
            cfg.root_package = io_detail::identifier_segment(value, "root_package");
        } else if (key == "layers") {
            std::vector<std::string> layers = io_detail::string_array(value, "layers");
            if (layers.empty()) throw ConfigError("layers", "must not be empty");
            std::set<std::string> seen;
            for (const std::string& l : layers) {
                if (l.empty() || !seen.insert(l).second) {
                    throw ConfigError("layers", "segments must be non-empty and unique");
                }
            }
            cfg.layers = std::move(layers);
        } else if (key == "service_components") {
            auto list = io_detail::string_array(value, "service_components");
            cfg.service_components = {list.begin(), list.end()};
        } else if (key == "mutable_suffix") {
            if (!value.is_string() || value.get<std::string>().empty()) {
                throw ConfigError("mutable_suffix", "expected a non-empty string");
            }
            cfg.mutable_suffix = value.get<std::string>();
        } else if (key == "mutator_method_patterns") {
            cfg.mutator_method_patterns = io_detail::string_array(value, "mutator_method_patterns");
        } else if (key == "exc_base_types") {
            auto list = io_detail::string_array(value, "exc_base_types");
            cfg.exc_base_types = {list.begin(), list.end()};
        } else if (key == "failure_base_types") {
            auto list = io_detail::string_array(value, "failure_base_types");
            cfg.failure_base_types = {list.begin(), list.end()};
        } else if (key == "throw_helper_names") {
            auto list = io_detail::string_array(value, "throw_helper_names");
            cfg.throw_helper_names = {list.begin(), list.end()};
        } else if (key == "severities") {
            if (!value.is_object()) throw ConfigError("severities", "expected an object");
            for (const auto& [rule_id, setting] : value.items()) {
                if (!setting.is_string()) {
                    throw ConfigError("severities", "expected error, warning or off");
                }
                std::string s = setting.get<std::string>();
                if (s == "error") cfg.severities[rule_id] = SeveritySetting::Error;
                else if (s == "warning") cfg.severities[rule_id] = SeveritySetting::Warning;
                else if (s == "off") cfg.severities[rule_id] = SeveritySetting::Off;
                else throw ConfigError("severities", "expected error, warning or off");
            }
        } else {
            throw ConfigError(key, "unknown configuration field");
        }
    }
    return cfg;
}

inline RuleConfig load_config(const std::string& path) {
    return parse_config_json(io_detail::read_file_or_throw(path, "config"));
}

/// Catalog file: a flat JSON object mapping message keys to templates.
inline MessageCatalog load_catalog(const std::string& path) {
    nlohmann::json j =
        io_detail::parse_json_or_throw(io_detail::read_file_or_throw(path, "catalog"), "catalog");
    if (!j.is_object()) throw ConfigError("catalog", "expected a JSON object");
    MessageCatalog catalog;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) throw ConfigError("catalog", "templates must be strings");
        catalog.entries[key] = value.get<std::string>();
    }
    return catalog;
}

namespace io_detail {

inline ExcValue parse_exc_value(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("key") || !j["key"].is_string()) {
        throw ConfigError("raised", "expected an object with a \"key\" string");
    }
    ExcValue e;
    e.key = j["key"].get<std::string>();
    if (j.contains("params")) e.params = string_array(j["params"], "raised");
    if (j.contains("cause")) {
        e.cause = std::make_shared<const ExcValue>(parse_exc_value(j["cause"]));
    }
    return e;
}

} // namespace io_detail

/// Trace file for the propagation simulator.
inline CallTrace load_trace(const std::string& path) {
    nlohmann::json j =
        io_detail::parse_json_or_throw(io_detail::read_file_or_throw(path, "trace"), "trace");
    if (!j.is_object()) throw ConfigError("trace", "expected a JSON object");
    CallTrace trace;
    if (j.contains("hierarchy")) {
        if (!j["hierarchy"].is_object()) throw ConfigError("hierarchy", "expected an object");
        for (const auto& [child, parent] : j["hierarchy"].items()) {
            if (!parent.is_string()) throw ConfigError("hierarchy", "parents must be strings");
            trace.hierarchy[child] = parent.get<std::string>();
        }
    }
    if (!j.contains("frames") || !j["frames"].is_array() || j["frames"].empty()) {
        throw ConfigError("frames", "expected a non-empty array");
    }
    for (const auto& fj : j["frames"]) {
        if (!fj.is_object() || !fj.contains("sig") || !fj["sig"].is_string()) {
            throw ConfigError("frames", "each frame needs a \"sig\" string");
        }
        Frame frame;
        frame.simple_sig = fj["sig"].get<std::string>();
        if (fj.contains("method")) {
            if (!fj["method"].is_string()) throw ConfigError("frames", "\"method\" must be a string");
            frame.method_qname = fj["method"].get<std::string>();
        }
        if (fj.contains("args")) {
            if (!fj["args"].is_array()) throw ConfigError("frames", "\"args\" must be an array");
            for (const auto& aj : fj["args"]) {
                if (!aj.is_object() || !aj.contains("name") || !aj["name"].is_string()) {
                    throw ConfigError("frames", "each arg needs a \"name\" string");
                }
                FrameArg arg;
                arg.name = aj["name"].get<std::string>();
                if (aj.contains("type") && aj["type"].is_string()) {
                    arg.type_text = aj["type"].get<std::string>();
                }
                if (aj.contains("value") && !aj["value"].is_null()) {
                    if (!aj["value"].is_string()) {
                        throw ConfigError("frames", "arg \"value\" must be a string or null");
                    }
                    arg.value = aj["value"].get<std::string>();
                }
                if (aj.contains("nullable")) {
                    if (!aj["nullable"].is_boolean()) {
                        throw ConfigError("frames", "\"nullable\" must be a boolean");
                    }
                    arg.nullable = aj["nullable"].get<bool>();
                }
                frame.args.push_back(std::move(arg));
            }
        }
        if (fj.contains("throws")) {
            frame.declared_throws = io_detail::string_array(fj["throws"], "frames");
        }
        if (fj.contains("wrap")) {
            if (!fj["wrap"].is_boolean()) throw ConfigError("frames", "\"wrap\" must be a boolean");
            frame.wrap_enabled = fj["wrap"].get<bool>();
        }
        if (fj.contains("nullableReturn")) {
            if (!fj["nullableReturn"].is_boolean()) {
                throw ConfigError("frames", "\"nullableReturn\" must be a boolean");
            }
            frame.method_nullable = fj["nullableReturn"].get<bool>();
        }
        trace.frames.push_back(std::move(frame));
    }
    if (!j.contains("raiseFrame") || !j["raiseFrame"].is_number_integer()) {
        throw ConfigError("raiseFrame", "expected an integer");
    }
    trace.raise_frame_index = j["raiseFrame"].get<int>();
    if (trace.raise_frame_index < 0 ||
        trace.raise_frame_index >= static_cast<int>(trace.frames.size())) {
        throw ConfigError("raiseFrame", "index out of range");
    }
    if (!j.contains("raised")) throw ConfigError("raised", "missing");
    trace.raised = io_detail::parse_exc_value(j["raised"]);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "hierarchy" && key != "frames" && key != "raiseFrame" && key != "raised") {
            throw ConfigError(key, "unknown trace field");
        }
    }
    return trace;
}

} // namespace convlint
