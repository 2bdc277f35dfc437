#pragma once

#include <string>

#include <json.hpp>

#include "convlint/rules.hpp"

namespace convlint {

inline std::string format_finding_line(const Finding& f) {
    return f.location.file + ":" + std::to_string(f.location.line) + ":" +
           std::to_string(f.location.column) + ": " + severity_name(f.severity) + " [" +
           f.rule_id + "] " + f.message;
}

inline std::string count_phrase(int n, const char* noun) {
    std::string out = std::to_string(n) + " " + noun;
    if (n != 1) out += "s";
    return out;
}

/// Human-readable report: one line per finding, then a summary line.
inline std::string format_text(const Report& report) {
    std::string out;
    for (const Finding& f : report.findings) {
        out += format_finding_line(f);
        out += "\n";
    }
    if (report.findings.empty()) {
        out += "0 findings\n";
        return out;
    }
    out += count_phrase(static_cast<int>(report.findings.size()), "finding");
    out += " (";
    if (report.error_count > 0) {
        out += count_phrase(report.error_count, "error");
        if (report.warning_count > 0) out += ", ";
    }
    if (report.warning_count > 0) out += count_phrase(report.warning_count, "warning");
    out += ")\n";
    return out;
}

/// Machine-readable report: one self-contained JSON object per finding per
/// line, stable field order, no summary line.
inline std::string format_json(const Report& report) {
    std::string out;
    for (const Finding& f : report.findings) {
        nlohmann::ordered_json line;
        line["file"] = f.location.file;
        line["line"] = f.location.line;
        line["col"] = f.location.column;
        line["rule"] = f.rule_id;
        line["severity"] = severity_name(f.severity);
        line["key"] = f.message_key;
        line["params"] = f.params;
        line["message"] = f.message;
        out += line.dump();
        out += "\n";
    }
    return out;
}

} // namespace convlint
