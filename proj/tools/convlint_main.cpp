// convlint — checks a MiniJ source tree against naming, layering and
// exception-diagnostic conventions, and simulates exception propagation
// traces.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "convlint/config_io.hpp"
#include "convlint/diag.hpp"
#include "convlint/facts.hpp"
#include "convlint/parser.hpp"
#include "convlint/report_io.hpp"
#include "convlint/rules.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kUsage =
    "usage: convlint <command> [options]\n"
    "\n"
    "commands:\n"
    "  check <path>... [--config <file>] [--format text|json]\n"
    "      Lint all .minij files under the given paths (recursively).\n"
    "      Exit code: 0 = clean or warnings only, 1 = error findings, 2 = usage/config error.\n"
    "  simulate <trace.json> [--catalog <file>]\n"
    "      Check the trace's frames against the null contract, then render the\n"
    "      exception chain produced by the wrap-unspecified-exceptions policy.\n"
    "  rules\n"
    "      List the built-in rules with default severities and message templates.\n";

int usage_error(const std::string& message) {
    std::cerr << "convlint: " << message << "\n" << kUsage;
    return 2;
}

struct CheckOptions {
    std::vector<std::string> inputs;
    std::string config_path;
    std::string format = "text";
};

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = std::move(buf).str();
    return true;
}

/// All .minij files under the inputs, lexicographically sorted so that
/// output order never depends on directory iteration order.
std::vector<std::string> collect_sources(const std::vector<std::string>& inputs,
                                         std::string& error) {
    std::vector<std::string> files;
    for (const std::string& input : inputs) {
        fs::path p(input);
        std::error_code ec;
        if (fs::is_regular_file(p, ec)) {
            files.push_back(p.string());
        } else if (fs::is_directory(p, ec)) {
            for (fs::recursive_directory_iterator it(p, ec), end; it != end; it.increment(ec)) {
                if (ec) break;
                if (it->is_regular_file() && it->path().extension() == ".minij") {
                    files.push_back(it->path().string());
                }
            }
        } else {
            error = "no such file or directory: \"" + input + "\"";
            return {};
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

int run_check(const CheckOptions& opts) {
    convlint::RuleConfig cfg;
    if (!opts.config_path.empty()) cfg = convlint::load_config(opts.config_path);
    convlint::validate_severity_keys(cfg);

    std::string error;
    std::vector<std::string> files = collect_sources(opts.inputs, error);
    if (!error.empty()) {
        std::cerr << "convlint: " << error << "\n";
        return 2;
    }

    std::vector<convlint::CompilationUnit> units;
    std::vector<convlint::Finding> parse_findings;
    for (const std::string& file : files) {
        std::string source;
        if (!read_file(file, source)) {
            std::cerr << "convlint: cannot read \"" << file << "\"\n";
            return 2;
        }
        try {
            units.push_back(convlint::parse_unit(source, file));
        } catch (const convlint::SyntaxError& e) {
            // One bad file must not hide findings elsewhere.
            convlint::Finding f = convlint::make_finding(
                convlint::kParseRuleId, convlint::Severity::Error, e.location, {e.expected});
            if (convlint::apply_configured_severity(f, cfg)) {
                parse_findings.push_back(std::move(f));
            }
        }
    }

    convlint::Facts facts = convlint::extract_facts(units, cfg);
    convlint::Report rule_report = convlint::run_all(facts, cfg);
    std::vector<convlint::Finding> all = std::move(rule_report.findings);
    for (convlint::Finding& f : parse_findings) all.push_back(std::move(f));
    convlint::Report report = convlint::make_report(std::move(all));

    if (opts.format == "json") {
        std::cout << convlint::format_json(report);
    } else {
        std::cout << convlint::format_text(report);
    }
    return report.error_count > 0 ? 1 : 0;
}

int run_simulate(const std::string& trace_path, const std::string& catalog_path) {
    convlint::CallTrace trace = convlint::load_trace(trace_path);
    convlint::MessageCatalog catalog = convlint::null_contract_catalog();
    if (!catalog_path.empty()) {
        for (auto& [key, tmpl] : convlint::load_catalog(catalog_path).entries) {
            catalog.entries[key] = tmpl;
        }
    }
    for (const convlint::Frame& frame : trace.frames) {
        for (const convlint::ExcValue& failure : convlint::check_null_args(frame)) {
            std::cout << convlint::render_message(catalog, failure) << "\n";
        }
    }
    std::cout << convlint::render_chain(catalog, convlint::propagate(trace)) << "\n";
    return 0;
}

int run_rules() {
    const convlint::MessageCatalog& catalog = convlint::builtin_catalog();
    for (const convlint::RuleInfo& rule : convlint::builtin_rules()) {
        std::string id = rule.id;
        id.resize(8, ' ');
        std::string severity = convlint::severity_name(rule.default_severity);
        severity.resize(8, ' ');
        std::cout << id << severity << catalog.entries.at(rule.id) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::cout << kUsage;
        return args.empty() ? 2 : 0;
    }
    const std::string& command = args[0];
    try {
        if (command == "check") {
            CheckOptions opts;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--config") {
                    if (++i >= args.size()) return usage_error("--config needs a file argument");
                    opts.config_path = args[i];
                } else if (args[i] == "--format") {
                    if (++i >= args.size()) return usage_error("--format needs text or json");
                    opts.format = args[i];
                    if (opts.format != "text" && opts.format != "json") {
                        return usage_error("--format needs text or json");
                    }
                } else if (!args[i].empty() && args[i][0] == '-') {
                    return usage_error("unknown option \"" + args[i] + "\"");
                } else {
                    opts.inputs.push_back(args[i]);
                }
            }
            if (opts.inputs.empty()) return usage_error("check needs at least one input path");
            return run_check(opts);
        }
        if (command == "simulate") {
            std::string trace_path;
            std::string catalog_path;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--catalog") {
                    if (++i >= args.size()) return usage_error("--catalog needs a file argument");
                    catalog_path = args[i];
                } else if (!args[i].empty() && args[i][0] == '-') {
                    return usage_error("unknown option \"" + args[i] + "\"");
                } else if (trace_path.empty()) {
                    trace_path = args[i];
                } else {
                    return usage_error("simulate takes exactly one trace file");
                }
            }
            if (trace_path.empty()) return usage_error("simulate needs a trace file");
            return run_simulate(trace_path, catalog_path);
        }
        if (command == "rules") {
            if (args.size() > 1) return usage_error("rules takes no arguments");
            return run_rules();
        }
        return usage_error("unknown command \"" + command + "\"");
    } catch (const convlint::ConfigError& e) {
        std::cerr << "convlint: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "convlint: " << e.what() << "\n";
        return 2;
    }
}
