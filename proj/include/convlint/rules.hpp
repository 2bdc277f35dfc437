#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "convlint/config.hpp"
#include "convlint/diag.hpp"
#include "convlint/facts.hpp"
#include "convlint/pattern.hpp"

namespace convlint {

enum class Severity { Error, Warning };

inline const char* severity_name(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

struct Finding {
    std::string rule_id;
    Severity severity = Severity::Error;
    SourceLocation location;
    std::string message_key;
    std::vector<std::string> params;
    std::string message;
};

struct Report {
    std::vector<Finding> findings; // sorted by (file, line, column, rule_id)
    int error_count = 0;
    int warning_count = 0;
};

inline constexpr const char* kParseRuleId = "PARSE";

/// Rule messages go through the same catalog machinery as simulated
/// exceptions: the rule id is the message key, params are positional.
inline const MessageCatalog& builtin_catalog() {
    static const MessageCatalog catalog = [] {
        MessageCatalog c = null_contract_catalog();
        c.entries["MUT01"] = "Illegal mutator call on an immutable reference";
        c.entries["MUT02"] = "Field {0} replaced in non-mutator method {1}";
        c.entries["ARCH01"] = "Do not call the db-layer directly";
        c.entries["ARCH02"] = "Component {0} must not call component {1}";
        c.entries["ARCH03"] = "Do not call a product component from the service component";
        c.entries["EXC01"] = "Exception {0} thrown but not declared in the throws clause of {1}";
        c.entries["MSG01"] =
            "Throw site passes {0} message parameters but template of {1} requires {2}";
        c.entries["MSG02"] =
            "Throw site passes {0} message parameters but template of {1} requires only {2}";
        c.entries[kParseRuleId] = "Syntax error: {0}";
        return c;
    }();
    return catalog;
}

struct RuleInfo {
    std::string id;
    Severity default_severity = Severity::Error;
};

inline const std::vector<RuleInfo>& builtin_rules() {
    static const std::vector<RuleInfo> rules = {
        {"MUT01", Severity::Error},  {"MUT02", Severity::Error},
        {"ARCH01", Severity::Error}, {"ARCH02", Severity::Error},
        {"ARCH03", Severity::Error}, {"EXC01", Severity::Error},
        {"MSG01", Severity::Error},  {"MSG02", Severity::Warning},
        {kParseRuleId, Severity::Error},
    };
    return rules;
}

inline Finding make_finding(std::string rule_id, Severity severity, SourceLocation loc,
                            std::vector<std::string> params) {
    Finding f;
    f.rule_id = rule_id;
    f.severity = severity;
    f.location = std::move(loc);
    f.message_key = std::move(rule_id);
    f.params = std::move(params);
    f.message = render_message(builtin_catalog(), ExcValue{f.message_key, f.params, nullptr});
    return f;
}

inline bool is_mutator_name(std::string_view name, const RuleConfig& cfg) {
    for (const std::string& glob : cfg.mutator_method_patterns) {
        if (matches_name_glob(name, glob)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// MUT01 — mutator call on an immutable reference
// ---------------------------------------------------------------------------

inline std::vector<Finding> check_mutator_calls(const Facts& facts, const RuleConfig& cfg) {
    std::vector<Finding> out;
    for (const CallFact& call : facts.call_facts) {
        if (!is_mutator_name(call.callee_method_name, cfg)) continue;
        bool immutable = false;
        switch (call.receiver_kind) {
        case ReceiverKind::This:
            immutable = !call.caller.method_is_mutator && !call.caller.method_is_constructor;
            break;
        case ReceiverKind::SimpleName:
        case ReceiverKind::FieldOfThis:
            immutable = call.receiver_name &&
                        !ends_with_suffix(*call.receiver_name, cfg.mutable_suffix);
            break;
        case ReceiverKind::NewExpr:
            // a freshly constructed object is the caller's to mutate
            immutable = false;
            break;
        case ReceiverKind::StaticType:
        case ReceiverKind::CallResult:
        case ReceiverKind::Unresolved:
            immutable = false; // exempt: the convention covers named references only
            break;
        }
        if (immutable) {
            out.push_back(make_finding("MUT01", Severity::Error, call.location, {}));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// MUT02 — own-field replacement outside mutators and constructors
// ---------------------------------------------------------------------------

inline std::vector<Finding> check_field_assignments(const Facts& facts, const RuleConfig& cfg) {
    (void)cfg;
    std::vector<Finding> out;
    for (const AssignFact& assign : facts.assign_facts) {
        if (assign.target_kind != AssignTargetKind::OwnField) continue;
        if (assign.enclosing.method_is_constructor || assign.enclosing.method_is_mutator) continue;
        out.push_back(make_finding("MUT02", Severity::Error, assign.location,
                                   {assign.field_name.value_or(""),
                                    assign.enclosing.method_name}));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ARCH01 — strict layering
// ---------------------------------------------------------------------------

namespace rules_detail {

inline std::vector<std::string> split_dots(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    for (;;) {
        std::size_t dot = text.find('.', pos);
        if (dot == std::string_view::npos) {
            parts.emplace_back(text.substr(pos));
            return parts;
        }
        parts.emplace_back(text.substr(pos, dot - pos));
        pos = dot + 1;
    }
}

/// Layer index of a package of exactly the shape root.component.layer;
/// nothing for any other shape.
inline std::optional<std::size_t> layer_index(std::string_view package, const RuleConfig& cfg) {
    std::vector<std::string> segs = split_dots(package);
    if (segs.size() != 3 || segs[0] != cfg.root_package) return std::nullopt;
    for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
        if (cfg.layers[i] == segs[2]) return i;
    }
    return std::nullopt;
}

inline std::string package_of_qname(const std::string& qname) {
    std::size_t dot = qname.rfind('.');
    return dot == std::string::npos ? std::string() : qname.substr(0, dot);
}

/// ARCH02/ARCH03 consider only calls where both ends live in a component
/// package under the configured root.
inline bool component_shaped(const std::string& package, const RuleConfig& cfg) {
    std::vector<std::string> segs = split_dots(package);
    return segs.size() >= 2 && segs[0] == cfg.root_package;
}

} // namespace rules_detail

inline std::vector<Finding> check_layering(const Facts& facts, const RuleConfig& cfg) {
    std::vector<Finding> out;
    for (const CallFact& call : facts.call_facts) {
        if (!call.callee_type_qname) continue;
        auto caller_layer = rules_detail::layer_index(call.caller.package, cfg);
        if (!caller_layer) continue;
        auto callee_layer = rules_detail::layer_index(
            rules_detail::package_of_qname(*call.callee_type_qname), cfg);
        if (!callee_layer) continue;
        bool legal = *callee_layer == *caller_layer || *callee_layer == *caller_layer + 1;
        if (!legal) {
            out.push_back(make_finding("ARCH01", Severity::Error, call.location, {}));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ARCH02 / ARCH03 — component isolation, expressed with the pattern language
// ---------------------------------------------------------------------------

inline std::vector<Finding> check_component_isolation(const Facts& facts, const RuleConfig& cfg) {
    // Where AspectJ needed one hard-coded pointcut per component pair, the
    // capture-variable patterns state the whole rule once: the caller's
    // component binds to {a}, the callee's to {b}, and set constraints
    // decide legality.
    const QNamePattern within = parse_qname_pattern(cfg.root_package + ".{a}..*");
    const SignaturePattern callee_sig =
        parse_signature_pattern(cfg.root_package + ".{b}..*.*(..)");
    const std::vector<Constraint> product_to_foreign_product = {
        Constraint::not_in_set("a", cfg.service_components),
        Constraint::not_equal("a", "b"),
        Constraint::not_in_set("b", cfg.service_components),
    };
    const std::vector<Constraint> service_to_product = {
        Constraint::in_set("a", cfg.service_components),
        Constraint::not_in_set("b", cfg.service_components),
    };

    std::vector<Finding> out;
    for (const CallFact& call : facts.call_facts) {
        if (!call.callee_type_qname) continue;
        if (!rules_detail::component_shaped(call.caller.package, cfg)) continue;
        if (!rules_detail::component_shaped(
                rules_detail::package_of_qname(*call.callee_type_qname), cfg)) {
            continue;
        }
        std::string caller_qname = call.caller.package + "." + call.caller.type_name;
        std::optional<Binding> arch02_binding;
        bool arch03_hit = false;
        for (const Binding& wb : match_qname(within, caller_qname)) {
            for (const Binding& combined :
                 match_signature(callee_sig, *call.callee_type_qname,
                                 call.callee_method_name, wb)) {
                if (!arch02_binding && satisfies(combined, product_to_foreign_product)) {
                    arch02_binding = combined;
                }
                if (satisfies(combined, service_to_product)) arch03_hit = true;
            }
        }
        if (arch03_hit) {
            out.push_back(make_finding("ARCH03", Severity::Error, call.location, {}));
        }
        if (arch02_binding) {
            out.push_back(make_finding("ARCH02", Severity::Error, call.location,
                                       {arch02_binding->assignments.at("a"),
                                        arch02_binding->assignments.at("b")}));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// EXC01 — precondition exceptions must be declared where thrown
// ---------------------------------------------------------------------------

inline std::vector<Finding> check_undeclared_exc_throws(const Facts& facts, const RuleConfig& cfg) {
    std::vector<Finding> out;
    for (const ThrowFact& t : facts.throw_facts) {
        if (!facts.is_subtype_of(t.exc_type_qname, cfg.exc_base_types)) continue;
        if (facts.is_subtype_of(t.exc_type_qname, cfg.failure_base_types)) continue;
        bool declared = std::find(t.enclosing_throws.begin(), t.enclosing_throws.end(),
                                  t.exc_type_qname) != t.enclosing_throws.end();
        if (!declared) {
            out.push_back(make_finding("EXC01", Severity::Error, t.location,
                                       {t.exc_type_qname, t.enclosing_method}));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// MSG01 / MSG02 — throw-site arity against the doc template
// ---------------------------------------------------------------------------

inline std::vector<Finding> check_message_param_arity(const Facts& facts, const RuleConfig& cfg) {
    std::vector<Finding> out;
    for (const ThrowFact& t : facts.throw_facts) {
        bool is_failure = facts.is_subtype_of(t.exc_type_qname, cfg.failure_base_types);
        if (!is_failure && !facts.is_subtype_of(t.exc_type_qname, cfg.exc_base_types)) continue;
        auto tmpl = facts.templates.find(t.exc_type_qname);
        if (tmpl == facts.templates.end()) continue;
        int required = template_required_arity(tmpl->second);
        // Failures carry the causing exception as their first argument;
        // it is not a message parameter.
        int effective = t.message_arg_count - (is_failure ? 1 : 0);
        if (effective < 0) effective = 0;
        if (effective < required) {
            out.push_back(make_finding("MSG01", Severity::Error, t.location,
                                       {std::to_string(effective), t.exc_type_qname,
                                        std::to_string(required)}));
        } else if (effective > required) {
            out.push_back(make_finding("MSG02", Severity::Warning, t.location,
                                       {std::to_string(effective), t.exc_type_qname,
                                        std::to_string(required)}));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

/// Applies a configured severity override; false means the finding is off.
inline bool apply_configured_severity(Finding& f, const RuleConfig& cfg) {
    auto it = cfg.severities.find(f.rule_id);
    if (it == cfg.severities.end()) return true;
    switch (it->second) {
    case SeveritySetting::Off:
        return false;
    case SeveritySetting::Error:
        f.severity = Severity::Error;
        return true;
    case SeveritySetting::Warning:
        f.severity = Severity::Warning;
        return true;
    }
    return true;
}

inline void validate_severity_keys(const RuleConfig& cfg) {
    for (const auto& [rule_id, setting] : cfg.severities) {
        (void)setting;
        bool known = false;
        for (const RuleInfo& r : builtin_rules()) {
            if (r.id == rule_id) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("severities", "unknown rule id \"" + rule_id + "\"");
    }
}

/// Deterministic report assembly: sort by location then rule, count by
/// severity. Exposed separately so the driver can merge syntax-error
/// findings into the same report.
inline Report make_report(std::vector<Finding> findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        return std::tie(a.location.file, a.location.line, a.location.column, a.rule_id) <
               std::tie(b.location.file, b.location.line, b.location.column, b.rule_id);
    });
    Report report;
    report.findings = std::move(findings);
    for (const Finding& f : report.findings) {
        if (f.severity == Severity::Error) ++report.error_count;
        else ++report.warning_count;
    }
    return report;
}

inline Report run_all(const Facts& facts, const RuleConfig& cfg) {
    validate_severity_keys(cfg);
    std::vector<Finding> all;
    for (auto* check : {check_mutator_calls, check_field_assignments, check_layering,
                        check_component_isolation, check_undeclared_exc_throws,
                        check_message_param_arity}) {
        for (Finding& f : check(facts, cfg)) {
            if (apply_configured_severity(f, cfg)) all.push_back(std::move(f));
        }
    }
    return make_report(std::move(all));
}

} // namespace convlint
