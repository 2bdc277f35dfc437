#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace convlint {

class PatternSyntaxError : public std::runtime_error {
public:
    explicit PatternSyntaxError(const std::string& what) : std::runtime_error(what) {}
};

class UnboundVariableError : public std::runtime_error {
public:
    explicit UnboundVariableError(const std::string& var)
        : std::runtime_error("constraint references unbound variable \"" + var + "\""),
          variable(var) {}

    std::string variable;
};

// ---------------------------------------------------------------------------
// Pattern model
// ---------------------------------------------------------------------------

enum class ElementKind {
    Literal,  // a fixed segment
    AnySeg,   // `*` — exactly one segment
    Capture,  // `{v}` — exactly one segment, bound to v
    Ellipsis, // `..` — zero or more segments
};

struct Element {
    ElementKind kind = ElementKind::Literal;
    std::string text; // segment for Literal, variable name for Capture
};

struct QNamePattern {
    std::vector<Element> elements;
};

/// Type pattern plus one member-name element; the argument pattern is
/// always `(..)` and carries no state.
struct SignaturePattern {
    QNamePattern type_pattern;
    Element member_pattern;
};

struct Binding {
    std::map<std::string, std::string> assignments;

    friend auto operator<=>(const Binding&, const Binding&) = default;
};

struct Constraint {
    enum class Kind { NotEqual, Equal, InSet, NotInSet };

    Kind kind = Kind::Equal;
    std::string v1;
    std::string v2;                // Equal / NotEqual only
    std::set<std::string> values;  // InSet / NotInSet only

    static Constraint not_equal(std::string a, std::string b) {
        return {Kind::NotEqual, std::move(a), std::move(b), {}};
    }
    static Constraint equal(std::string a, std::string b) {
        return {Kind::Equal, std::move(a), std::move(b), {}};
    }
    static Constraint in_set(std::string v, std::set<std::string> s) {
        return {Kind::InSet, std::move(v), {}, std::move(s)};
    }
    static Constraint not_in_set(std::string v, std::set<std::string> s) {
        return {Kind::NotInSet, std::move(v), {}, std::move(s)};
    }
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace pattern_detail {

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
    };
    auto part = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(s[0])) return false;
    for (char c : s.substr(1)) {
        if (!part(c)) return false;
    }
    return true;
}

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

inline Element parse_segment(const std::string& part) {
    if (part == "*") return {ElementKind::AnySeg, {}};
    if (!part.empty() && part.front() == '{') {
        if (part.size() < 3 || part.back() != '}') {
            throw PatternSyntaxError("malformed capture segment \"" + part + "\"");
        }
        std::string var = part.substr(1, part.size() - 2);
        if (!is_identifier(var)) {
            throw PatternSyntaxError("capture variable must be an identifier: \"" + part + "\"");
        }
        return {ElementKind::Capture, std::move(var)};
    }
    return {ElementKind::Literal, part};
}

} // namespace pattern_detail

/// `.`-separated elements; `*` matches one segment, `{v}` captures one
/// segment, an empty spot between dots (`a..b`) is a multi-segment ellipsis.
/// A pattern may not begin or end with `..`, and `....` is rejected.
inline QNamePattern parse_qname_pattern(std::string_view text) {
    if (text.empty()) throw PatternSyntaxError("empty pattern");
    std::vector<std::string> parts = pattern_detail::split_dots(text);
    QNamePattern pattern;
    bool prev_empty = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty()) {
            if (i == 0) throw PatternSyntaxError("pattern must not start with '.'");
            if (i + 1 == parts.size()) throw PatternSyntaxError("pattern must not end with '.'");
            if (prev_empty) throw PatternSyntaxError("adjacent '..' in pattern");
            pattern.elements.push_back({ElementKind::Ellipsis, {}});
            prev_empty = true;
        } else {
            pattern.elements.push_back(pattern_detail::parse_segment(parts[i]));
            prev_empty = false;
        }
    }
    return pattern;
}

/// `<type pattern>.<member>(..)`; only the any-args form is supported.
inline SignaturePattern parse_signature_pattern(std::string_view text) {
    constexpr std::string_view kAnyArgs = "(..)";
    if (text.size() < kAnyArgs.size() ||
        text.substr(text.size() - kAnyArgs.size()) != kAnyArgs) {
        throw PatternSyntaxError("signature pattern must end with \"(..)\"");
    }
    QNamePattern full = parse_qname_pattern(text.substr(0, text.size() - kAnyArgs.size()));
    SignaturePattern sig;
    sig.member_pattern = full.elements.back();
    if (sig.member_pattern.kind == ElementKind::Ellipsis) {
        throw PatternSyntaxError("the member part of a signature pattern cannot be '..'");
    }
    full.elements.pop_back();
    if (full.elements.empty()) {
        throw PatternSyntaxError("a signature pattern needs a type part before the member");
    }
    sig.type_pattern = std::move(full);
    return sig;
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

namespace pattern_detail {

inline void match_from(const std::vector<Element>& elems, const std::vector<std::string>& segs,
                       std::size_t ei, std::size_t si, Binding& binding,
                       std::set<Binding>& out) {
    if (ei == elems.size()) {
        if (si == segs.size()) out.insert(binding);
        return;
    }
    const Element& e = elems[ei];
    switch (e.kind) {
    case ElementKind::Literal:
        if (si < segs.size() && segs[si] == e.text) {
            match_from(elems, segs, ei + 1, si + 1, binding, out);
        }
        return;
    case ElementKind::AnySeg:
        if (si < segs.size()) match_from(elems, segs, ei + 1, si + 1, binding, out);
        return;
    case ElementKind::Capture: {
        if (si >= segs.size()) return;
        auto bound = binding.assignments.find(e.text);
        if (bound != binding.assignments.end()) {
            if (bound->second == segs[si]) {
                match_from(elems, segs, ei + 1, si + 1, binding, out);
            }
            return;
        }
        binding.assignments.emplace(e.text, segs[si]);
        match_from(elems, segs, ei + 1, si + 1, binding, out);
        binding.assignments.erase(e.text);
        return;
    }
    case ElementKind::Ellipsis:
        for (std::size_t k = si; k <= segs.size(); ++k) {
            match_from(elems, segs, ei + 1, k, binding, out);
        }
        return;
    }
}

inline bool match_member(const Element& member, const std::string& name, Binding& binding) {
    switch (member.kind) {
    case ElementKind::Literal:
        return member.text == name;
    case ElementKind::AnySeg:
        return true;
    case ElementKind::Capture: {
        auto bound = binding.assignments.find(member.text);
        if (bound != binding.assignments.end()) return bound->second == name;
        binding.assignments.emplace(member.text, name);
        return true;
    }
    case ElementKind::Ellipsis:
        return false; // excluded at parse time
    }
    return false;
}

} // namespace pattern_detail

/// Every extension of `seed` under which the pattern matches the whole
/// name. The result is canonically ordered and duplicate-free, so equal
/// inputs serialize identically.
inline std::vector<Binding> match_qname(const QNamePattern& pattern, std::string_view name,
                                        const Binding& seed = {}) {
    std::vector<std::string> segs = pattern_detail::split_dots(name);
    std::set<Binding> out;
    Binding working = seed;
    pattern_detail::match_from(pattern.elements, segs, 0, 0, working, out);
    return {out.begin(), out.end()};
}

inline std::vector<Binding> match_signature(const SignaturePattern& pattern,
                                            std::string_view callee_type_qname,
                                            const std::string& callee_method_name,
                                            const Binding& seed = {}) {
    std::set<Binding> out;
    for (const Binding& tb : match_qname(pattern.type_pattern, callee_type_qname, seed)) {
        Binding extended = tb;
        if (pattern_detail::match_member(pattern.member_pattern, callee_method_name, extended)) {
            out.insert(std::move(extended));
        }
    }
    return {out.begin(), out.end()};
}

/// Conjunction of all constraints under `b`; a constraint naming an unbound
/// variable signals a misconfigured rule and throws.
inline bool satisfies(const Binding& b, const std::vector<Constraint>& constraints) {
    auto value_of = [&](const std::string& var) -> const std::string& {
        auto it = b.assignments.find(var);
        if (it == b.assignments.end()) throw UnboundVariableError(var);
        return it->second;
    };
    for (const Constraint& c : constraints) {
        switch (c.kind) {
        case Constraint::Kind::NotEqual:
            if (value_of(c.v1) == value_of(c.v2)) return false;
            break;
        case Constraint::Kind::Equal:
            if (value_of(c.v1) != value_of(c.v2)) return false;
            break;
        case Constraint::Kind::InSet:
            if (!c.values.count(value_of(c.v1))) return false;
            break;
        case Constraint::Kind::NotInSet:
            if (c.values.count(value_of(c.v1))) return false;
            break;
        }
    }
    return true;
}

} // namespace convlint
