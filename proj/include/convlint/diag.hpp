#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace convlint {

/// An exception value: a message key selecting a catalog template,
/// positional parameters already rendered to text, and an optional cause.
struct ExcValue {
    std::string key;
    std::vector<std::string> params;
    std::shared_ptr<const ExcValue> cause;
};

struct MessageCatalog {
    std::map<std::string, std::string> entries;
};

inline constexpr const char* kOperationFailureKey = "multex.OperationFailure";
inline constexpr const char* kArgumentNullKey = "ArgumentNullFailure";
inline constexpr const char* kReturnNullKey = "ReturnNullFailure";

namespace diag_detail {

/// Locates a `{digits}` placeholder starting at `pos` in `tmpl`; returns the
/// index value and sets `len`, or -1 when `pos` does not start a placeholder.
inline long long placeholder_at(std::string_view tmpl, std::size_t pos, std::size_t& len) {
    if (tmpl[pos] != '{') return -1;
    std::size_t end = pos + 1;
    while (end < tmpl.size() && tmpl[end] >= '0' && tmpl[end] <= '9') ++end;
    if (end == pos + 1 || end >= tmpl.size() || tmpl[end] != '}') return -1;
    len = end - pos + 1;
    std::size_t digits = end - (pos + 1);
    if (digits > 9) return 1000000000; // certainly out of range; keep verbatim
    long long value = 0;
    for (std::size_t i = pos + 1; i < end; ++i) value = value * 10 + (tmpl[i] - '0');
    return value;
}

} // namespace diag_detail

/// Number of parameters a template consumes: highest `{i}` index plus one,
/// zero for placeholder-free templates.
inline int template_required_arity(std::string_view tmpl) {
    long long max_index = -1;
    for (std::size_t pos = 0; pos < tmpl.size(); ++pos) {
        std::size_t len = 0;
        long long idx = diag_detail::placeholder_at(tmpl, pos, len);
        if (idx >= 0) {
            if (idx > max_index) max_index = idx;
            pos += len - 1;
        }
    }
    return static_cast<int>(max_index + 1);
}

/// Renders one exception value. With a catalog entry, `{i}` placeholders
/// take params[i] and out-of-range placeholders stay verbatim; without one,
/// the fallback is `key[p0, p1, …]`. Never fails.
inline std::string render_message(const MessageCatalog& catalog, const ExcValue& e) {
    auto entry = catalog.entries.find(e.key);
    if (entry == catalog.entries.end()) {
        std::string out = e.key + "[";
        for (std::size_t i = 0; i < e.params.size(); ++i) {
            if (i) out += ", ";
            out += e.params[i];
        }
        return out + "]";
    }
    std::string_view tmpl = entry->second;
    std::string out;
    out.reserve(tmpl.size());
    for (std::size_t pos = 0; pos < tmpl.size(); ++pos) {
        std::size_t len = 0;
        long long idx = diag_detail::placeholder_at(tmpl, pos, len);
        if (idx >= 0 && idx < static_cast<long long>(e.params.size())) {
            out += e.params[static_cast<std::size_t>(idx)];
            pos += len - 1;
        } else {
            out += tmpl[pos];
        }
    }
    return out;
}

/// Whole-chain rendering, outermost first: the first line is the message of
/// `e`, each following line is `Caused by: ` plus the next cause's message.
inline std::string render_chain(const MessageCatalog& catalog, const ExcValue& e) {
    std::string out = render_message(catalog, e);
    for (const ExcValue* cur = e.cause.get(); cur; cur = cur->cause.get()) {
        out += "\nCaused by: ";
        out += render_message(catalog, *cur);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Propagation simulator
// ---------------------------------------------------------------------------

struct FrameArg {
    std::string name;
    std::string type_text;
    std::optional<std::string> value; // nullopt = the NULL marker
    bool nullable = false;
};

struct Frame {
    std::string method_qname;
    std::string simple_sig; // e.g. "Castor.getObject(String, Object...)"
    std::vector<FrameArg> args;
    bool method_nullable = false;
    std::vector<std::string> declared_throws;
    bool wrap_enabled = false;
};

struct CallTrace {
    std::vector<Frame> frames; // index 0 = outermost
    int raise_frame_index = 0;
    ExcValue raised;
    std::map<std::string, std::string> hierarchy; // child key -> parent key
};

/// True iff `key` is a declared entry or a transitive descendant of one.
inline bool is_declared(const std::string& key, const std::vector<std::string>& declared,
                        const std::map<std::string, std::string>& hierarchy) {
    std::set<std::string> seen;
    const std::string* cur = &key;
    for (;;) {
        for (const std::string& d : declared) {
            if (d == *cur) return true;
        }
        if (!seen.insert(*cur).second) return false; // defensive: cyclic hierarchy
        auto parent = hierarchy.find(*cur);
        if (parent == hierarchy.end()) return false;
        cur = &parent->second;
    }
}

/// Walks the trace from the raising frame outwards. Every wrap-enabled
/// frame that does not declare the exception currently in flight wraps it
/// into an OperationFailure whose params are the frame's signature followed
/// by its argument values (NULL rendered as "null"); a wrapper is itself
/// wrapped again at outer frames unless declared there.
inline ExcValue propagate(const CallTrace& trace) {
    ExcValue current = trace.raised;
    for (int f = trace.raise_frame_index; f >= 0; --f) {
        const Frame& frame = trace.frames[static_cast<std::size_t>(f)];
        if (!frame.wrap_enabled) continue;
        if (is_declared(current.key, frame.declared_throws, trace.hierarchy)) continue;
        ExcValue wrapper;
        wrapper.key = kOperationFailureKey;
        wrapper.params.reserve(frame.args.size() + 1);
        wrapper.params.push_back(frame.simple_sig);
        for (const FrameArg& a : frame.args) {
            wrapper.params.push_back(a.value ? *a.value : "null");
        }
        wrapper.cause = std::make_shared<const ExcValue>(std::move(current));
        current = std::move(wrapper);
    }
    return current;
}

// ---------------------------------------------------------------------------
// Null contract
// ---------------------------------------------------------------------------

/// One failure per argument that is NULL without being marked nullable.
inline std::vector<ExcValue> check_null_args(const Frame& frame) {
    std::vector<ExcValue> out;
    for (const FrameArg& a : frame.args) {
        if (!a.value && !a.nullable) {
            out.push_back(ExcValue{kArgumentNullKey, {a.name, frame.simple_sig}, nullptr});
        }
    }
    return out;
}

inline std::optional<ExcValue> check_null_return(const Frame& frame, bool returned_is_null) {
    if (!returned_is_null || frame.method_nullable) return std::nullopt;
    return ExcValue{kReturnNullKey, {frame.simple_sig}, nullptr};
}

/// The built-in templates for the two null-contract failures.
inline const MessageCatalog& null_contract_catalog() {
    static const MessageCatalog catalog{{
        {kArgumentNullKey,
         "Argument \"{0}\" of executable \"{1}\" is null, although not annotated as @Nullable"},
        {kReturnNullKey,
         "Result of executable \"{0}\" is null, although not annotated as @Nullable"},
    }};
    return catalog;
}

} // namespace convlint
