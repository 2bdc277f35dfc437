#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "convlint/ast.hpp"
#include "convlint/config.hpp"

namespace convlint {

enum class ReceiverKind {
    This,        // `this.m()` or an unqualified call
    SimpleName,  // `person.m()` where person is a local or parameter
    FieldOfThis, // `name.m()` / `this.name.m()` where name is an own field
    NewExpr,     // `new T(...)` itself, or a call on a freshly constructed object
    StaticType,  // receiver names a type (`Util.m()`, `a.b.Util.m()`)
    CallResult,  // receiver is the result of another call
    Unresolved,  // anything the declared-type discipline cannot classify
};

enum class AssignTargetKind { OwnField, Local, Other };

enum class ThrowForm { Constructor, Helper };

/// The method a fact occurs in.
struct EnclosingContext {
    std::string package;
    std::string type_name;
    std::string method_name;
    bool method_is_mutator = false;
    bool method_is_constructor = false;
};

struct CallFact {
    EnclosingContext caller;
    ReceiverKind receiver_kind = ReceiverKind::Unresolved;
    std::optional<std::string> receiver_name;
    std::optional<std::string> callee_type_qname; // fully qualified when present
    std::string callee_method_name;
    int arg_count = 0;
    SourceLocation location;
};

struct AssignFact {
    EnclosingContext enclosing;
    AssignTargetKind target_kind = AssignTargetKind::Other;
    std::optional<std::string> field_name;
    SourceLocation location;
};

struct ThrowFact {
    std::string exc_type_qname;
    ThrowForm form = ThrowForm::Constructor;
    std::optional<std::string> helper_name;
    // Arguments passed to the throw site, excluding a leading class literal
    // in helper form. Cause-argument exclusion is a rule decision, not a
    // fact, and happens in the rule engine.
    int message_arg_count = 0;
    std::vector<std::string> enclosing_throws; // resolved qnames, source order
    std::string enclosing_method;
    EnclosingContext enclosing;
    SourceLocation location;
};

struct TypeEntry {
    std::string qname;
    std::string package;
    const TypeDecl* decl = nullptr;
};

struct Facts {
    std::vector<TypeEntry> types;
    std::map<std::string, std::size_t> by_qname;
    std::vector<CallFact> call_facts;
    std::vector<AssignFact> assign_facts;
    std::vector<ThrowFact> throw_facts;
    std::map<std::string, std::string> templates;  // exception type qname -> doc template
    std::map<std::string, std::string> extends_of; // type qname -> resolved parent qname

    /// True iff `qname` is one of `bases` or reaches one through the
    /// corpus extends chains.
    bool is_subtype_of(const std::string& qname, const std::set<std::string>& bases) const {
        std::set<std::string> seen;
        const std::string* cur = &qname;
        for (;;) {
            if (bases.count(*cur)) return true;
            if (!seen.insert(*cur).second) return false; // defensive: cycle in extends
            auto it = extends_of.find(*cur);
            if (it == extends_of.end()) return false;
            cur = &it->second;
        }
    }
};

namespace detail {

inline std::string strip_generics(std::string_view text) {
    std::size_t lt = text.find('<');
    if (lt != std::string_view::npos) {
        std::string out(text.substr(0, lt));
        // keep any array suffix written after the generic arguments
        std::string_view rest = text.substr(lt);
        std::size_t brackets = rest.find("[]");
        while (brackets != std::string_view::npos) {
            out += "[]";
            brackets = rest.find("[]", brackets + 2);
        }
        return out;
    }
    return std::string(text);
}

/// Walks statements and expressions of one compilation unit, appending facts.
class UnitWalker {
public:
    UnitWalker(const CompilationUnit& unit, const RuleConfig& cfg, Facts& facts)
        : unit_(unit), cfg_(cfg), facts_(facts) {}

    /// Fills extends_of for this unit's types; runs before any walking so
    /// subtype queries see the whole corpus.
    void resolve_extends() {
        for (const TypeDecl& type : unit_.types) {
            if (!type.extends_name) continue;
            std::string qname = unit_.package_name + "." + type.name;
            facts_.extends_of[qname] = resolve_exception_text(*type.extends_name);
        }
    }

    void run() {
        for (const TypeDecl& type : unit_.types) {
            current_type_ = &type;
            for (const MethodDecl& method : type.methods) walk_method(method);
        }
    }

private:
    const CompilationUnit& unit_;
    const RuleConfig& cfg_;
    Facts& facts_;
    const TypeDecl* current_type_ = nullptr;
    EnclosingContext ctx_;
    std::vector<std::string> current_throws_;
    std::vector<std::map<std::string, std::string>> scopes_; // name -> declared type text

    // --- name resolution ----------------------------------------------------

    /// Resolves a declared type text to a fully qualified name, or nothing.
    /// Order: explicit import, same package, wildcard import (verified
    /// against the corpus index); dotted names are taken at face value.
    std::optional<std::string> resolve_type_text(std::string_view raw) const {
        std::string text = strip_generics(raw);
        if (text.find("[]") != std::string::npos) return std::nullopt; // array: no member rules apply
        if (text.find('.') != std::string::npos) return text;
        for (const ImportDecl& imp : unit_.imports) {
            if (imp.is_wildcard || imp.is_static) continue;
            std::size_t dot = imp.qname.rfind('.');
            std::string_view last = dot == std::string::npos
                                        ? std::string_view(imp.qname)
                                        : std::string_view(imp.qname).substr(dot + 1);
            if (last == text) return imp.qname;
        }
        std::string same_pkg = unit_.package_name + "." + text;
        if (facts_.by_qname.count(same_pkg)) return same_pkg;
        for (const ImportDecl& imp : unit_.imports) {
            if (!imp.is_wildcard || imp.is_static) continue;
            std::string candidate = imp.qname + "." + text;
            if (facts_.by_qname.count(candidate)) return candidate;
        }
        return std::nullopt;
    }

    /// Resolution for exception names (extends clauses, throws lists, class
    /// literals): like resolve_type_text, but an unresolvable simple name
    /// stays as written, so corpus-external exceptions remain comparable.
    std::string resolve_exception_text(std::string_view raw) const {
        std::string text = strip_generics(raw);
        if (auto resolved = resolve_type_text(text)) return *resolved;
        return text;
    }

    // --- scope handling -------------------------------------------------------

    std::optional<std::string> lookup_var(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return found->second;
        }
        return std::nullopt;
    }

    std::optional<std::string> enclosing_field_type(const std::string& name) const {
        for (const FieldDecl& f : current_type_->fields) {
            if (f.name == name) return f.type_text;
        }
        return std::nullopt;
    }

    // --- walking ---------------------------------------------------------------

    void walk_method(const MethodDecl& method) {
        ctx_.package = unit_.package_name;
        ctx_.type_name = current_type_->name;
        ctx_.method_name = method.name;
        ctx_.method_is_constructor = method.is_constructor;
        ctx_.method_is_mutator = false;
        for (const std::string& glob : cfg_.mutator_method_patterns) {
            if (matches_name_glob(method.name, glob)) {
                ctx_.method_is_mutator = true;
                break;
            }
        }
        current_throws_.clear();
        for (const std::string& t : method.throws_list) {
            current_throws_.push_back(resolve_exception_text(t));
        }
        if (!method.body) return;
        scopes_.clear();
        scopes_.emplace_back();
        for (const Param& p : method.params) scopes_.back()[p.name] = p.type_text;
        for (const Stmt& s : *method.body) walk_stmt(s);
        scopes_.pop_back();
    }

    void walk_scoped(const std::vector<Stmt>& body) {
        scopes_.emplace_back();
        for (const Stmt& s : body) walk_stmt(s);
        scopes_.pop_back();
    }

    void walk_stmt(const Stmt& s) {
        switch (s.kind) {
        case StmtKind::Assign:
            record_assign(s);
            walk_expr(*s.expr);
            break;
        case StmtKind::ExprStmt:
            maybe_record_helper_throw(*s.expr, s.loc);
            walk_expr(*s.expr);
            break;
        case StmtKind::Throw:
            record_throw(*s.expr, s.loc);
            walk_expr(*s.expr);
            break;
        case StmtKind::Return:
            if (s.expr) walk_expr(*s.expr);
            break;
        case StmtKind::If:
            walk_expr(*s.expr);
            walk_scoped(s.then_branch);
            walk_scoped(s.else_branch);
            break;
        case StmtKind::Try:
            walk_scoped(s.body);
            for (const CatchClause& c : s.catches) {
                scopes_.emplace_back();
                scopes_.back()[c.var_name] = c.exc_type_text;
                for (const Stmt& inner : c.body) walk_stmt(inner);
                scopes_.pop_back();
            }
            break;
        case StmtKind::LocalVar:
            if (s.expr) walk_expr(*s.expr); // initializer sees the outer scope only
            scopes_.back()[s.name] = s.type_text;
            break;
        case StmtKind::For:
            // Loop headers are opaque raw text; no facts come from them.
            walk_scoped(s.body);
            break;
        case StmtKind::Block:
            walk_scoped(s.body);
            break;
        }
    }

    void record_assign(const Stmt& s) {
        AssignFact fact;
        fact.enclosing = ctx_;
        fact.location = s.loc;
        const Expr& lv = *s.lvalue;
        if (lv.kind == ExprKind::FieldAccess && lv.lhs && lv.lhs->kind == ExprKind::This) {
            fact.target_kind = AssignTargetKind::OwnField;
            fact.field_name = lv.text;
        } else if (lv.kind == ExprKind::Name) {
            if (lookup_var(lv.text)) {
                fact.target_kind = AssignTargetKind::Local;
            } else if (enclosing_field_type(lv.text)) {
                fact.target_kind = AssignTargetKind::OwnField;
                fact.field_name = lv.text;
            } else {
                fact.target_kind = AssignTargetKind::Other;
            }
        } else {
            fact.target_kind = AssignTargetKind::Other;
        }
        facts_.assign_facts.push_back(std::move(fact));
    }

    bool is_helper_throw_call(const Expr& e) const {
        return e.kind == ExprKind::Call && cfg_.throw_helper_names.count(e.text) &&
               !e.args.empty() && e.args[0].kind == ExprKind::ClassLiteral;
    }

    void maybe_record_helper_throw(const Expr& e, const SourceLocation& stmt_loc) {
        if (!is_helper_throw_call(e)) return;
        ThrowFact fact;
        fact.form = ThrowForm::Helper;
        fact.helper_name = e.text;
        fact.exc_type_qname = resolve_exception_text(e.args[0].text);
        fact.message_arg_count = static_cast<int>(e.args.size()) - 1;
        finish_throw_fact(std::move(fact), stmt_loc);
    }

    void record_throw(const Expr& e, const SourceLocation& stmt_loc) {
        if (e.kind == ExprKind::New) {
            ThrowFact fact;
            fact.form = ThrowForm::Constructor;
            fact.exc_type_qname = resolve_exception_text(e.text);
            fact.message_arg_count = static_cast<int>(e.args.size());
            finish_throw_fact(std::move(fact), stmt_loc);
            return;
        }
        if (is_helper_throw_call(e)) {
            maybe_record_helper_throw(e, stmt_loc);
            return;
        }
        // `throw new FooExc(...).something()...` — the thrown type is the one
        // constructed at the head of the chain. Other call shapes carry no
        // statically known type and produce no throw fact.
        const Expr* base = &e;
        while (base->kind == ExprKind::Call && base->lhs) base = base->lhs.get();
        if (base->kind == ExprKind::New) {
            ThrowFact fact;
            fact.form = ThrowForm::Constructor;
            fact.exc_type_qname = resolve_exception_text(base->text);
            fact.message_arg_count = static_cast<int>(base->args.size());
            finish_throw_fact(std::move(fact), stmt_loc);
        }
    }

    void finish_throw_fact(ThrowFact fact, const SourceLocation& stmt_loc) {
        fact.enclosing_throws = current_throws_;
        fact.enclosing_method = ctx_.method_name;
        fact.enclosing = ctx_;
        fact.location = stmt_loc;
        facts_.throw_facts.push_back(std::move(fact));
    }

    void walk_expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Call: {
            if (e.lhs) walk_expr(*e.lhs);
            CallFact fact;
            fact.caller = ctx_;
            fact.callee_method_name = e.text;
            fact.arg_count = static_cast<int>(e.args.size());
            fact.location = e.loc;
            classify_receiver(e.lhs.get(), fact);
            facts_.call_facts.push_back(std::move(fact));
            for (const Expr& arg : e.args) walk_expr(arg);
            break;
        }
        case ExprKind::New: {
            CallFact fact;
            fact.caller = ctx_;
            fact.receiver_kind = ReceiverKind::NewExpr;
            fact.callee_type_qname = resolve_type_text(e.text);
            std::string stripped = strip_generics(e.text);
            std::size_t dot = stripped.rfind('.');
            fact.callee_method_name = dot == std::string::npos ? stripped : stripped.substr(dot + 1);
            fact.arg_count = static_cast<int>(e.args.size());
            fact.location = e.loc;
            facts_.call_facts.push_back(std::move(fact));
            for (const Expr& arg : e.args) walk_expr(arg);
            break;
        }
        case ExprKind::FieldAccess:
            if (e.lhs) walk_expr(*e.lhs);
            break;
        case ExprKind::Unary:
            walk_expr(*e.lhs);
            break;
        case ExprKind::Binary:
            walk_expr(*e.lhs);
            walk_expr(*e.rhs);
            break;
        case ExprKind::Name:
        case ExprKind::This:
        case ExprKind::Literal:
        case ExprKind::ClassLiteral:
            break;
        }
    }

    void classify_receiver(const Expr* receiver, CallFact& fact) {
        if (!receiver || receiver->kind == ExprKind::This) {
            fact.receiver_kind = ReceiverKind::This;
            fact.callee_type_qname = unit_.package_name + "." + current_type_->name;
            return;
        }
        switch (receiver->kind) {
        case ExprKind::Name: {
            const std::string& name = receiver->text;
            fact.receiver_name = name;
            if (auto var_type = lookup_var(name)) {
                fact.receiver_kind = ReceiverKind::SimpleName;
                fact.callee_type_qname = resolve_type_text(*var_type);
            } else if (auto field_type = enclosing_field_type(name)) {
                fact.receiver_kind = ReceiverKind::FieldOfThis;
                fact.callee_type_qname = resolve_type_text(*field_type);
            } else if (auto as_type = resolve_simple_type_name(name)) {
                fact.receiver_kind = ReceiverKind::StaticType;
                fact.callee_type_qname = as_type;
            } else {
                fact.receiver_kind = ReceiverKind::Unresolved;
            }
            return;
        }
        case ExprKind::FieldAccess: {
            if (receiver->lhs && receiver->lhs->kind == ExprKind::This) {
                fact.receiver_kind = ReceiverKind::FieldOfThis;
                fact.receiver_name = receiver->text;
                if (auto field_type = enclosing_field_type(receiver->text)) {
                    fact.callee_type_qname = resolve_type_text(*field_type);
                }
                return;
            }
            std::string chain = name_chain_text(*receiver);
            if (!chain.empty()) {
                std::size_t dot = chain.find('.');
                std::string root = chain.substr(0, dot);
                if (lookup_var(root) || enclosing_field_type(root)) {
                    // a field path through another object: outside the
                    // declared-type discipline
                    fact.receiver_kind = ReceiverKind::Unresolved;
                } else {
                    // a dotted name that is not variable-rooted names a type,
                    // at face value if the corpus does not know it
                    fact.receiver_kind = ReceiverKind::StaticType;
                    fact.callee_type_qname = chain;
                }
                return;
            }
            const Expr* root = receiver;
            while (root->kind == ExprKind::FieldAccess && root->lhs) root = root->lhs.get();
            fact.receiver_kind = (root->kind == ExprKind::Call || root->kind == ExprKind::New)
                                     ? ReceiverKind::CallResult
                                     : ReceiverKind::Unresolved;
            return;
        }
        case ExprKind::Call:
            fact.receiver_kind = ReceiverKind::CallResult;
            return;
        case ExprKind::New:
            fact.receiver_kind = ReceiverKind::NewExpr;
            fact.callee_type_qname = resolve_type_text(receiver->text);
            return;
        default:
            fact.receiver_kind = ReceiverKind::Unresolved;
            return;
        }
    }

    /// Resolves a simple name used in receiver position to a type, without
    /// the raw-text fallback (an unknown simple name is not assumed to be a
    /// type).
    std::optional<std::string> resolve_simple_type_name(const std::string& name) const {
        for (const ImportDecl& imp : unit_.imports) {
            if (imp.is_wildcard || imp.is_static) continue;
            std::size_t dot = imp.qname.rfind('.');
            std::string_view last = dot == std::string::npos
                                        ? std::string_view(imp.qname)
                                        : std::string_view(imp.qname).substr(dot + 1);
            if (last == name) return imp.qname;
        }
        std::string same_pkg = unit_.package_name + "." + name;
        if (facts_.by_qname.count(same_pkg)) return same_pkg;
        for (const ImportDecl& imp : unit_.imports) {
            if (!imp.is_wildcard || imp.is_static) continue;
            std::string candidate = imp.qname + "." + name;
            if (facts_.by_qname.count(candidate)) return candidate;
        }
        return std::nullopt;
    }
};

} // namespace detail

/// Builds the fact base for a set of parsed units. The configuration
/// participates because two fact fields depend on it: which method names
/// count as mutators and which call names are throw helpers.
inline Facts extract_facts(const std::vector<CompilationUnit>& units, const RuleConfig& cfg = {}) {
    Facts facts;
    for (const CompilationUnit& unit : units) {
        for (const TypeDecl& type : unit.types) {
            TypeEntry entry;
            entry.qname = unit.package_name + "." + type.name;
            entry.package = unit.package_name;
            entry.decl = &type;
            if (!facts.by_qname.count(entry.qname)) {
                facts.by_qname[entry.qname] = facts.types.size();
            }
            if (type.doc_template) facts.templates[entry.qname] = *type.doc_template;
            facts.types.push_back(std::move(entry));
        }
    }
    for (const CompilationUnit& unit : units) {
        detail::UnitWalker(unit, cfg, facts).resolve_extends();
    }
    for (const CompilationUnit& unit : units) {
        detail::UnitWalker(unit, cfg, facts).run();
    }
    return facts;
}

} // namespace convlint
