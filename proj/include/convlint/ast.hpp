#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convlint/source_location.hpp"

namespace convlint {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
    Name,         // identifier; text = name
    This,         // the `this` keyword
    FieldAccess,  // lhs.text (no call); text = member name
    Call,         // lhs.text(args); lhs may be null for an unqualified call
    New,          // new T(args); text = full type text, args = constructor args
    Literal,      // number / string / char / true / false / null; text = raw lexeme
    Unary,        // text = operator, lhs = operand
    Binary,       // text = operator, lhs / rhs = operands
    ClassLiteral, // Some.Type.class; text = the dotted type text
};

struct Expr {
    ExprKind kind = ExprKind::Literal;
    SourceLocation loc;
    std::string text;
    std::unique_ptr<Expr> lhs;
    std::unique_ptr<Expr> rhs;
    std::vector<Expr> args;
    // Raw source of an explicit generic argument list on a call
    // (e.g. "<String>"), empty when absent. Kept verbatim.
    std::string type_args_raw;

    Expr() = default;
    Expr(Expr&&) = default;
    Expr& operator=(Expr&&) = default;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
    Assign,   // lvalue = expr;
    ExprStmt, // expr;
    Throw,    // throw expr;
    Return,   // return [expr];
    If,       // if (expr) then [else]
    Try,      // try body catches+
    LocalVar, // type name [= expr];
    For,      // for (<raw header>) body
    Block,    // { body }
};

struct Stmt;

struct CatchClause {
    std::string exc_type_text;
    std::string var_name;
    std::vector<Stmt> body;
    SourceLocation loc;
};

struct Stmt {
    StmtKind kind = StmtKind::ExprStmt;
    SourceLocation loc;
    std::unique_ptr<Expr> lvalue;           // Assign
    std::unique_ptr<Expr> expr;             // Assign rhs, ExprStmt, Throw, Return (may be null), If cond, LocalVar init (may be null)
    std::vector<Stmt> then_branch;          // If
    std::vector<Stmt> else_branch;          // If (empty when absent)
    std::vector<Stmt> body;                 // Try, For, Block
    std::vector<CatchClause> catches;       // Try
    std::string name;                       // LocalVar variable name
    std::string type_text;                  // LocalVar declared type
    std::string header_raw;                 // For: raw text between the header parens
    bool has_else = false;                  // If: distinguishes `else {}` from no else

    Stmt() = default;
    Stmt(Stmt&&) = default;
    Stmt& operator=(Stmt&&) = default;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct Param {
    std::string name;
    std::string type_text;
    bool is_variadic = false;
    std::vector<std::string> annotations; // names without '@'
};

struct FieldDecl {
    std::string name;
    std::string type_text;
    SourceLocation location;
};

struct MethodDecl {
    std::string name;
    bool is_constructor = false;
    std::vector<Param> params;
    std::vector<std::string> throws_list; // type texts, source order
    std::vector<std::string> annotations;
    std::optional<std::string> doc_template;
    std::optional<std::vector<Stmt>> body; // nullopt for `;` bodies
    SourceLocation location;
};

struct TypeDecl {
    std::string name;
    std::optional<std::string> doc_template;
    std::optional<std::string> extends_name; // type text after `extends`
    std::vector<std::string> annotations;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
    SourceLocation location;
};

struct ImportDecl {
    std::string qname; // without trailing ".*"
    bool is_static = false;
    bool is_wildcard = false;
};

struct CompilationUnit {
    std::string package_name;
    std::vector<ImportDecl> imports;
    std::vector<TypeDecl> types;
    std::string file;
};

// ---------------------------------------------------------------------------
// Small helpers shared by the fact extractor and the printer
// ---------------------------------------------------------------------------

/// True when `e` is `this`, a name, or a chain of field accesses ending in
/// one of those (i.e. a legal assignment target / access path).
inline bool is_access_path(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Name:
    case ExprKind::This:
        return true;
    case ExprKind::FieldAccess:
        return e.lhs && is_access_path(*e.lhs);
    default:
        return false;
    }
}

/// Reconstructs the dotted text of a pure name chain (`a.b.c`); empty string
/// when the expression is not such a chain.
inline std::string name_chain_text(const Expr& e) {
    if (e.kind == ExprKind::Name) return e.text;
    if (e.kind == ExprKind::FieldAccess && e.lhs) {
        std::string base = name_chain_text(*e.lhs);
        if (base.empty()) return {};
        return base + "." + e.text;
    }
    return {};
}

} // namespace convlint
