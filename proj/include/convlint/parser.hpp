#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convlint/ast.hpp"
#include "convlint/lexer.hpp"

namespace convlint {

/// Recursive-descent parser for the supported Java subset.
///
/// Syntax errors throw SyntaxError; parsing of the offending file stops at
/// the first error. Non-doc comments are discarded by the lexer; doc
/// comments attach to the immediately following type or method declaration
/// (a doc comment in any other position is dropped).
class Parser {
public:
    static CompilationUnit parse(std::string_view source, std::string file) {
        Parser p(source, file);
        return p.parse_unit_impl();
    }

private:
    Parser(std::string_view source, std::string file)
        : src_(source), file_(std::move(file)), tokens_(Lexer(source, file_).tokenize()) {}

    std::string_view src_;
    std::string file_;
    std::vector<Token> tokens_;
    std::size_t i_ = 0;

    // --- token plumbing ----------------------------------------------------

    const Token& cur() const { return tokens_[i_]; }
    const Token& ahead(std::size_t n = 1) const {
        std::size_t j = i_ + n;
        return j < tokens_.size() ? tokens_[j] : tokens_.back();
    }

    SourceLocation loc_of(const Token& t) const { return {file_, t.line, t.col}; }
    SourceLocation cur_loc() const { return loc_of(cur()); }

    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(cur_loc(), "expected " + expected);
    }

    bool is_punct(std::string_view text) const {
        return cur().kind == TokenKind::Punct && cur().text == text;
    }
    bool is_ident(std::string_view text) const {
        return cur().kind == TokenKind::Ident && cur().text == text;
    }

    Token take() { return tokens_[i_++]; }

    Token expect_punct(std::string_view text) {
        if (!is_punct(text)) fail("'" + std::string(text) + "'");
        return take();
    }
    Token expect_ident() {
        if (cur().kind != TokenKind::Ident) fail("an identifier");
        return take();
    }
    void expect_keyword(std::string_view word) {
        if (!is_ident(word)) fail("'" + std::string(word) + "'");
        take();
    }
    bool accept_punct(std::string_view text) {
        if (is_punct(text)) {
            take();
            return true;
        }
        return false;
    }
    bool accept_keyword(std::string_view word) {
        if (is_ident(word)) {
            take();
            return true;
        }
        return false;
    }

    // --- shared small grammar pieces ---------------------------------------

    std::string parse_qname_text() {
        std::string s = expect_ident().text;
        while (is_punct(".") && ahead().kind == TokenKind::Ident) {
            take();
            s += ".";
            s += take().text;
        }
        return s;
    }

    /// Consumes a balanced `<...>` token run starting at the current `<`
    /// and returns it verbatim (brackets included) from the source text.
    std::string capture_angle_raw() {
        std::size_t start = cur().begin;
        int depth = 0;
        for (;;) {
            if (cur().kind == TokenKind::End) fail("'>'");
            if (cur().kind == TokenKind::Punct) {
                for (char c : cur().text) {
                    if (c == '<') ++depth;
                    else if (c == '>') --depth;
                }
            }
            std::size_t end = cur().end;
            take();
            if (depth == 0) return std::string(src_.substr(start, end - start));
        }
    }

    std::string parse_typeref_text() {
        std::string text = parse_qname_text();
        if (is_punct("<")) text += capture_angle_raw();
        while (is_punct("[")) {
            take();
            expect_punct("]");
            text += "[]";
        }
        return text;
    }

    std::vector<std::string> parse_annotations() {
        std::vector<std::string> anns;
        while (is_punct("@")) {
            take();
            anns.push_back(expect_ident().text);
        }
        return anns;
    }

    void skip_modifiers() {
        for (;;) {
            if (is_ident("public") || is_ident("private") || is_ident("protected") ||
                is_ident("static") || is_ident("final") || is_ident("abstract")) {
                take();
            } else {
                return;
            }
        }
    }

    /// Consumes pending doc comments; the last one wins.
    std::optional<std::string> take_doc() {
        std::optional<std::string> doc;
        while (cur().kind == TokenKind::Doc) {
            doc = process_doc_text(cur().text);
            take();
        }
        return doc;
    }

    /// Strips per-line decoration from doc comment content: leading
    /// whitespace, then one `*` gutter, then one space; the whole result is
    /// trimmed. `/** User {0} */` and the multi-line gutter style both yield
    /// the bare template text.
    static std::string process_doc_text(std::string_view content) {
        std::string out;
        std::size_t pos = 0;
        bool first = true;
        while (pos <= content.size()) {
            std::size_t nl = content.find('\n', pos);
            std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            std::size_t k = 0;
            while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
            if (k < line.size() && line[k] == '*') {
                ++k;
                if (k < line.size() && line[k] == ' ') ++k;
            }
            if (!first) out += '\n';
            out += std::string(line.substr(k));
            first = false;
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        std::size_t b = out.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        std::size_t e = out.find_last_not_of(" \t\r\n");
        return out.substr(b, e - b + 1);
    }

    // --- declarations -------------------------------------------------------

    CompilationUnit parse_unit_impl() {
        CompilationUnit unit;
        unit.file = file_;
        expect_keyword("package");
        unit.package_name = parse_qname_text();
        expect_punct(";");
        while (is_ident("import")) unit.imports.push_back(parse_import());
        for (;;) {
            auto doc = take_doc();
            if (cur().kind == TokenKind::End) break;
            unit.types.push_back(parse_type(std::move(doc)));
        }
        return unit;
    }

    ImportDecl parse_import() {
        take(); // 'import'
        ImportDecl imp;
        imp.is_static = accept_keyword("static");
        imp.qname = parse_qname_text();
        if (is_punct(".") && ahead().kind == TokenKind::Punct && ahead().text == "*") {
            take();
            take();
            imp.is_wildcard = true;
        }
        expect_punct(";");
        return imp;
    }

    TypeDecl parse_type(std::optional<std::string> doc) {
        TypeDecl type;
        type.doc_template = std::move(doc);
        type.annotations = parse_annotations();
        skip_modifiers();
        expect_keyword("class");
        Token name = expect_ident();
        type.name = name.text;
        type.location = loc_of(name);
        if (accept_keyword("extends")) type.extends_name = parse_qname_text();
        expect_punct("{");
        for (;;) {
            auto member_doc = take_doc();
            if (accept_punct("}")) break;
            if (cur().kind == TokenKind::End) fail("'}'");
            parse_member(type, std::move(member_doc));
        }
        return type;
    }

    void parse_member(TypeDecl& type, std::optional<std::string> doc) {
        std::vector<std::string> anns = parse_annotations();
        skip_modifiers();
        if (cur().kind == TokenKind::Ident && ahead().kind == TokenKind::Punct &&
            ahead().text == "(") {
            // No return type: this must be a constructor of the enclosing class.
            Token name = take();
            if (name.text != type.name) {
                throw SyntaxError(loc_of(name), "expected a constructor named '" + type.name + "'");
            }
            type.methods.push_back(
                parse_method_rest(name, /*is_constructor=*/true, std::move(anns), std::move(doc)));
            return;
        }
        if (is_ident("void")) {
            take();
            Token name = expect_ident();
            if (!is_punct("(")) fail("'('");
            type.methods.push_back(
                parse_method_rest(name, /*is_constructor=*/false, std::move(anns), std::move(doc)));
            return;
        }
        std::string type_text = parse_typeref_text();
        Token name = expect_ident();
        if (is_punct("(")) {
            type.methods.push_back(
                parse_method_rest(name, /*is_constructor=*/false, std::move(anns), std::move(doc)));
            return;
        }
        // Field. The initializer, when present, carries no information any
        // rule consumes, so it is parsed and discarded.
        FieldDecl field;
        field.name = name.text;
        field.type_text = std::move(type_text);
        field.location = loc_of(name);
        if (accept_punct("=")) parse_expr();
        expect_punct(";");
        type.fields.push_back(std::move(field));
    }

    MethodDecl parse_method_rest(const Token& name, bool is_constructor,
                                 std::vector<std::string> anns, std::optional<std::string> doc) {
        MethodDecl m;
        m.name = name.text;
        m.is_constructor = is_constructor;
        m.annotations = std::move(anns);
        m.doc_template = std::move(doc);
        m.location = loc_of(name);
        expect_punct("(");
        if (!accept_punct(")")) {
            for (;;) {
                if (!m.params.empty() && m.params.back().is_variadic) {
                    fail("')' (a variadic parameter must be last)");
                }
                m.params.push_back(parse_param());
                if (accept_punct(")")) break;
                expect_punct(",");
            }
        }
        if (accept_keyword("throws")) {
            m.throws_list.push_back(parse_qname_text());
            while (accept_punct(",")) m.throws_list.push_back(parse_qname_text());
        }
        if (accept_punct(";")) {
            m.body = std::nullopt;
        } else {
            m.body = parse_block_body();
        }
        return m;
    }

    Param parse_param() {
        Param p;
        p.annotations = parse_annotations();
        accept_keyword("final");
        p.type_text = parse_typeref_text();
        if (accept_punct("...")) p.is_variadic = true;
        p.name = expect_ident().text;
        return p;
    }

    // --- statements ---------------------------------------------------------

    std::vector<Stmt> parse_block_body() {
        expect_punct("{");
        std::vector<Stmt> body;
        for (;;) {
            while (cur().kind == TokenKind::Doc) take(); // stray docs in bodies are dropped
            if (accept_punct("}")) return body;
            if (cur().kind == TokenKind::End) fail("'}'");
            body.push_back(parse_stmt());
        }
    }

    /// A statement used as an `if`/`for` branch; a braced block contributes
    /// its statements directly, anything else is a single-element list.
    std::vector<Stmt> parse_branch() {
        if (is_punct("{")) return parse_block_body();
        std::vector<Stmt> one;
        one.push_back(parse_stmt());
        return one;
    }

    Stmt parse_stmt() {
        SourceLocation loc = cur_loc();
        if (is_punct("{")) {
            Stmt s;
            s.kind = StmtKind::Block;
            s.loc = loc;
            s.body = parse_block_body();
            return s;
        }
        if (is_ident("if")) return parse_if();
        if (is_ident("for")) return parse_for();
        if (is_ident("try")) return parse_try();
        if (is_ident("return")) {
            take();
            Stmt s;
            s.kind = StmtKind::Return;
            s.loc = loc;
            if (!is_punct(";")) s.expr = std::make_unique<Expr>(parse_expr());
            expect_punct(";");
            return s;
        }
        if (is_ident("throw")) {
            take();
            Stmt s;
            s.kind = StmtKind::Throw;
            s.loc = loc;
            Expr e = parse_expr();
            if (e.kind != ExprKind::New && e.kind != ExprKind::Call) {
                throw SyntaxError(e.loc, "expected a 'new' expression or a call after 'throw'");
            }
            s.expr = std::make_unique<Expr>(std::move(e));
            expect_punct(";");
            return s;
        }
        if (is_ident("final")) {
            take();
            return parse_localvar_rest(loc);
        }
        if (cur().kind == TokenKind::Ident) {
            // Either a local variable declaration or an expression statement;
            // decided by trial-parsing `typeref IDENT` followed by '=' or ';'.
            std::size_t mark = i_;
            try {
                std::string type_text = parse_typeref_text();
                if (cur().kind == TokenKind::Ident &&
                    (ahead().text == "=" || ahead().text == ";") &&
                    ahead().kind == TokenKind::Punct) {
                    i_ = mark;
                    return parse_localvar_rest(loc);
                }
            } catch (const SyntaxError&) {
                // fall through to the expression-statement parse
            }
            i_ = mark;
        }
        return parse_expr_stmt(loc);
    }

    Stmt parse_localvar_rest(SourceLocation loc) {
        Stmt s;
        s.kind = StmtKind::LocalVar;
        s.loc = std::move(loc);
        s.type_text = parse_typeref_text();
        s.name = expect_ident().text;
        if (accept_punct("=")) s.expr = std::make_unique<Expr>(parse_expr());
        expect_punct(";");
        return s;
    }

    Stmt parse_if() {
        Stmt s;
        s.kind = StmtKind::If;
        s.loc = cur_loc();
        take(); // 'if'
        expect_punct("(");
        s.expr = std::make_unique<Expr>(parse_expr());
        expect_punct(")");
        s.then_branch = parse_branch();
        if (accept_keyword("else")) {
            s.has_else = true;
            s.else_branch = parse_branch();
        }
        return s;
    }

    Stmt parse_for() {
        Stmt s;
        s.kind = StmtKind::For;
        s.loc = cur_loc();
        take(); // 'for'
        expect_punct("(");
        // The header is captured raw up to the matching ')' and never
        // interpreted; none of the rules look inside loop headers.
        std::size_t start = cur().begin;
        int depth = 1;
        for (;;) {
            if (cur().kind == TokenKind::End) fail("')'");
            if (cur().kind == TokenKind::Punct) {
                if (cur().text == "(") ++depth;
                else if (cur().text == ")") {
                    --depth;
                    if (depth == 0) {
                        s.header_raw = std::string(src_.substr(start, cur().begin - start));
                        take();
                        break;
                    }
                }
            }
            take();
        }
        s.body = parse_branch();
        return s;
    }

    Stmt parse_try() {
        Stmt s;
        s.kind = StmtKind::Try;
        s.loc = cur_loc();
        take(); // 'try'
        s.body = parse_block_body();
        while (is_ident("catch")) {
            CatchClause clause;
            clause.loc = cur_loc();
            take();
            expect_punct("(");
            accept_keyword("final");
            clause.exc_type_text = parse_typeref_text();
            clause.var_name = expect_ident().text;
            expect_punct(")");
            clause.body = parse_block_body();
            s.catches.push_back(std::move(clause));
        }
        if (s.catches.empty()) fail("'catch'");
        return s;
    }

    Stmt parse_expr_stmt(SourceLocation loc) {
        Expr e = parse_expr();
        Stmt s;
        s.loc = std::move(loc);
        if (e.kind == ExprKind::Binary && e.text == "=") {
            if (!e.lhs || !is_access_path(*e.lhs)) {
                throw SyntaxError(e.loc, "expected an assignable target before '='");
            }
            s.kind = StmtKind::Assign;
            s.lvalue = std::move(e.lhs);
            s.expr = std::move(e.rhs);
        } else {
            s.kind = StmtKind::ExprStmt;
            s.expr = std::make_unique<Expr>(std::move(e));
        }
        expect_punct(";");
        return s;
    }

    // --- expressions ----------------------------------------------------------

    Expr parse_expr() { return parse_assignment(); }

    Expr parse_assignment() {
        Expr lhs = parse_binary(0);
        if (is_punct("=")) {
            take();
            Expr rhs = parse_assignment(); // right-associative
            Expr e;
            e.kind = ExprKind::Binary;
            e.text = "=";
            e.loc = lhs.loc;
            e.lhs = std::make_unique<Expr>(std::move(lhs));
            e.rhs = std::make_unique<Expr>(std::move(rhs));
            return e;
        }
        return lhs;
    }

    // Binary precedence tiers, loosest first.
    static constexpr int kTierCount = 5;
    bool at_binary_op(int tier) const {
        switch (tier) {
        case 0: return is_punct("||");
        case 1: return is_punct("&&");
        case 2: return is_punct("==") || is_punct("!=");
        case 3:
            return is_punct("<") || is_punct(">") || is_punct("<=") || is_punct(">=") ||
                   is_ident("instanceof");
        case 4: return is_punct("+") || is_punct("-");
        default: return false;
        }
    }

    Expr parse_binary(int tier) {
        if (tier >= kTierCount) return parse_unary();
        Expr lhs = parse_binary(tier + 1);
        while (at_binary_op(tier)) {
            bool is_instanceof = is_ident("instanceof");
            std::string op = take().text;
            Expr rhs;
            if (is_instanceof) {
                rhs.kind = ExprKind::Name;
                rhs.loc = cur_loc();
                rhs.text = parse_typeref_text();
            } else {
                rhs = parse_binary(tier + 1);
            }
            Expr e;
            e.kind = ExprKind::Binary;
            e.text = std::move(op);
            e.loc = lhs.loc;
            e.lhs = std::make_unique<Expr>(std::move(lhs));
            e.rhs = std::make_unique<Expr>(std::move(rhs));
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr parse_unary() {
        if (is_punct("!") || is_punct("+") || is_punct("-")) {
            SourceLocation loc = cur_loc();
            std::string op = take().text;
            Expr e;
            e.kind = ExprKind::Unary;
            e.loc = std::move(loc);
            e.text = std::move(op);
            e.lhs = std::make_unique<Expr>(parse_unary());
            return e;
        }
        return parse_postfix();
    }

    Expr parse_postfix() {
        Expr e = parse_primary();
        while (is_punct(".")) {
            take();
            if (is_punct("<")) {
                std::string type_args = capture_angle_raw();
                Token name = expect_ident();
                if (!is_punct("(")) fail("'(' (explicit type arguments require a call)");
                Expr call;
                call.kind = ExprKind::Call;
                call.loc = loc_of(name);
                call.text = name.text;
                call.type_args_raw = std::move(type_args);
                call.lhs = std::make_unique<Expr>(std::move(e));
                call.args = parse_call_args();
                e = std::move(call);
                continue;
            }
            Token name = expect_ident();
            if (name.text == "class") {
                std::string chain = name_chain_text(e);
                if (chain.empty()) {
                    throw SyntaxError(loc_of(name), "expected a qualified name before '.class'");
                }
                Expr lit;
                lit.kind = ExprKind::ClassLiteral;
                lit.loc = e.loc;
                lit.text = std::move(chain);
                e = std::move(lit);
                continue;
            }
            if (is_punct("(")) {
                Expr call;
                call.kind = ExprKind::Call;
                call.loc = loc_of(name);
                call.text = name.text;
                call.lhs = std::make_unique<Expr>(std::move(e));
                call.args = parse_call_args();
                e = std::move(call);
            } else {
                Expr access;
                access.kind = ExprKind::FieldAccess;
                access.loc = loc_of(name);
                access.text = name.text;
                access.lhs = std::make_unique<Expr>(std::move(e));
                e = std::move(access);
            }
        }
        return e;
    }

    std::vector<Expr> parse_call_args() {
        expect_punct("(");
        std::vector<Expr> args;
        if (accept_punct(")")) return args;
        for (;;) {
            args.push_back(parse_expr());
            if (accept_punct(")")) return args;
            expect_punct(",");
        }
    }

    Expr parse_primary() {
        SourceLocation loc = cur_loc();
        if (cur().kind == TokenKind::Number || cur().kind == TokenKind::String ||
            cur().kind == TokenKind::CharLit) {
            Expr e;
            e.kind = ExprKind::Literal;
            e.loc = std::move(loc);
            e.text = take().text;
            return e;
        }
        if (is_punct("(")) {
            take();
            Expr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (cur().kind == TokenKind::Ident) {
            if (is_ident("this")) {
                take();
                Expr e;
                e.kind = ExprKind::This;
                e.loc = std::move(loc);
                return e;
            }
            if (is_ident("new")) {
                take();
                Expr e;
                e.kind = ExprKind::New;
                e.loc = std::move(loc);
                e.text = parse_typeref_text();
                e.args = parse_call_args();
                return e;
            }
            if (is_ident("true") || is_ident("false") || is_ident("null")) {
                Expr e;
                e.kind = ExprKind::Literal;
                e.loc = std::move(loc);
                e.text = take().text;
                return e;
            }
            Token name = take();
            if (is_punct("(")) {
                Expr call;
                call.kind = ExprKind::Call;
                call.loc = loc_of(name);
                call.text = name.text;
                call.args = parse_call_args();
                return call;
            }
            Expr e;
            e.kind = ExprKind::Name;
            e.loc = loc_of(name);
            e.text = name.text;
            return e;
        }
        fail("an expression");
    }
};

inline CompilationUnit parse_unit(std::string_view source, std::string file) {
    return Parser::parse(source, std::move(file));
}

} // namespace convlint
