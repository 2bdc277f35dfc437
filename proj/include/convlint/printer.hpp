#pragma once

#include <sstream>
#include <string>

#include "convlint/ast.hpp"

namespace convlint {

/// Layout-normalizing serializer for parsed units. Its purpose is testing:
/// printing a unit and reparsing the output must reproduce the same tree.
/// Modifiers, field initializers and return types are not part of the tree,
/// so the output uses `void` for every non-constructor method and omits the
/// rest.
class Printer {
public:
    static std::string print(const CompilationUnit& unit) {
        Printer p;
        p.unit(unit);
        return std::move(p.out_).str();
    }

private:
    std::ostringstream out_;

    void indent(int depth) {
        for (int i = 0; i < depth; ++i) out_ << "    ";
    }

    void doc_block(const std::string& text, int depth) {
        // One `* ` gutter per line; the parser's gutter stripping inverts
        // this exactly, so arbitrary template text survives a round trip.
        indent(depth);
        out_ << "/**\n";
        std::size_t pos = 0;
        for (;;) {
            std::size_t nl = text.find('\n', pos);
            indent(depth);
            out_ << " * " << text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos)
                 << "\n";
            if (nl == std::string::npos) break;
            pos = nl + 1;
        }
        indent(depth);
        out_ << " */\n";
    }

    void unit(const CompilationUnit& u) {
        out_ << "package " << u.package_name << ";\n";
        for (const ImportDecl& imp : u.imports) {
            out_ << "import " << (imp.is_static ? "static " : "") << imp.qname
                 << (imp.is_wildcard ? ".*" : "") << ";\n";
        }
        for (const TypeDecl& t : u.types) {
            out_ << "\n";
            type(t);
        }
    }

    void type(const TypeDecl& t) {
        if (t.doc_template) doc_block(*t.doc_template, 0);
        for (const std::string& a : t.annotations) out_ << "@" << a << "\n";
        out_ << "class " << t.name;
        if (t.extends_name) out_ << " extends " << *t.extends_name;
        out_ << " {\n";
        for (const FieldDecl& f : t.fields) {
            indent(1);
            out_ << f.type_text << " " << f.name << ";\n";
        }
        for (const MethodDecl& m : t.methods) method(m);
        out_ << "}\n";
    }

    void method(const MethodDecl& m) {
        if (m.doc_template) doc_block(*m.doc_template, 1);
        for (const std::string& a : m.annotations) {
            indent(1);
            out_ << "@" << a << "\n";
        }
        indent(1);
        if (!m.is_constructor) out_ << "void ";
        out_ << m.name << "(";
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (i) out_ << ", ";
            const Param& p = m.params[i];
            for (const std::string& a : p.annotations) out_ << "@" << a << " ";
            out_ << p.type_text << (p.is_variadic ? "... " : " ") << p.name;
        }
        out_ << ")";
        for (std::size_t i = 0; i < m.throws_list.size(); ++i) {
            out_ << (i ? ", " : " throws ") << m.throws_list[i];
        }
        if (!m.body) {
            out_ << ";\n";
            return;
        }
        out_ << " {\n";
        for (const Stmt& s : *m.body) stmt(s, 2);
        indent(1);
        out_ << "}\n";
    }

    void block(const std::vector<Stmt>& body, int depth) {
        out_ << "{\n";
        for (const Stmt& s : body) stmt(s, depth + 1);
        indent(depth);
        out_ << "}";
    }

    void stmt(const Stmt& s, int depth) {
        indent(depth);
        switch (s.kind) {
        case StmtKind::Assign:
            expr(*s.lvalue);
            out_ << " = ";
            expr(*s.expr);
            out_ << ";\n";
            break;
        case StmtKind::ExprStmt:
            expr(*s.expr);
            out_ << ";\n";
            break;
        case StmtKind::Throw:
            out_ << "throw ";
            expr(*s.expr);
            out_ << ";\n";
            break;
        case StmtKind::Return:
            out_ << "return";
            if (s.expr) {
                out_ << " ";
                expr(*s.expr);
            }
            out_ << ";\n";
            break;
        case StmtKind::If:
            out_ << "if (";
            expr(*s.expr);
            out_ << ") ";
            block(s.then_branch, depth);
            if (s.has_else) {
                out_ << " else ";
                block(s.else_branch, depth);
            }
            out_ << "\n";
            break;
        case StmtKind::Try:
            out_ << "try ";
            block(s.body, depth);
            for (const CatchClause& c : s.catches) {
                out_ << " catch (" << c.exc_type_text << " " << c.var_name << ") ";
                block(c.body, depth);
            }
            out_ << "\n";
            break;
        case StmtKind::LocalVar:
            out_ << s.type_text << " " << s.name;
            if (s.expr) {
                out_ << " = ";
                expr(*s.expr);
            }
            out_ << ";\n";
            break;
        case StmtKind::For:
            out_ << "for (" << s.header_raw << ") ";
            block(s.body, depth);
            out_ << "\n";
            break;
        case StmtKind::Block:
            block(s.body, depth);
            out_ << "\n";
            break;
        }
    }

    /// Operands that would re-associate differently without brackets are
    /// always bracketed; a receiver that is not a postfix-chain head is too.
    static bool needs_parens_as_operand(const Expr& e) {
        return e.kind == ExprKind::Binary || e.kind == ExprKind::Unary;
    }

    void operand(const Expr& e) {
        if (needs_parens_as_operand(e)) {
            out_ << "(";
            expr(e);
            out_ << ")";
        } else {
            expr(e);
        }
    }

    void expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Name:
        case ExprKind::Literal:
            out_ << e.text;
            break;
        case ExprKind::This:
            out_ << "this";
            break;
        case ExprKind::FieldAccess:
            operand(*e.lhs);
            out_ << "." << e.text;
            break;
        case ExprKind::Call:
            if (e.lhs) {
                operand(*e.lhs);
                out_ << ".";
                out_ << e.type_args_raw; // empty unless explicitly written
            }
            out_ << e.text << "(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out_ << ", ";
                expr(e.args[i]);
            }
            out_ << ")";
            break;
        case ExprKind::New:
            out_ << "new " << e.text << "(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out_ << ", ";
                expr(e.args[i]);
            }
            out_ << ")";
            break;
        case ExprKind::Unary:
            out_ << e.text;
            operand(*e.lhs);
            break;
        case ExprKind::Binary:
            operand(*e.lhs);
            out_ << " " << e.text << " ";
            operand(*e.rhs);
            break;
        case ExprKind::ClassLiteral:
            out_ << e.text << ".class";
            break;
        }
    }
};

inline std::string print_unit(const CompilationUnit& unit) { return Printer::print(unit); }

} // namespace convlint
