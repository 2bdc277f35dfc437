#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "convlint/source_location.hpp"

namespace convlint {

enum class TokenKind {
    Ident,
    Number,
    String,
    CharLit,
    Punct,
    Doc,   // documentation comment; text holds the content between /** and */
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    int line = 1;
    int col = 1;
    // Byte offsets into the original source, [begin, end). Used to slice
    // raw source fragments (for-headers, generic argument lists) verbatim.
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Thrown on any lexical or syntactic error. `expected` is a short
/// human-readable description of what would have been legal.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourceLocation loc, std::string expected)
        : std::runtime_error(expected + " at " + loc.file + ":" + std::to_string(loc.line) +
                             ":" + std::to_string(loc.column)),
          location(std::move(loc)),
          expected(std::move(expected)) {}

    SourceLocation location;
    std::string expected;
};

namespace detail {

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

inline bool is_ident_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

} // namespace detail

class Lexer {
public:
    Lexer(std::string_view source, std::string file)
        : src_(source), file_(std::move(file)) {}

    /// Tokenizes the whole input. The result always ends with an End token.
    std::vector<Token> tokenize() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            bool done = t.kind == TokenKind::End;
            out.push_back(std::move(t));
            if (done) break;
        }
        return out;
    }

private:
    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError({file_, line_, col_}, expected);
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*' && !(peek(2) == '*' && peek(3) != '/')) {
                // Ordinary block comment. Note that "/**/" is an empty
                // ordinary comment, not a documentation comment.
                skip_block_comment();
            } else {
                return;
            }
        }
    }

    void skip_block_comment() {
        SourceLocation open{file_, line_, col_};
        advance();
        advance();
        for (;;) {
            if (pos_ >= src_.size()) throw SyntaxError(open, "unterminated comment");
            if (peek() == '*' && peek(1) == '/') {
                advance();
                advance();
                return;
            }
            advance();
        }
    }

    Token next() {
        skip_trivia();
        Token t;
        t.line = line_;
        t.col = col_;
        t.begin = pos_;
        if (pos_ >= src_.size()) {
            t.kind = TokenKind::End;
            t.end = pos_;
            return t;
        }
        char c = peek();
        if (c == '/' && peek(1) == '*' && peek(2) == '*') {
            lex_doc(t);
            return t;
        }
        if (detail::is_ident_start(c)) {
            while (pos_ < src_.size() && detail::is_ident_part(peek())) advance();
            t.kind = TokenKind::Ident;
            t.text = std::string(src_.substr(t.begin, pos_ - t.begin));
            t.end = pos_;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() &&
                   (detail::is_ident_part(peek()) || peek() == '.')) {
                // Accept a liberal numeric lexeme (digits, dots, suffixes,
                // hex letters); the grammar never inspects its spelling.
                if (peek() == '.' && !std::isalnum(static_cast<unsigned char>(peek(1))))
                    break;
                advance();
            }
            t.kind = TokenKind::Number;
            t.text = std::string(src_.substr(t.begin, pos_ - t.begin));
            t.end = pos_;
            return t;
        }
        if (c == '"' || c == '\'') {
            lex_quoted(t, c);
            return t;
        }
        lex_punct(t);
        return t;
    }

    void lex_doc(Token& t) {
        SourceLocation open{file_, line_, col_};
        advance(); // '/'
        advance(); // '*'
        advance(); // '*'
        std::size_t content_begin = pos_;
        for (;;) {
            if (pos_ >= src_.size()) throw SyntaxError(open, "unterminated documentation comment");
            if (peek() == '*' && peek(1) == '/') {
                t.text = std::string(src_.substr(content_begin, pos_ - content_begin));
                advance();
                advance();
                t.kind = TokenKind::Doc;
                t.end = pos_;
                return;
            }
            advance();
        }
    }

    void lex_quoted(Token& t, char quote) {
        SourceLocation open{file_, line_, col_};
        advance();
        for (;;) {
            if (pos_ >= src_.size() || peek() == '\n') {
                throw SyntaxError(open, quote == '"' ? "unterminated string literal"
                                                     : "unterminated character literal");
            }
            char c = advance();
            if (c == '\\') {
                if (pos_ >= src_.size()) throw SyntaxError(open, "unterminated escape sequence");
                advance();
            } else if (c == quote) {
                break;
            }
        }
        t.kind = quote == '"' ? TokenKind::String : TokenKind::CharLit;
        t.text = std::string(src_.substr(t.begin, pos_ - t.begin)); // raw lexeme, quotes included
        t.end = pos_;
    }

    void lex_punct(Token& t) {
        static constexpr std::string_view kTwoChar[] = {"&&", "||", "==", "!=", "<=", ">="};
        if (peek() == '.' && peek(1) == '.' && peek(2) == '.') {
            advance();
            advance();
            advance();
            t.kind = TokenKind::Punct;
            t.text = "...";
            t.end = pos_;
            return;
        }
        for (std::string_view two : kTwoChar) {
            if (peek() == two[0] && peek(1) == two[1]) {
                advance();
                advance();
                t.kind = TokenKind::Punct;
                t.text = std::string(two);
                t.end = pos_;
                return;
            }
        }
        static constexpr std::string_view kSingles = ".,;(){}[]<>=!+-*@:?/%&|^~";
        char c = peek();
        if (kSingles.find(c) != std::string_view::npos) {
            advance();
            t.kind = TokenKind::Punct;
            t.text = std::string(1, c);
            t.end = pos_;
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace convlint
