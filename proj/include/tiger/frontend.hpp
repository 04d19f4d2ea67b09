#pragma once

// Lexer, parser and pretty-printer.
//
// Lexical rules: identifiers [a-zA-Z][a-zA-Z0-9_]*, decimal integer
// literals (overflow past 2^63-1 is an error), double-quoted strings with
// \n \t \" \\ \^c \ddd escapes, and nesting /* ... */ comments.
//
// Precedence, tightest first: unary minus; * /; + -; comparisons
// (non-associative); &; |. Binary arithmetic and &, | associate left.
// `if`/`while`/`for`/`:=` bodies extend as far right as possible and a
// dangling `else` binds to the nearest `if`.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiger/ast.hpp"
#include "tiger/diagnostic.hpp"

namespace tiger {

enum class TokenKind {
    Eof,
    Id,
    Int,
    String,
    // keywords
    Array,
    Break,
    Do,
    Else,
    End,
    For,
    Function,
    If,
    In,
    Let,
    Nil,
    Of,
    Then,
    To,
    Type,
    Var,
    While,
    // punctuation
    Comma,
    Colon,
    Semicolon,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Dot,
    Plus,
    Minus,
    Times,
    Divide,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Assign,
};

const char* tokenKindName(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string lexeme;
    std::int64_t intValue = 0;  // Int tokens
    std::string text;           // String tokens: decoded payload
    Pos pos;
};

struct LexResult {
    std::vector<Token> tokens;  // always ends with Eof
    Diagnostics diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

LexResult tokenize(std::string_view source);

struct ParseResult {
    std::optional<Exp> program;
    Diagnostics diagnostics;
    bool ok() const { return program.has_value(); }
};

/// Parses a whole program. Reports the first syntax error only.
ParseResult parse(const std::vector<Token>& tokens);

/// tokenize + parse; lexical errors stop before parsing.
ParseResult parseSource(std::string_view source);

/// Canonical source for `program`. Operator expressions are fully
/// parenthesized, so reparsing the output yields a structurally equal tree.
std::string pretty(const Exp& program);

} // namespace tiger
