#include <array>
#include <limits>
#include <utility>

#include "tiger/escape.hpp"
#include "tiger/frontend.hpp"

namespace tiger {
namespace {

constexpr std::array<std::pair<std::string_view, TokenKind>, 17> kKeywords{{
    {"array", TokenKind::Array},
    {"break", TokenKind::Break},
    {"do", TokenKind::Do},
    {"else", TokenKind::Else},
    {"end", TokenKind::End},
    {"for", TokenKind::For},
    {"function", TokenKind::Function},
    {"if", TokenKind::If},
    {"in", TokenKind::In},
    {"let", TokenKind::Let},
    {"nil", TokenKind::Nil},
    {"of", TokenKind::Of},
    {"then", TokenKind::Then},
    {"to", TokenKind::To},
    {"type", TokenKind::Type},
    {"var", TokenKind::Var},
    {"while", TokenKind::While},
}};

bool isAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    LexResult run() {
        LexResult result;
        while (true) {
            skipTrivia(result.diagnostics);
            if (atEnd()) break;
            lexOne(result);
        }
        Token eof;
        eof.kind = TokenKind::Eof;
        eof.pos = lastPos_;
        result.tokens.push_back(std::move(eof));
        return result;
    }

private:
    bool atEnd() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

    char advance() {
        char c = src_[i_++];
        lastPos_ = pos_;
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        return c;
    }

    void skipTrivia(Diagnostics& diags) {
        while (!atEnd()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
                advance();
            } else if (c == '/' && peek(1) == '*') {
                Pos start = pos_;
                advance();
                advance();
                int depth = 1;
                while (depth > 0 && !atEnd()) {
                    if (peek() == '/' && peek(1) == '*') {
                        advance();
                        advance();
                        ++depth;
                    } else if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        --depth;
                    } else {
                        advance();
                    }
                }
                if (depth > 0) diags.push_back({start, "UNTERMINATED_COMMENT", "unterminated comment"});
            } else {
                return;
            }
        }
    }

    void push(LexResult& r, TokenKind kind, Pos pos, std::size_t begin) {
        Token t;
        t.kind = kind;
        t.pos = pos;
        t.lexeme = std::string(src_.substr(begin, i_ - begin));
        r.tokens.push_back(std::move(t));
    }

    void lexOne(LexResult& r) {
        Pos start = pos_;
        std::size_t begin = i_;
        char c = advance();

        if (isAlpha(c)) {
            while (isAlpha(peek()) || isDigit(peek()) || peek() == '_') advance();
            std::string_view word = src_.substr(begin, i_ - begin);
            TokenKind kind = TokenKind::Id;
            for (auto [kw, k] : kKeywords) {
                if (kw == word) kind = k;
            }
            push(r, kind, start, begin);
            return;
        }
        if (isDigit(c)) {
            constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
            std::int64_t value = c - '0';
            bool overflow = false;
            while (isDigit(peek())) {
                int d = advance() - '0';
                if (value > (kMax - d) / 10) overflow = true;
                if (!overflow) value = value * 10 + d;
            }
            if (overflow) {
                r.diagnostics.push_back({start, "INT_OVERFLOW", "integer literal exceeds 9223372036854775807"});
                return;
            }
            push(r, TokenKind::Int, start, begin);
            r.tokens.back().intValue = value;
            return;
        }
        if (c == '"') {
            lexString(r, start, begin);
            return;
        }

        TokenKind kind;
        switch (c) {
        case ',': kind = TokenKind::Comma; break;
        case ';': kind = TokenKind::Semicolon; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '[': kind = TokenKind::LBracket; break;
        case ']': kind = TokenKind::RBracket; break;
        case '{': kind = TokenKind::LBrace; break;
        case '}': kind = TokenKind::RBrace; break;
        case '.': kind = TokenKind::Dot; break;
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        case '*': kind = TokenKind::Times; break;
        case '/': kind = TokenKind::Divide; break;
        case '=': kind = TokenKind::Eq; break;
        case '&': kind = TokenKind::And; break;
        case '|': kind = TokenKind::Or; break;
        case ':':
            kind = TokenKind::Colon;
            if (peek() == '=') {
                advance();
                kind = TokenKind::Assign;
            }
            break;
        case '<':
            kind = TokenKind::Lt;
            if (peek() == '>') {
                advance();
                kind = TokenKind::Ne;
            } else if (peek() == '=') {
                advance();
                kind = TokenKind::Le;
            }
            break;
        case '>':
            kind = TokenKind::Gt;
            if (peek() == '=') {
                advance();
                kind = TokenKind::Ge;
            }
            break;
        default: {
            std::string shown = (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f)
                                     ? std::string("'") + c + "'"
                                     : "byte " + std::to_string(static_cast<unsigned char>(c));
            r.diagnostics.push_back({start, "ILLEGAL_CHAR", "illegal character " + shown});
            return;
        }
        }
        push(r, kind, start, begin);
    }

    void lexString(LexResult& r, Pos start, std::size_t begin) {
        std::string payload;
        bool bad = false;
        while (true) {
            if (atEnd()) {
                r.diagnostics.push_back({start, "UNTERMINATED_STRING", "unterminated string literal"});
                return;
            }
            Pos here = pos_;
            char c = advance();
            if (c == '"') break;
            if (c != '\\') {
                payload += c;
                continue;
            }
            auto esc = decodeEscape(src_.substr(i_));
            if (!esc) {
                if (!bad) r.diagnostics.push_back({here, "BAD_ESCAPE", "invalid escape sequence in string"});
                bad = true;
                continue;
            }
            for (std::size_t k = 0; k < esc->length; ++k) advance();
            payload += esc->byte;
        }
        if (bad) return;
        push(r, TokenKind::String, start, begin);
        r.tokens.back().text = std::move(payload);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Pos pos_{1, 1};
    Pos lastPos_{1, 1};  // position of the most recently consumed character
};

} // namespace

const char* tokenKindName(TokenKind kind) {
    switch (kind) {
    case TokenKind::Eof: return "end of input";
    case TokenKind::Id: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::Array: return "'array'";
    case TokenKind::Break: return "'break'";
    case TokenKind::Do: return "'do'";
    case TokenKind::Else: return "'else'";
    case TokenKind::End: return "'end'";
    case TokenKind::For: return "'for'";
    case TokenKind::Function: return "'function'";
    case TokenKind::If: return "'if'";
    case TokenKind::In: return "'in'";
    case TokenKind::Let: return "'let'";
    case TokenKind::Nil: return "'nil'";
    case TokenKind::Of: return "'of'";
    case TokenKind::Then: return "'then'";
    case TokenKind::To: return "'to'";
    case TokenKind::Type: return "'type'";
    case TokenKind::Var: return "'var'";
    case TokenKind::While: return "'while'";
    case TokenKind::Comma: return "','";
    case TokenKind::Colon: return "':'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Times: return "'*'";
    case TokenKind::Divide: return "'/'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Ne: return "'<>'";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::And: return "'&'";
    case TokenKind::Or: return "'|'";
    case TokenKind::Assign: return "':='";
    }
    return "?";
}

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

} // namespace tiger
