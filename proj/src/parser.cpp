#include <stdexcept>
#include <utility>

#include "tiger/frontend.hpp"

namespace tiger {
namespace {

struct SyntaxError {
    Diagnostic diag;
};

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    Exp program() {
        Exp e = exp();
        if (peek().kind != TokenKind::Eof) unexpected("end of input");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(TokenKind k) const { return peek().kind == k; }

    const Token& advance() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    bool accept(TokenKind k) {
        if (!at(k)) return false;
        advance();
        return true;
    }

    [[noreturn]] void fail(Pos pos, std::string code, std::string message) const {
        throw SyntaxError{{pos, std::move(code), std::move(message)}};
    }

    [[noreturn]] void unexpected(const std::string& expected) const {
        const Token& t = peek();
        std::string found = t.kind == TokenKind::Eof ? "end of input" : "'" + t.lexeme + "'";
        fail(t.pos, "UNEXPECTED_TOKEN", "expected " + expected + " but found " + found);
    }

    const Token& expect(TokenKind k) {
        if (!at(k)) unexpected(tokenKindName(k));
        return advance();
    }

    Symbol ident() { return intern(expect(TokenKind::Id).lexeme); }

    // ---- expressions -----------------------------------------------------

    Exp exp() { return disjunction(); }

    Exp binary(Exp left, Pos pos, Oper op, Exp right) {
        return Exp{pos, OpExp{std::move(left), op, std::move(right)}};
    }

    Exp disjunction() {
        Exp left = conjunction();
        while (at(TokenKind::Or)) {
            Pos p = advance().pos;
            left = binary(std::move(left), p, Oper::Or, conjunction());
        }
        return left;
    }

    Exp conjunction() {
        Exp left = comparison();
        while (at(TokenKind::And)) {
            Pos p = advance().pos;
            left = binary(std::move(left), p, Oper::And, comparison());
        }
        return left;
    }

    static std::optional<Oper> comparisonOper(TokenKind k) {
        switch (k) {
        case TokenKind::Eq: return Oper::Eq;
        case TokenKind::Ne: return Oper::Ne;
        case TokenKind::Lt: return Oper::Lt;
        case TokenKind::Le: return Oper::Le;
        case TokenKind::Gt: return Oper::Gt;
        case TokenKind::Ge: return Oper::Ge;
        default: return std::nullopt;
        }
    }

    Exp comparison() {
        Exp left = additive();
        auto op = comparisonOper(peek().kind);
        if (!op) return left;
        Pos p = advance().pos;
        Exp result = binary(std::move(left), p, *op, additive());
        if (comparisonOper(peek().kind)) {
            fail(peek().pos, "NONASSOC_COMPARISON", "comparison operators do not associate; add parentheses");
        }
        return result;
    }

    Exp additive() {
        Exp left = multiplicative();
        while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
            Oper op = at(TokenKind::Plus) ? Oper::Plus : Oper::Minus;
            Pos p = advance().pos;
            left = binary(std::move(left), p, op, multiplicative());
        }
        return left;
    }

    Exp multiplicative() {
        Exp left = unary();
        while (at(TokenKind::Times) || at(TokenKind::Divide)) {
            Oper op = at(TokenKind::Times) ? Oper::Times : Oper::Divide;
            Pos p = advance().pos;
            left = binary(std::move(left), p, op, unary());
        }
        return left;
    }

    Exp unary() {
        if (at(TokenKind::Minus)) {
            Pos p = advance().pos;
            return Exp{p, NegExp{unary()}};
        }
        return primary();
    }

    Exp primary() {
        const Token& t = peek();
        Pos p = t.pos;
        switch (t.kind) {
        case TokenKind::Int: advance(); return Exp{p, IntLit{t.intValue}};
        case TokenKind::String: advance(); return Exp{p, StrLit{t.text}};
        case TokenKind::Nil: advance(); return Exp{p, NilLit{}};
        case TokenKind::Break: advance(); return Exp{p, BreakExp{}};
        case TokenKind::LParen: return parenthesized();
        case TokenKind::Id: return identifierForm();
        case TokenKind::If: {
            advance();
            Exp test = exp();
            expect(TokenKind::Then);
            Exp then = exp();
            if (accept(TokenKind::Else)) {
                Exp otherwise = exp();
                return Exp{p, IfElseExp{std::move(test), std::move(then), std::move(otherwise)}};
            }
            return Exp{p, IfExp{std::move(test), std::move(then)}};
        }
        case TokenKind::While: {
            advance();
            Exp test = exp();
            expect(TokenKind::Do);
            return Exp{p, WhileExp{std::move(test), exp()}};
        }
        case TokenKind::For: {
            advance();
            Symbol var = ident();
            expect(TokenKind::Assign);
            Exp lo = exp();
            expect(TokenKind::To);
            Exp hi = exp();
            expect(TokenKind::Do);
            return Exp{p, ForExp{var, std::move(lo), std::move(hi), exp()}};
        }
        case TokenKind::Let: return let();
        default: unexpected("an expression");
        }
    }

    // `( )` is the empty sequence; `( e )` is just e.
    Exp parenthesized() {
        Pos p = expect(TokenKind::LParen).pos;
        std::vector<Exp> exps;
        if (!at(TokenKind::RParen)) {
            exps.push_back(exp());
            while (accept(TokenKind::Semicolon)) exps.push_back(exp());
        }
        expect(TokenKind::RParen);
        if (exps.size() == 1) return std::move(exps.front());
        return Exp{p, SeqExp{std::move(exps)}};
    }

    Exp identifierForm() {
        const Token& idTok = advance();
        Pos p = idTok.pos;
        Symbol name = intern(idTok.lexeme);

        if (at(TokenKind::LParen)) {
            advance();
            std::vector<Exp> args;
            if (!at(TokenKind::RParen)) {
                args.push_back(exp());
                while (accept(TokenKind::Comma)) args.push_back(exp());
            }
            expect(TokenKind::RParen);
            return Exp{p, CallExp{name, std::move(args)}};
        }
        if (at(TokenKind::LBrace)) {
            advance();
            std::vector<FieldInit> fields;
            if (!at(TokenKind::RBrace)) {
                do {
                    Pos fp = peek().pos;
                    Symbol field = ident();
                    expect(TokenKind::Eq);
                    fields.push_back(FieldInit{field, exp(), fp});
                } while (accept(TokenKind::Comma));
            }
            expect(TokenKind::RBrace);
            return Exp{p, RecordExp{name, std::move(fields)}};
        }

        LValue var{p, SimpleVar{name}};
        if (at(TokenKind::LBracket)) {
            Pos bp = advance().pos;
            Exp index = exp();
            expect(TokenKind::RBracket);
            if (accept(TokenKind::Of)) {
                return Exp{p, ArrayExp{name, std::move(index), exp()}};
            }
            var = LValue{bp, SubscriptVar{std::move(var), std::move(index)}};
        }
        while (true) {
            if (at(TokenKind::Dot)) {
                advance();
                Pos fp = peek().pos;
                Symbol field = ident();
                var = LValue{fp, FieldVar{std::move(var), field}};
            } else if (at(TokenKind::LBracket)) {
                Pos bp = advance().pos;
                Exp index = exp();
                expect(TokenKind::RBracket);
                var = LValue{bp, SubscriptVar{std::move(var), std::move(index)}};
            } else {
                break;
            }
        }
        if (at(TokenKind::Assign)) {
            Pos ap = advance().pos;
            return Exp{ap, AssignExp{std::move(var), exp()}};
        }
        Pos vp = var.pos;
        return Exp{vp, VarExp{std::move(var)}};
    }

    Exp let() {
        Pos p = expect(TokenKind::Let).pos;
        std::vector<Decl> decls;
        while (!at(TokenKind::In)) decls.push_back(decl());
        advance();
        std::vector<Exp> body;
        if (!at(TokenKind::End)) {
            body.push_back(exp());
            while (accept(TokenKind::Semicolon)) body.push_back(exp());
        }
        expect(TokenKind::End);
        return Exp{p, LetExp{std::move(decls), std::move(body)}};
    }

    // ---- declarations ----------------------------------------------------

    std::vector<Field> fieldList(TokenKind close) {
        std::vector<Field> fields;
        if (at(close)) return fields;
        do {
            Pos fp = peek().pos;
            Symbol name = ident();
            expect(TokenKind::Colon);
            Symbol type = ident();
            fields.push_back(Field{name, type, fp});
        } while (accept(TokenKind::Comma));
        return fields;
    }

    TypeSpec typeSpec() {
        Pos p = peek().pos;
        if (at(TokenKind::Id)) return TypeSpec{p, NameTy{ident()}};
        if (accept(TokenKind::LBrace)) {
            auto fields = fieldList(TokenKind::RBrace);
            expect(TokenKind::RBrace);
            return TypeSpec{p, RecordTy{std::move(fields)}};
        }
        if (accept(TokenKind::Array)) {
            expect(TokenKind::Of);
            return TypeSpec{p, ArrayTy{ident()}};
        }
        unexpected("a type");
    }

    Decl decl() {
        const Token& t = peek();
        Pos p = t.pos;
        switch (t.kind) {
        case TokenKind::Type: {
            advance();
            Symbol name = ident();
            expect(TokenKind::Eq);
            return Decl{p, TypeDecl{name, typeSpec()}};
        }
        case TokenKind::Var: {
            advance();
            Symbol name = ident();
            std::optional<Symbol> type;
            if (accept(TokenKind::Colon)) type = ident();
            expect(TokenKind::Assign);
            return Decl{p, VarDecl{name, type, exp()}};
        }
        case TokenKind::Function: {
            advance();
            Symbol name = ident();
            expect(TokenKind::LParen);
            auto params = fieldList(TokenKind::RParen);
            expect(TokenKind::RParen);
            std::optional<Symbol> result;
            if (accept(TokenKind::Colon)) result = ident();
            expect(TokenKind::Eq);
            return Decl{p, FunDecl{name, std::move(params), result, exp()}};
        }
        default: {
            std::string found = t.kind == TokenKind::Eof ? "end of input" : "'" + t.lexeme + "'";
            fail(p, "BAD_DECL", "expected a declaration ('type', 'var' or 'function') or 'in' but found " + found);
        }
        }
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
};

} // namespace

ParseResult parse(const std::vector<Token>& tokens) {
    ParseResult result;
    if (tokens.empty()) {
        result.diagnostics.push_back({Pos{}, "UNEXPECTED_TOKEN", "no tokens"});
        return result;
    }
    try {
        result.program = Parser(tokens).program();
    } catch (const SyntaxError& e) {
        result.diagnostics.push_back(e.diag);
    }
    return result;
}

ParseResult parseSource(std::string_view source) {
    LexResult lexed = tokenize(source);
    if (!lexed.ok()) return ParseResult{std::nullopt, std::move(lexed.diagnostics)};
    return parse(lexed.tokens);
}

} // namespace tiger
