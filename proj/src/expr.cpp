#include "iorep/expr.hpp"

#include <cctype>
#include <vector>

namespace iorep {

namespace {

enum class Tok { Ident, Number, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int col; // 1-based
};

struct Lexer {
    const std::string &s;
    int line;
    int col_offset;
    size_t pos = 0;

    Token next() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        int col = static_cast<int>(pos) + 1 + col_offset;
        if (pos >= s.size()) return {Tok::End, "", col};
        char c = s[pos];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            ++pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            while (pos < s.size() && s[pos] == '\'') ++pos; // derivative names
            return {Tok::Ident, s.substr(start, pos - start), col};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos < s.size() && s[pos] == '.')
                throw ModelError(line, static_cast<int>(pos) + 1 + col_offset,
                                 "decimal literals are not supported; use rationals like 1/2");
            return {Tok::Number, s.substr(start, pos - start), col};
        }
        ++pos;
        switch (c) {
        case '+': return {Tok::Plus, "+", col};
        case '-': return {Tok::Minus, "-", col};
        case '*': return {Tok::Star, "*", col};
        case '/': return {Tok::Slash, "/", col};
        case '^': return {Tok::Caret, "^", col};
        case '(': return {Tok::LParen, "(", col};
        case ')': return {Tok::RParen, ")", col};
        default:
            throw ModelError(line, col, std::string("unexpected character '") + c + "'");
        }
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    const RegistryPtr &reg;
    int line;

    const Token &peek() const { return toks[at]; }
    Token eat() { return toks[at++]; }

    RatFun parse() {
        RatFun e = expr();
        if (peek().kind != Tok::End)
            throw ModelError(line, peek().col, "unexpected token '" + peek().text + "'");
        return e;
    }

    RatFun expr() { // + -
        RatFun acc = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            Token op = eat();
            RatFun rhs = term();
            acc = op.kind == Tok::Plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    RatFun term() { // * /
        RatFun acc = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            Token op = eat();
            RatFun rhs = unary();
            if (op.kind == Tok::Star) {
                acc *= rhs;
            } else {
                if (rhs.is_zero()) throw ModelError(line, op.col, "division by zero");
                acc /= rhs;
            }
        }
        return acc;
    }

    RatFun unary() {
        if (peek().kind == Tok::Minus) {
            eat();
            return -unary();
        }
        if (peek().kind == Tok::Plus) {
            eat();
            return unary();
        }
        return power();
    }

    RatFun power() { // right associative
        RatFun base = atom();
        if (peek().kind == Tok::Caret) {
            Token op = eat();
            bool neg = false;
            if (peek().kind == Tok::Minus) {
                eat();
                neg = true;
            }
            if (peek().kind != Tok::Number)
                throw ModelError(line, peek().col, "exponent must be an integer literal");
            Token e = eat();
            long exp = std::stol(e.text);
            if (neg) exp = -exp;
            if (neg && base.is_zero()) throw ModelError(line, op.col, "division by zero");
            return RatFun::pow(base, exp);
        }
        return base;
    }

    RatFun atom() {
        Token t = eat();
        switch (t.kind) {
        case Tok::Number:
            return RatFun::constant(reg, BigRational(BigInt(t.text)));
        case Tok::Ident: {
            int v = reg->find(t.text);
            if (v < 0) throw ModelError(line, t.col, "undeclared symbol '" + t.text + "'");
            return RatFun::variable(reg, v);
        }
        case Tok::LParen: {
            RatFun e = expr();
            if (peek().kind != Tok::RParen) throw ModelError(line, peek().col, "expected ')'");
            eat();
            return e;
        }
        default:
            throw ModelError(line, t.col, "expected an expression, found '" + t.text + "'");
        }
    }
};

} // namespace

RatFun parse_expression(const std::string &text, const RegistryPtr &reg, int line_no, int col_offset) {
    Lexer lex{text, line_no, col_offset};
    Parser p{{}, 0, reg, line_no};
    for (;;) {
        Token t = lex.next();
        bool end = t.kind == Tok::End;
        p.toks.push_back(std::move(t));
        if (end) break;
    }
    return p.parse();
}

} // namespace iorep
