#pragma once

// Tokenizer and recursive-descent parser for the polynomial syntax:
//
//   expr   := ["+"|"-"] term (("+"|"-") term)*
//   term   := factor (("*" factor) | ("/" INTEGER))*
//   factor := atom ["^" INTEGER]
//   atom   := INTEGER | IDENT | "(" expr ")" | "-" factor
//
// A rational literal such as 5/7 is just 5 divided by 7, which is what the
// printer emits. The tokenizer is shared with the corpus language.

#include "lnd/errors.hpp"
#include "lnd/poly.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lnd {

enum class TokenKind { identifier, integer, symbol, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Splits source into tokens. Identifiers are [A-Za-z_][A-Za-z0-9_]* with an
/// optional trailing prime (a'); "->" is one symbol; '#' starts a comment.
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            if (j < src.size() && src[j] == '\'') ++j;
            t.kind = TokenKind::identifier;
            advance(j - start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = TokenKind::integer;
            advance(j - start);
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            t.kind = TokenKind::symbol;
            advance(2);
        } else if (std::string_view("+-*/^(){}[];,=").find(c) != std::string_view::npos) {
            t.kind = TokenKind::symbol;
            advance(1);
        } else {
            std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7F)
                                    ? "byte " + std::to_string(static_cast<unsigned>(static_cast<unsigned char>(c)))
                                    : std::string("'") + c + "'";
            throw ParseError(line, col, "unexpected character " + shown);
        }
        t.text = std::string(src.substr(start, i - start));
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

/// Cursor over a token vector.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == TokenKind::end; }

    bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokenKind::symbol && t.text == s;
    }
    bool accept(std::string_view s) {
        if (!is_symbol(s)) return false;
        next();
        return true;
    }
    const Token& expect(std::string_view s) {
        if (!is_symbol(s)) fail(peek(), "expected '" + std::string(s) + "'");
        return next();
    }
    const Token& expect_identifier(std::string_view what = "identifier") {
        if (peek().kind != TokenKind::identifier) fail(peek(), "expected " + std::string(what));
        return next();
    }
    const Token& expect_integer() {
        if (peek().kind != TokenKind::integer) fail(peek(), "expected integer");
        return next();
    }

    [[noreturn]] static void fail(const Token& at, const std::string& message) {
        std::string found = at.kind == TokenKind::end ? "end of input" : "'" + at.text + "'";
        throw ParseError(at.line, at.column, message + ", found " + found);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

/// Maps an identifier that is not a ring variable to a value (for named
/// polynomials in corpus files).
using NameResolver = std::function<std::optional<Poly>(std::string_view)>;

inline constexpr unsigned kMaxParsedExponent = 64;
inline constexpr long kMaxExpandedDegree = 256;
inline constexpr unsigned kMaxNesting = 200;
inline constexpr std::size_t kMaxExpandedTerms = 200000;

class PolyParser {
public:
    PolyParser(TokenStream& ts, Vars v, NameResolver resolve = {})
        : ts_(ts), vars_(std::move(v)), resolve_(std::move(resolve)) {}

    Poly expression() {
        Poly acc(vars_);
        bool negate = false;
        if (ts_.accept("+")) {
        } else if (ts_.accept("-")) {
            negate = true;
        }
        acc = term();
        if (negate) acc = -acc;
        while (true) {
            if (ts_.accept("+"))
                acc += term();
            else if (ts_.accept("-"))
                acc -= term();
            else
                break;
        }
        return acc;
    }

private:
    // Number of monomials of degree <= e*deg(base) in the variables of base.
    static double dense_size_bound(const Poly& base, unsigned e) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < base.vars()->size(); ++i)
            if (base.degree_in(i) > 0) ++n;
        double d = static_cast<double>(e) * base.total_degree(), c = 1;
        for (std::size_t k = 1; k <= n; ++k) c = c * (d + static_cast<double>(k)) / static_cast<double>(k);
        return c;
    }

    Poly term() {
        Poly acc = factor();
        while (true) {
            if (ts_.is_symbol("*")) {
                const Token& at = ts_.next();
                Poly rhs = factor();
                if (acc.size() * rhs.size() > kMaxExpandedTerms || acc.total_degree() + rhs.total_degree() > kMaxExpandedDegree)
                    throw ParseError(at.line, at.column, "product expands too far");
                acc *= rhs;
            } else if (ts_.is_symbol("/")) {
                ts_.next();
                const Token& t = ts_.expect_integer();
                Integer d(t.text);
                if (d == 0) throw ParseError(t.line, t.column, "division by zero");
                acc = acc * Rational(Integer(1), d);
            } else {
                break;
            }
        }
        return acc;
    }

    Poly factor() {
        struct Depth {
            unsigned& d;
            explicit Depth(unsigned& d, const Token& at) : d(d) {
                if (++d > kMaxNesting) throw ParseError(at.line, at.column, "expression nested too deeply");
            }
            ~Depth() { --d; }
        } guard(depth_, ts_.peek());
        if (ts_.is_symbol("-")) {
            ts_.next();
            return -factor();
        }
        Poly base = atom();
        if (ts_.is_symbol("^")) {
            ts_.next();
            const Token& t = ts_.expect_integer();
            if (t.text.size() > 3 || std::stoul(t.text) > kMaxParsedExponent)
                throw ParseError(t.line, t.column,
                                 "exponent " + t.text + " exceeds " + std::to_string(kMaxParsedExponent));
            unsigned e = static_cast<unsigned>(std::stoul(t.text));
            if (base.size() > 1 && static_cast<long>(e) * base.total_degree() > kMaxExpandedDegree)
                throw ParseError(t.line, t.column, "power expands beyond degree " + std::to_string(kMaxExpandedDegree));
            if (base.size() > 1 && dense_size_bound(base, e) > kMaxExpandedTerms)
                throw ParseError(t.line, t.column, "power expands to too many terms");
            try {
                base = base.pow(e);
            } catch (const Error& err) {
                throw ParseError(t.line, t.column, err.what());
            }
        }
        return base;
    }

    Poly atom() {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::integer) {
            ts_.next();
            return Poly(vars_, Rational(Integer(t.text)));
        }
        if (t.kind == TokenKind::identifier) {
            ts_.next();
            if (vars_->index_of(t.text)) return Poly::variable(vars_, t.text);
            if (resolve_) {
                if (auto p = resolve_(t.text)) {
                    if (p->vars() == vars_ || p->is_constant()) return p->is_constant() ? Poly(vars_, p->constant_value()) : *p;
                    try {
                        return embed(*p, vars_);
                    } catch (const UnknownVariable&) {
                        throw ParseError(t.line, t.column, "'" + t.text + "' uses variables not allowed here");
                    }
                }
            }
            throw ParseError(t.line, t.column, "unknown variable or name '" + t.text + "'");
        }
        if (ts_.accept("(")) {
            Poly p = expression();
            ts_.expect(")");
            return p;
        }
        TokenStream::fail(t, "expected a number, variable or '('");
    }

    TokenStream& ts_;
    Vars vars_;
    NameResolver resolve_;
    unsigned depth_ = 0;
};

/// Parses a complete polynomial over `v`.
inline Poly parse_poly(std::string_view text, const Vars& v) {
    TokenStream ts(tokenize(text));
    Poly p = PolyParser(ts, v).expression();
    if (!ts.at_end()) TokenStream::fail(ts.peek(), "unexpected trailing input");
    return p;
}

}  // namespace lnd
