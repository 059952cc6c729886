#pragma once

// Corpus files: definitions and check directives.
//
//   file  := item*
//   item  := def | "check" IDENT "(" [arg ("," arg)*] ")"
//   def   := ("poly" | "unipoly" | "divisor") NAME "=" expr
//          | ("derivation" | "automorphism") NAME "{" VAR "->" expr (";" VAR "->" expr)* "}"
//          | "automorphism" NAME "=" ("compose" "(" NAME "," NAME ")" | "exp" "(" NAME ")")
//          | "planeaut" NAME "{" ("y" | "z") "->" expr ... "}"
//          | "context" NAME "{" "P" "=" expr [";" "d" "=" expr] [";" "deg_max" "=" INTEGER] "}"
//          | "law" NAME "{" "mu" "=" ints ";" "rho1" "=" ints ";" "rho2" "=" ints [";" "nu" "=" ints] ";" "a'" "=" expr "}"
//          | "gelem" NAME "=" "(" rational ("," rational)* ";" expr ";" expr ")"
//          | "nelem" NAME "=" "n" "(" expr "," expr ")"
//   arg   := [IDENT "="] value
//   value := NAME | KEYWORD | "[" [value ("," value)*] "]" | "n" "(" expr "," expr ")" | expr
//
// Polynomials are parsed over (x, y, z, P) and checked against the variables
// each slot allows. Names of poly, unipoly and divisor definitions may be
// used inside expressions.

#include "lnd/groupmodel.hpp"
#include "lnd/parse.hpp"
#include "lnd/quotient_geometry.hpp"
#include "lnd/random.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lnd::corpus {

inline Vars universal_vars() { return vars({"x", "y", "z", "P"}); }

enum class Kind { poly, unipoly, divisor, derivation, automorphism, planeaut, context, law, gelem, nelem };

inline std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::poly: return "poly";
        case Kind::unipoly: return "unipoly";
        case Kind::divisor: return "divisor";
        case Kind::derivation: return "derivation";
        case Kind::automorphism: return "automorphism";
        case Kind::planeaut: return "planeaut";
        case Kind::context: return "context";
        case Kind::law: return "law";
        case Kind::gelem: return "gelem";
        case Kind::nelem: return "nelem";
    }
    return "?";
}

struct Definition {
    enum class Form { images, compose, exp };

    Kind kind = Kind::poly;
    std::string name;
    std::size_t line = 0, column = 0;
    std::vector<Poly> polys;  // over universal_vars()
    Form form = Form::images;
    std::vector<std::string> refs;        // compose / exp operands
    std::vector<Rational> torus;          // gelem
    unsigned deg_max = 3;                 // context
    std::vector<std::vector<long>> chars; // law: mu, rho1, rho2[, nu]
};

struct Value {
    enum class Type { name, keyword, expr, list, nelem };

    Type type = Type::expr;
    std::string text;           // name or keyword; for expr, the name when it was a bare reference
    std::vector<Poly> polys;    // expr: one; nelem: two
    std::vector<Value> items;   // list
    std::size_t line = 0, column = 0;
};

struct Arg {
    std::string key;  // empty for positional
    Value value;
};

struct Directive {
    std::string name;
    std::vector<Arg> args;
    std::size_t line = 0, column = 0;
};

using Item = std::variant<Definition, Directive>;

struct CorpusCase {
    std::vector<Item> items;
};

inline const std::set<std::string, std::less<>>& directive_names() {
    static const std::set<std::string, std::less<>> names{
        "exp_log_roundtrip", "one_parameter_group", "standard_decomposition_expect", "plinth_expect",
        "admissible_complement", "ad_identity", "n_group_homomorphism", "sat_instance",
        "irreducibility_criterion", "conjugation_formula", "divisor_symmetry_expect", "lift_H",
        "pres_lemma", "char_commutator", "nonfence_commutator", "fixed_scheme"};
    return names;
}

/// p with the kernel variable P replaced by `value`.
inline Poly substitute_p(const Poly& p, const Poly& value) {
    Vars u = universal_vars();
    return substitute(embed(p, u), std::vector<Poly>{Poly::variable(u, "x"), Poly::variable(u, "y"),
                                                     Poly::variable(u, "z"), embed(value, u)});
}

inline const std::set<std::string, std::less<>>& keywords() {
    static const std::set<std::string, std::less<>> words{"torus", "zero", "nonzero"};
    return words;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view src) : ts_(tokenize(src)) {}

    CorpusCase parse() {
        CorpusCase c;
        while (!ts_.at_end()) {
            const Token& t = ts_.peek();
            if (t.kind != TokenKind::identifier) TokenStream::fail(t, "expected a definition or 'check'");
            if (t.text == "check")
                c.items.emplace_back(directive());
            else
                c.items.emplace_back(definition());
        }
        return c;
    }

private:
    static const std::map<std::string, Kind, std::less<>>& def_keywords() {
        static const std::map<std::string, Kind, std::less<>> m{
            {"poly", Kind::poly},       {"unipoly", Kind::unipoly},           {"divisor", Kind::divisor},
            {"derivation", Kind::derivation}, {"automorphism", Kind::automorphism}, {"planeaut", Kind::planeaut},
            {"context", Kind::context}, {"law", Kind::law},                   {"gelem", Kind::gelem},
            {"nelem", Kind::nelem}};
        return m;
    }

    [[noreturn]] static void fail_at(std::size_t line, std::size_t column, const std::string& msg) {
        throw ParseError(line, column, msg);
    }

    Definition definition() {
        const Token& kw = ts_.next();
        auto it = def_keywords().find(kw.text);
        if (it == def_keywords().end()) fail_at(kw.line, kw.column, "unknown definition keyword '" + kw.text + "'");
        const Token& nt = ts_.expect_identifier("a name");
        Definition d;
        d.kind = it->second;
        d.name = nt.text;
        d.line = nt.line;
        d.column = nt.column;
        check_new_name(nt);
        if (nt.text == "P" && d.kind != Kind::poly) fail_at(nt.line, nt.column, "only a poly may be named P");

        switch (d.kind) {
            case Kind::poly:
                ts_.expect("=");
                // A poly named P gives the kernel variable P its meaning in x, y, z.
                d.polys.push_back(d.name == "P" ? expr({"x", "y", "z"}) : expr({}));
                break;
            case Kind::unipoly:
                ts_.expect("=");
                d.polys.push_back(expr({"z"}));
                break;
            case Kind::divisor: {
                ts_.expect("=");
                const Token& at = ts_.peek();
                d.polys.push_back(expr({"y", "z"}));
                if (d.polys.back().is_zero()) fail_at(at.line, at.column, "div(0) is not a divisor");
                break;
            }
            case Kind::derivation:
                d.polys = image_block({"x", "y", "z"}, false);
                break;
            case Kind::planeaut:
                d.polys = image_block({"y", "z"}, true);
                break;
            case Kind::automorphism:
                if (ts_.accept("=")) {
                    const Token& op = ts_.expect_identifier("'compose' or 'exp'");
                    ts_.expect("(");
                    if (op.text == "compose") {
                        d.form = Definition::Form::compose;
                        d.refs.push_back(reference(Kind::automorphism));
                        ts_.expect(",");
                        d.refs.push_back(reference(Kind::automorphism));
                    } else if (op.text == "exp") {
                        d.form = Definition::Form::exp;
                        d.refs.push_back(reference(Kind::derivation));
                    } else {
                        fail_at(op.line, op.column, "expected 'compose' or 'exp'");
                    }
                    ts_.expect(")");
                } else {
                    d.polys = image_block({"x", "y", "z"}, true);
                }
                break;
            case Kind::context:
                context_block(d);
                break;
            case Kind::law:
                law_block(d);
                break;
            case Kind::gelem:
                ts_.expect("=");
                ts_.expect("(");
                d.torus.push_back(rational());
                while (ts_.accept(",")) d.torus.push_back(rational());
                ts_.expect(";");
                d.polys.push_back(expr({"z"}));
                ts_.expect(";");
                d.polys.push_back(expr({"z", "P"}));
                ts_.expect(")");
                break;
            case Kind::nelem: {
                ts_.expect("=");
                const Token& n = ts_.expect_identifier("'n'");
                if (n.text != "n") fail_at(n.line, n.column, "expected 'n'");
                d.polys = nelem_body();
                break;
            }
        }
        defined_.emplace(d.name, d.kind);
        if (d.kind == Kind::poly || d.kind == Kind::unipoly || d.kind == Kind::divisor)
            poly_values_.emplace(d.name, d.polys.front());
        return d;
    }

    void check_new_name(const Token& nt) {
        static const std::set<std::string, std::less<>> reserved{"x", "y", "z", "n", "check", "compose", "exp"};
        if (reserved.count(nt.text) || keywords().count(nt.text) || def_keywords().count(nt.text))
            fail_at(nt.line, nt.column, "'" + nt.text + "' is reserved and cannot be defined");
        if (defined_.count(nt.text)) fail_at(nt.line, nt.column, "redefinition of '" + nt.text + "'");
    }

    std::string reference(std::optional<Kind> want) {
        const Token& t = ts_.expect_identifier("a name");
        auto it = defined_.find(t.text);
        if (it == defined_.end()) fail_at(t.line, t.column, "undefined name '" + t.text + "'");
        if (want && it->second != *want)
            fail_at(t.line, t.column,
                    "'" + t.text + "' is a " + std::string(kind_name(it->second)) + ", expected " +
                        std::string(kind_name(*want)));
        return t.text;
    }

    Poly expr(std::vector<std::string_view> allowed) {
        const Token& at = ts_.peek();
        std::size_t line = at.line, column = at.column;
        NameResolver resolve = [this](std::string_view n) -> std::optional<Poly> {
            auto it = poly_values_.find(n);
            if (it == poly_values_.end()) {
                if (defined_.count(n)) return std::nullopt;
                return std::nullopt;
            }
            return it->second;
        };
        Poly p = PolyParser(ts_, universal_vars(), resolve).expression();
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), "P") == allowed.end())
            if (auto it = poly_values_.find("P"); it != poly_values_.end()) p = substitute_p(p, it->second);
        if (!allowed.empty() && !p.only_uses(allowed)) {
            std::string names;
            for (auto a : allowed) names += (names.empty() ? "" : ", ") + std::string(a);
            fail_at(line, column, "expression may only use " + names + ": " + to_string(p));
        }
        return p;
    }

    std::vector<Poly> image_block(std::vector<std::string_view> names, bool default_identity) {
        Vars u = universal_vars();
        std::vector<std::optional<Poly>> out(names.size());
        ts_.expect("{");
        do {
            if (ts_.is_symbol("}")) break;
            const Token& v = ts_.expect_identifier("a variable");
            auto pos = std::find(names.begin(), names.end(), v.text);
            if (pos == names.end()) fail_at(v.line, v.column, "'" + v.text + "' is not a coordinate here");
            auto i = static_cast<std::size_t>(pos - names.begin());
            if (out[i]) fail_at(v.line, v.column, "image of '" + v.text + "' given twice");
            ts_.expect("->");
            std::vector<std::string_view> allowed(names.begin(), names.end());
            out[i] = expr(allowed);
        } while (ts_.accept(";"));
        ts_.expect("}");
        std::vector<Poly> polys;
        for (std::size_t i = 0; i < names.size(); ++i)
            polys.push_back(out[i] ? *out[i] : (default_identity ? Poly::variable(u, names[i]) : Poly(u)));
        return polys;
    }

    template <class F>
    void field_block(F&& on_field) {
        ts_.expect("{");
        do {
            if (ts_.is_symbol("}")) break;
            const Token& f = ts_.expect_identifier("a field name");
            ts_.expect("=");
            on_field(f);
        } while (ts_.accept(";"));
        ts_.expect("}");
    }

    void context_block(Definition& d) {
        std::optional<Poly> p, dd;
        std::optional<unsigned> deg;
        field_block([&](const Token& f) {
            if (f.text == "P" && !p) {
                p = expr({"x", "y", "z"});
            } else if (f.text == "d" && !dd) {
                const Token& at = ts_.peek();
                dd = expr({"z"});
                if (dd->is_zero()) fail_at(at.line, at.column, "d must be nonzero");
            } else if (f.text == "deg_max" && !deg) {
                const Token& t = ts_.expect_integer();
                if (t.text.size() > 2 || std::stoul(t.text) > 12 || std::stoul(t.text) == 0)
                    fail_at(t.line, t.column, "deg_max must be between 1 and 12");
                deg = static_cast<unsigned>(std::stoul(t.text));
            } else {
                fail_at(f.line, f.column, "unexpected or repeated context field '" + f.text + "'");
            }
        });
        if (!p) fail_at(d.line, d.column, "context needs a field P");
        d.polys = {*p, dd ? *dd : Poly(universal_vars(), 1)};
        d.deg_max = deg.value_or(3);
    }

    std::vector<long> int_list() {
        std::vector<long> out;
        ts_.expect("[");
        if (!ts_.is_symbol("]")) {
            do {
                bool neg = ts_.accept("-");
                const Token& t = ts_.expect_integer();
                if (t.text.size() > 6) fail_at(t.line, t.column, "character exponent too large");
                long v = std::stol(t.text);
                out.push_back(neg ? -v : v);
            } while (ts_.accept(","));
        }
        ts_.expect("]");
        return out;
    }

    void law_block(Definition& d) {
        std::map<std::string, std::vector<long>> chars;
        std::optional<Poly> a;
        field_block([&](const Token& f) {
            if ((f.text == "mu" || f.text == "rho1" || f.text == "rho2" || f.text == "nu") && !chars.count(f.text)) {
                chars[f.text] = int_list();
            } else if (f.text == "a'" && !a) {
                a = expr({"z"});
            } else {
                fail_at(f.line, f.column, "unexpected or repeated law field '" + f.text + "'");
            }
        });
        for (const char* need : {"mu", "rho1", "rho2"})
            if (!chars.count(need)) fail_at(d.line, d.column, std::string("law needs a field ") + need);
        if (!a) fail_at(d.line, d.column, "law needs a field a'");
        d.chars = {chars["mu"], chars["rho1"], chars["rho2"]};
        if (chars.count("nu")) d.chars.push_back(chars["nu"]);
        d.polys = {*a};
    }

    Rational rational() {
        bool neg = ts_.accept("-");
        const Token& t = ts_.expect_integer();
        Integer num(t.text), den(1);
        if (ts_.accept("/")) {
            const Token& dt = ts_.expect_integer();
            den = Integer(dt.text);
            if (den == 0) fail_at(dt.line, dt.column, "division by zero");
        }
        Rational r(num, den);
        r.canonicalize();
        return neg ? Rational(-r) : r;
    }

    std::vector<Poly> nelem_body() {
        ts_.expect("(");
        Poly h = expr({"z"});
        ts_.expect(",");
        Poly f = expr({"z", "P"});
        ts_.expect(")");
        return {h, f};
    }

    Directive directive() {
        ts_.next();  // check
        const Token& nt = ts_.expect_identifier("a directive name");
        if (!directive_names().count(nt.text)) fail_at(nt.line, nt.column, "unknown directive '" + nt.text + "'");
        Directive d{nt.text, {}, nt.line, nt.column};
        ts_.expect("(");
        if (!ts_.is_symbol(")")) {
            do {
                Arg a;
                if (ts_.peek().kind == TokenKind::identifier && ts_.is_symbol("=", 1)) {
                    const Token& k = ts_.next();
                    ts_.next();
                    for (const auto& other : d.args)
                        if (other.key == k.text) fail_at(k.line, k.column, "argument '" + k.text + "' given twice");
                    a.key = k.text;
                }
                a.value = value();
                d.args.push_back(std::move(a));
            } while (ts_.accept(","));
        }
        ts_.expect(")");
        return d;
    }

    Value value() {
        const Token& t = ts_.peek();
        Value v;
        v.line = t.line;
        v.column = t.column;
        if (ts_.accept("[")) {
            v.type = Value::Type::list;
            if (!ts_.is_symbol("]")) {
                do v.items.push_back(value());
                while (ts_.accept(","));
            }
            ts_.expect("]");
            return v;
        }
        if (t.kind == TokenKind::identifier) {
            std::string text = t.text;
            bool ends_value = ts_.is_symbol(",", 1) || ts_.is_symbol(")", 1) || ts_.is_symbol("]", 1);
            auto it = defined_.find(text);
            if (it != defined_.end() && it->second != Kind::poly && it->second != Kind::unipoly &&
                it->second != Kind::divisor) {
                ts_.next();
                if (!ends_value) TokenStream::fail(ts_.peek(), "expected ',' or ')' after a name");
                v.type = Value::Type::name;
                v.text = text;
                return v;
            }
            if (it == defined_.end() && keywords().count(text) && ends_value) {
                ts_.next();
                v.type = Value::Type::keyword;
                v.text = text;
                return v;
            }
            if (text == "n" && it == defined_.end() && ts_.is_symbol("(", 1)) {
                ts_.next();
                v.type = Value::Type::nelem;
                v.polys = nelem_body();
                return v;
            }
            if (it != defined_.end() && ends_value) v.text = text;
        }
        v.type = Value::Type::expr;
        v.polys.push_back(expr({}));
        return v;
    }

    TokenStream ts_;
    std::map<std::string, Kind, std::less<>> defined_;
    std::map<std::string, Poly, std::less<>> poly_values_;
};

inline CorpusCase parse(std::string_view src) { return Parser(src).parse(); }

// ---------------------------------------------------------------------------
// Printer

namespace detail {

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? std::string(sep) : "") + parts[i];
    return s;
}

inline std::string print_ints(const std::vector<long>& v) {
    std::vector<std::string> parts;
    for (auto x : v) parts.push_back(std::to_string(x));
    return "[" + join(parts, ", ") + "]";
}

}  // namespace detail

inline std::string print(const Value& v) {
    switch (v.type) {
        case Value::Type::name:
        case Value::Type::keyword: return v.text;
        case Value::Type::expr: return v.text.empty() ? to_string(v.polys.front()) : v.text;
        case Value::Type::nelem: return "n(" + to_string(v.polys[0]) + ", " + to_string(v.polys[1]) + ")";
        case Value::Type::list: {
            std::vector<std::string> parts;
            for (const auto& i : v.items) parts.push_back(print(i));
            return "[" + detail::join(parts, ", ") + "]";
        }
    }
    return "";
}

inline std::string print(const Directive& d) {
    std::vector<std::string> parts;
    for (const auto& a : d.args) parts.push_back((a.key.empty() ? "" : a.key + " = ") + print(a.value));
    return d.name + "(" + detail::join(parts, ", ") + ")";
}

inline std::string print(const Definition& d) {
    std::string head = std::string(kind_name(d.kind)) + " " + d.name;
    auto block = [&](std::vector<std::string> names) {
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < names.size(); ++i) parts.push_back(names[i] + " -> " + to_string(d.polys[i]));
        return head + " { " + detail::join(parts, "; ") + " }";
    };
    switch (d.kind) {
        case Kind::poly:
        case Kind::unipoly:
        case Kind::divisor: return head + " = " + to_string(d.polys.front());
        case Kind::derivation: return block({"x", "y", "z"});
        case Kind::planeaut: return block({"y", "z"});
        case Kind::automorphism:
            if (d.form == Definition::Form::compose) return head + " = compose(" + d.refs[0] + ", " + d.refs[1] + ")";
            if (d.form == Definition::Form::exp) return head + " = exp(" + d.refs[0] + ")";
            return block({"x", "y", "z"});
        case Kind::context:
            return head + " { P = " + to_string(d.polys[0]) + "; d = " + to_string(d.polys[1]) +
                   "; deg_max = " + std::to_string(d.deg_max) + " }";
        case Kind::law: {
            std::string s = head + " { mu = " + detail::print_ints(d.chars[0]) + "; rho1 = " +
                            detail::print_ints(d.chars[1]) + "; rho2 = " + detail::print_ints(d.chars[2]);
            if (d.chars.size() > 3) s += "; nu = " + detail::print_ints(d.chars[3]);
            return s + "; a' = " + to_string(d.polys[0]) + " }";
        }
        case Kind::gelem: {
            std::vector<std::string> t;
            for (const auto& c : d.torus) t.push_back(to_string(c));
            return head + " = (" + detail::join(t, ", ") + "; " + to_string(d.polys[0]) + "; " + to_string(d.polys[1]) +
                   ")";
        }
        case Kind::nelem: return head + " = n(" + to_string(d.polys[0]) + ", " + to_string(d.polys[1]) + ")";
    }
    return head;
}

inline std::string print(const CorpusCase& c) {
    std::string out;
    for (const auto& item : c.items) {
        if (const auto* d = std::get_if<Definition>(&item))
            out += print(*d) + "\n";
        else
            out += "check " + print(std::get<Directive>(item)) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Runner

enum class Verdict { pass, fail, error };

inline std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::error: return "ERROR";
    }
    return "?";
}

struct Result {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::string detail;
    std::vector<std::string> witnesses;
};

struct Report {
    std::vector<Result> results;

    std::size_t count(Verdict v) const {
        return static_cast<std::size_t>(
            std::count_if(results.begin(), results.end(), [v](const Result& r) { return r.verdict == v; }));
    }
    bool ok() const { return count(Verdict::fail) == 0 && count(Verdict::error) == 0; }

    std::string render(bool with_witnesses) const {
        std::string out;
        for (const auto& r : results) {
            out += std::string(verdict_name(r.verdict)) + " " + r.name + " — " + r.detail + "\n";
            if (with_witnesses)
                for (const auto& w : r.witnesses) out += "    " + w + "\n";
        }
        out += "summary: " + std::to_string(count(Verdict::pass)) + "/" + std::to_string(count(Verdict::fail)) + "/" +
               std::to_string(count(Verdict::error)) + "\n";
        return out;
    }
};

struct RunOptions {
    std::uint64_t seed = 0;
    unsigned budget = 200;
    unsigned max_budget = 10000;  // ceiling for budget = N arguments
    unsigned deg_max = 3;
    long coef_range = 9;
    std::uint64_t work_limit = 200000000;  // term products per item, 0 = unlimited
};

namespace detail {

struct Object {
    Kind kind = Kind::poly;
    std::string error;  // construction failure
    std::optional<Poly> poly;
    std::optional<Derivation> der;
    std::optional<Automorphism> aut;
    std::shared_ptr<const DeltaContext> ctx;
    std::optional<PlaneDivisor> divisor;
    std::shared_ptr<const GroupLaw> law;
    std::optional<GElem> gelem;
    std::optional<NElem> nelem;
};

inline std::vector<Poly> embed_all(const std::vector<Poly>& ps, const Vars& v) {
    std::vector<Poly> out;
    for (const auto& p : ps) out.push_back(embed(p, v));
    return out;
}

class Env {
public:
    void define(const Definition& d, std::uint64_t work_limit = 0) {
        Object o;
        o.kind = d.kind;
        try {
            WorkLimit limit(work_limit);
            build(d, o);
        } catch (const Error& e) {
            o.error = e.what();
        } catch (const std::exception& e) {
            o.error = std::string("internal: ") + e.what();
        }
        objects_[d.name] = std::move(o);
    }

    const Poly* p_value() const {
        auto it = objects_.find("P");
        return it != objects_.end() && it->second.poly ? &*it->second.poly : nullptr;
    }

    const Object& get(const std::string& name) const {
        auto it = objects_.find(name);
        if (it == objects_.end()) throw PreconditionFailed("undefined name '" + name + "'");
        if (!it->second.error.empty())
            throw PreconditionFailed("definition of '" + name + "' failed: " + it->second.error);
        return it->second;
    }

private:
    void build(const Definition& d, Object& o) {
        Vars amb = ambient_vars();
        switch (d.kind) {
            case Kind::poly:
            case Kind::unipoly: o.poly = d.polys.front(); break;
            case Kind::divisor: o.poly = d.polys.front(); o.divisor.emplace(d.polys.front()); break;
            case Kind::derivation: o.der = Derivation(amb, embed_all(d.polys, amb)); break;
            case Kind::planeaut: o.aut = make_plane_aut(d.polys[0], d.polys[1]); break;
            case Kind::automorphism:
                if (d.form == Definition::Form::compose)
                    o.aut = compose(*get(d.refs[0]).aut, *get(d.refs[1]).aut);
                else if (d.form == Definition::Form::exp)
                    o.aut = exponential(*get(d.refs[0]).der);
                else
                    o.aut = Automorphism::from_images(amb, embed_all(d.polys, amb));
                break;
            case Kind::context:
                o.ctx = std::make_shared<const DeltaContext>(make_context(d.polys[0], d.polys[1], d.deg_max));
                break;
            case Kind::law: {
                std::optional<CharacterVector> nu;
                if (d.chars.size() > 3) nu = CharacterVector{d.chars[3]};
                o.law = std::make_shared<const GroupLaw>(GroupLaw::make(CharacterVector{d.chars[0]}, CharacterVector{d.chars[1]},
                                                                        CharacterVector{d.chars[2]}, nu, d.polys[0]));
                break;
            }
            case Kind::gelem: {
                for (const auto& c : d.torus)
                    if (c == 0) throw PreconditionFailed("torus coordinates must be nonzero");
                Vars kv = kernel_vars();
                o.gelem = GElem{d.torus, embed(d.polys[0], kv), embed(d.polys[1], kv)};
                break;
            }
            case Kind::nelem: o.nelem = make_nelem(d.polys[0], d.polys[1]); break;
        }
    }

    std::map<std::string, Object> objects_;
};

// Typed access to directive arguments.
class Args {
public:
    Args(const Directive& d, const Env& env) : d_(d), env_(env) {
        for (const auto& a : d.args) {
            if (a.key.empty()) {
                if (!keyed_.empty()) throw PreconditionFailed("positional argument after a named one");
                positional_.push_back(&a.value);
            } else {
                keyed_[a.key] = &a.value;
            }
        }
    }

    /// Positional argument i, or the named argument `key`.
    const Value* find(std::size_t i, std::string_view key = {}) const {
        if (i < positional_.size()) return positional_[i];
        if (!key.empty()) {
            auto it = keyed_.find(std::string(key));
            if (it != keyed_.end()) return it->second;
        }
        return nullptr;
    }
    const Value* named(std::string_view key) const {
        auto it = keyed_.find(std::string(key));
        return it == keyed_.end() ? nullptr : it->second;
    }
    const Value& need(std::size_t i, std::string_view what, std::string_view key = {}) const {
        const Value* v = find(i, key);
        if (!v) throw PreconditionFailed("missing argument " + std::string(what));
        return *v;
    }
    const Value& need_named(std::string_view key) const {
        const Value* v = named(key);
        if (!v) throw PreconditionFailed("missing argument " + std::string(key));
        return *v;
    }
    void allow(std::size_t max_positional, std::vector<std::string_view> keys) const {
        if (positional_.size() > max_positional) throw PreconditionFailed("too many positional arguments");
        for (const auto& [k, v] : keyed_)
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                throw PreconditionFailed("unknown argument '" + k + "'");
    }

    const Object& object(const Value& v) const {
        if (v.type == Value::Type::name || (v.type == Value::Type::expr && !v.text.empty())) return env_.get(v.text);
        throw PreconditionFailed("expected a name, got " + print(v));
    }
    Kind kind_of(const Value& v) const { return object(v).kind; }

    Poly poly(const Value& v, const Vars& target) const {
        Poly p;
        if (v.type == Value::Type::expr) {
            p = v.polys.front();
        } else if (v.type == Value::Type::name) {
            const Object& o = object(v);
            if (!o.poly) throw PreconditionFailed("'" + v.text + "' is not a polynomial");
            p = *o.poly;
        } else {
            throw PreconditionFailed("expected a polynomial, got " + print(v));
        }
        if (!target->index_of("P") && p.vars()->index_of("P") && p.degree_in("P") > 0)
            if (const Poly* pv = env_.p_value()) p = substitute_p(p, *pv);
        try {
            return embed(p, target);
        } catch (const UnknownVariable&) {
            std::vector<std::string> names(target->names().begin(), target->names().end());
            throw PreconditionFailed(to_string(p) + " uses variables outside (" + join(names, ", ") + ")");
        }
    }
    long integer(const Value& v) const {
        Poly p = poly(v, universal_vars());
        if (!p.is_constant() || !is_integer(p.constant_value()))
            throw PreconditionFailed("expected an integer, got " + print(v));
        Integer n = p.constant_value().get_num();
        if (!n.fits_slong_p()) throw PreconditionFailed("integer out of range");
        return n.get_si();
    }
    const Derivation& derivation(const Value& v) const {
        const Object& o = object(v);
        if (!o.der) throw PreconditionFailed("'" + v.text + "' is not a derivation");
        return *o.der;
    }
    const Automorphism& automorphism(const Value& v) const {
        const Object& o = object(v);
        if (!o.aut || o.kind == Kind::planeaut) throw PreconditionFailed("'" + v.text + "' is not an automorphism");
        return *o.aut;
    }
    const Automorphism& planeaut(const Value& v) const {
        const Object& o = object(v);
        if (o.kind != Kind::planeaut) throw PreconditionFailed("'" + v.text + "' is not a planeaut");
        return *o.aut;
    }
    const DeltaContext& context(const Value& v) const {
        const Object& o = object(v);
        if (!o.ctx) throw PreconditionFailed("'" + v.text + "' is not a context");
        return *o.ctx;
    }
    const GroupLaw& law(const Value& v) const {
        const Object& o = object(v);
        if (!o.law) throw PreconditionFailed("'" + v.text + "' is not a law");
        return *o.law;
    }
    GElem gelem(const Value& v) const {
        const Object& o = object(v);
        if (!o.gelem) throw PreconditionFailed("'" + v.text + "' is not a gelem");
        return *o.gelem;
    }
    NElem nelem(const Value& v) const {
        if (v.type == Value::Type::nelem) return make_nelem(v.polys[0], v.polys[1]);
        const Object& o = object(v);
        if (!o.nelem) throw PreconditionFailed("'" + v.text + "' is not an nelem");
        return *o.nelem;
    }
    PlaneDivisor divisor(const Value& v) const {
        if (v.type == Value::Type::expr && v.text.empty()) return PlaneDivisor(poly(v, plane_vars()));
        const Object& o = object(v);
        if (!o.poly) throw PreconditionFailed("'" + v.text + "' is not a divisor");
        return PlaneDivisor(embed(*o.poly, plane_vars()));
    }
    std::vector<const Value*> list(const Value& v) const {
        std::vector<const Value*> out;
        if (v.type != Value::Type::list) {
            out.push_back(&v);
            return out;
        }
        for (const auto& i : v.items) out.push_back(&i);
        return out;
    }

private:
    const Directive& d_;
    const Env& env_;
    std::vector<const Value*> positional_;
    std::map<std::string, const Value*> keyed_;
};

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> witnesses;
};

inline bool proportional(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.monic() == b.monic();
}

inline std::string yes(bool b) { return b ? "yes" : "no"; }

inline Outcome first_failure(Outcome o, unsigned checked, std::string what, std::optional<std::string> failure) {
    if (failure) {
        o.pass = false;
        o.detail = "counterexample: " + *failure;
    } else {
        o.detail = std::to_string(checked) + " " + what;
    }
    return o;
}

inline unsigned budget_of(const Args& a, const RunOptions& opt) {
    const Value* b = a.named("budget");
    if (!b) return std::min(opt.budget, opt.max_budget);
    long n = a.integer(*b);
    if (n < 0) throw PreconditionFailed("budget must be non-negative");
    return static_cast<unsigned>(std::min<long>(n, opt.max_budget));
}

// ---- individual directives ------------------------------------------------

inline Outcome run_exp_log(const Args& a) {
    a.allow(1, {});
    const Value& v = a.need(0, "D");
    Outcome o;
    if (a.kind_of(v) == Kind::derivation) {
        const Derivation& d = a.derivation(v);
        Automorphism u = exponential(d);
        Derivation l = logarithm(u);
        bool log_ok = l == d;
        bool exp_ok = exponential(l).images_only() == u.images_only();
        o.pass = log_ok && exp_ok;
        o.detail = "Exp(D) = " + to_string(u) + "; log(Exp D) = D: " + yes(log_ok) + "; Exp(log u) = u: " + yes(exp_ok);
        o.witnesses = {"D = " + to_string(d), "log(Exp D) = " + to_string(l)};
    } else {
        const Automorphism& u = a.automorphism(v);
        Derivation l = logarithm(u);
        Automorphism e = exponential(l);
        bool exp_ok = e.images_only() == u.images_only();
        bool log_ok = logarithm(e) == l;
        o.pass = log_ok && exp_ok;
        o.detail = "log(u) = " + to_string(l) + "; Exp(log u) = u: " + yes(exp_ok) + "; log(Exp D) = D: " + yes(log_ok);
    }
    return o;
}

inline Outcome run_one_parameter(const Args& a, const RunOptions& opt, Rng& rng) {
    a.allow(1, {"budget"});
    const Derivation& d = a.derivation(a.need(0, "D"));
    unsigned budget = budget_of(a, opt);
    std::optional<std::string> failure;
    for (unsigned i = 0; i < budget && !failure; ++i) {
        Rational s = rng.rational(opt.coef_range), t = rng.rational(opt.coef_range);
        Automorphism lhs = compose(exponential(d * s), exponential(d * t));
        Automorphism rhs = exponential(d * Rational(s + t));
        if (!(lhs.images_only() == rhs.images_only()))
            failure = "s = " + to_string(s) + ", t = " + to_string(t) + ": " + to_string(lhs) + " vs " + to_string(rhs);
    }
    return first_failure({}, budget, "pairs (s, t) with Exp(sD) o Exp(tD) = Exp((s+t)D)", failure);
}

inline Outcome run_standard_decomposition(const Args& a) {
    a.allow(1, {"d", "u'"});
    const Value& v = a.need(0, "u");
    Automorphism u = a.kind_of(v) == Kind::derivation ? exponential(a.derivation(v)) : a.automorphism(v);
    StandardDecomposition sd = standard_decomposition(u);
    Outcome o;
    o.detail = "d = " + to_string(sd.d) + ", u' = " + to_string(sd.u_prime);
    if (const Value* dv = a.named("d")) {
        Poly d = a.poly(*dv, ambient_vars());
        if (!proportional(d, sd.d)) {
            o.pass = false;
            o.detail = "expected d = " + to_string(d) + ", found " + o.detail;
            return o;
        }
        if (const Value* uv = a.named("u'")) {
            const Automorphism& up = a.automorphism(*uv);
            bool rebuilt = modification(d, up).images_only() == u.images_only();
            bool irreducible = is_irreducible(logarithm(up));
            if (!rebuilt || !irreducible) {
                o.pass = false;
                o.detail = "expected u' = " + to_string(up) + " does not give u = d*u' with u' irreducible; found " + o.detail;
            }
        }
    } else if (a.named("u'")) {
        throw PreconditionFailed("u' expectation needs d");
    }
    return o;
}

inline Outcome run_plinth(const Args& a, const RunOptions& opt) {
    a.allow(1, {"a", "q", "kernel", "deg_max"});
    const Value& v = a.need(0, "D");
    Derivation d;
    std::vector<Poly> gens;
    unsigned deg = opt.deg_max;
    if (const Value* dm = a.named("deg_max")) deg = static_cast<unsigned>(std::clamp(a.integer(*dm), 1L, 12L));
    if (a.kind_of(v) == Kind::context) {
        const DeltaContext& c = a.context(v);
        d = c.d_prime();
        gens = {Poly::variable(ambient_vars(), "z"), c.p()};
    } else {
        d = a.derivation(v);
        const Value* kv = a.named("kernel");
        if (!kv) throw PreconditionFailed("plinth_expect on a derivation needs kernel = [...]");
        for (const Value* g : a.list(*kv)) gens.push_back(a.poly(*g, ambient_vars()));
    }
    PlinthResult r = plinth_search(d, gens, deg);
    Outcome o;
    o.detail = "Q = " + to_string(r.q) + ", a = " + to_string(r.a);
    if (const Value* av = a.named("a")) {
        Poly expect = a.poly(*av, ambient_vars());
        if (!proportional(expect, r.a)) {
            o.pass = false;
            o.detail = "expected a = " + to_string(expect) + ", witness a = " + to_string(r.a) + " with Q = " + to_string(r.q);
            return o;
        }
    }
    if (const Value* qv = a.named("q")) {
        Poly expect = a.poly(*qv, ambient_vars());
        Poly dq = apply(d, expect);
        if (!proportional(dq, r.a) || dq.is_zero()) {
            o.pass = false;
            o.detail = "expected Q = " + to_string(expect) + " has D(Q) = " + to_string(dq) + ", witness a = " + to_string(r.a);
        }
    }
    return o;
}

inline Outcome run_admissible(const Args& a) {
    a.allow(1, {"E"});
    const DeltaContext& c = a.context(a.need(0, "C"));
    Outcome o;
    bool ep = apply(c.e_der(), c.p()) == -c.a_prime();
    bool comm = lie_bracket(c.d_prime(), c.e_der()).is_zero();
    bool irr = is_irreducible(c.e_der());
    bool cu = commutes(c.e(), c.u());
    bool cup = commutes(c.e(), c.u_prime());
    o.pass = ep && comm && irr && cu && cup;
    o.detail = "Q = " + to_string(c.q()) + ", E = " + to_string(c.e_der()) + "; E(P) = -a': " + yes(ep) +
               ", [D', E] = 0: " + yes(comm) + ", E irreducible: " + yes(irr) + ", e commutes with u and u': " + yes(cu && cup);
    if (const Value* ev = a.named("E")) {
        const Derivation& expect = a.derivation(*ev);
        if (!(expect == c.e_der())) {
            o.pass = false;
            o.detail = "expected E = " + to_string(expect) + ", found " + to_string(c.e_der());
        }
    }
    return o;
}

inline NElem random_nelem(Rng& rng, const RunOptions& opt) {
    Vars kv = kernel_vars();
    return {rng.poly(kv, opt.deg_max, opt.coef_range, {"z"}), rng.poly(kv, opt.deg_max, opt.coef_range)};
}

inline Outcome run_ad_identity(const Args& a, const RunOptions& opt, Rng& rng) {
    a.allow(1, {"q_max", "budget", "n"});
    const DeltaContext& c = a.context(a.need(0, "C"));
    unsigned q_max = a.named("q_max") ? static_cast<unsigned>(std::clamp(a.integer(*a.named("q_max")), 0L, 8L)) : 4;
    unsigned budget = budget_of(a, opt);
    std::vector<NElem> sample;
    if (const Value* nv = a.named("n"))
        for (const Value* e : a.list(*nv)) sample.push_back(a.nelem(*e));
    else
        for (unsigned i = 0; i < budget; ++i) sample.push_back(random_nelem(rng, opt));
    std::optional<std::string> failure;
    for (const auto& n : sample) {
        for (const auto& row : ad_identity_check(c, n.h, n.f, q_max)) {
            if (!row.holds) {
                failure = to_string(n) + ", q = " + std::to_string(row.q) + ": " + to_string(row.lhs) + " vs " + to_string(row.rhs);
                break;
            }
        }
        if (failure) break;
    }
    return first_failure({}, static_cast<unsigned>(sample.size()),
                         "pairs (h, f) with fD' ad(hE)^q = (-1)^q h^q E^q(f) D' for q <= " + std::to_string(q_max), failure);
}

inline Outcome run_n_group(const Args& a, const RunOptions& opt, Rng& rng) {
    a.allow(1, {"budget"});
    const DeltaContext& c = a.context(a.need(0, "C"));
    unsigned budget = budget_of(a, opt);
    std::optional<std::string> failure;
    for (unsigned i = 0; i < budget && !failure; ++i) {
        NElem s = random_nelem(rng, opt), t = random_nelem(rng, opt);
        Automorphism as = n_to_aut(s, c), at = n_to_aut(t, c);
        Automorphism prod = n_to_aut(n_mul(s, t, c), c);
        Automorphism expect = c.order() == CompositionOrder::same ? compose(as, at) : compose(at, as);
        if (!(prod == expect)) {
            failure = "homomorphism fails on " + to_string(s) + ", " + to_string(t);
        } else if (!(aut_to_n(as, c) == s)) {
            failure = "aut_to_n(n_to_aut(n)) != n for " + to_string(s);
        } else if (!commutes(as, c.u()) || !commutes(as, c.u_prime())) {
            failure = "image of " + to_string(s) + " does not commute with u and u'";
        } else {
            Poly g = exp_m_decompose(s, c);
            (void)g;
        }
    }
    Outcome o = first_failure({}, budget, "pairs; homomorphism (" + to_string(c.order()) +
                                              "), aut_to_n o n_to_aut = id, images commute with u and u', Exp(hE + fD') decomposes",
                              failure);
    return o;
}

inline Outcome run_sat(const Args& a) {
    a.allow(3, {"expect"});
    const Derivation& b = a.derivation(a.need(0, "B"));
    const Derivation& f_der = a.derivation(a.need(1, "F"));
    Poly f = a.poly(a.need(2, "f"), ambient_vars());
    SatReport r = sat_instance_check(b, f_der, f);
    Outcome o;
    o.pass = r.identity_holds && r.conclusion_holds;
    if (r.bracket_zero)
        o.detail = "[fF, B] = 0; B(f) = " + to_string(r.b_of_f) + ", [F, B] = " + to_string(r.f_bracket_b);
    else
        o.detail = "obstruction [fF, B] = " + to_string(r.bracket) + "; identity [fF, B] = f[F, B] - B(f)F: " + yes(r.identity_holds);
    if (const Value* e = a.named("expect")) {
        if (e->type != Value::Type::keyword || (e->text != "zero" && e->text != "nonzero"))
            throw PreconditionFailed("expect must be zero or nonzero");
        if ((e->text == "zero") != r.bracket_zero) {
            o.pass = false;
            o.detail = "expected a " + e->text + " bracket; " + o.detail;
        }
    }
    return o;
}

inline Outcome run_irreducibility(const Args& a, const RunOptions& opt, Rng& rng) {
    a.allow(2, {"n", "budget"});
    const DeltaContext& c = a.context(a.need(0, "C"));
    std::vector<NElem> sample;
    if (const Value* nv = a.find(1, "n")) {
        for (const Value* e : a.list(*nv)) sample.push_back(a.nelem(*e));
    } else {
        unsigned budget = budget_of(a, opt);
        while (sample.size() < budget) {
            NElem n = random_nelem(rng, opt);
            if (!n.h.is_zero() || !n.f.is_zero()) sample.push_back(n);
        }
    }
    Outcome o;
    std::optional<std::string> failure;
    for (const auto& n : sample) {
        CriterionReport r = irreducibility_criterion_check(c, n);
        o.witnesses.push_back(to_string(n) + ": gcd(h, f) = " + to_string(r.gcd_hf) + ", content = " + to_string(r.content));
        if (!r.holds || !r.content_predicted || !r.stripped) {
            failure = to_string(n) + ": gcd(h, f) = " + to_string(r.gcd_hf) + ", content = " + to_string(r.content) +
                      ", irreducible: " + yes(r.irreducible) + ", stripped: " + yes(r.stripped);
            break;
        }
    }
    if (sample.size() == 1 && !failure) {
        CriterionReport r = irreducibility_criterion_check(c, sample.front());
        o.detail = "gcd(h, f) = " + to_string(r.gcd_hf) + ", content = " + to_string(r.content) +
                   (r.irreducible ? ", irreducible" : ", stripped by the standard decomposition");
        return o;
    }
    return first_failure(std::move(o), static_cast<unsigned>(sample.size()),
                         "pairs; gcd(h, f) = 1 gives irreducible hE + fD', otherwise the content is gcd(h, f)", failure);
}

inline Outcome run_conjugation(const Args& a) {
    a.allow(4, {"g", "f", "u'", "d"});
    const Automorphism& g = a.automorphism(a.need(0, "g", "g"));
    Poly f = a.poly(a.need(1, "f", "f"), ambient_vars());
    const Automorphism& up = a.automorphism(a.need(2, "u'", "u'"));
    Poly d = a.poly(a.need(3, "d", "d"), ambient_vars());
    ConjugationReport r = conjugation_formula_check(g, f, up, d);
    Outcome o;
    o.pass = r.holds;
    o.detail = "g^*(d) = " + to_string(r.mu) + "*d; g^-1 o (f*u') o g = (mu^-1 g^*(f))*u': " + yes(r.holds) +
               "; with mu in place of mu^-1: " + yes(r.literal_form_holds);
    o.witnesses = {"lhs = " + to_string(r.lhs), "rhs = " + to_string(r.rhs)};
    return o;
}

inline Outcome run_divisor_symmetry(const Args& a) {
    a.allow(1, {"center", "order", "lambda"});
    Poly p = a.poly(a.need(0, "a"), vars({"z"}));
    DivisorSymmetry s = affine_symmetries(p);
    Outcome o;
    std::string order = s.order ? std::to_string(*s.order) : "torus";
    o.detail = "center = " + to_string(s.center) + ", order = " + order + ", lambda exponent = " +
               std::to_string(s.lambda_exponent) + ", recentered = " + to_string(s.recentered) + ", verified: " + yes(s.verified);
    o.pass = s.verified;
    if (s.order && *s.order > 0 && has_symmetry_of_order(s.recentered, 2 * *s.order)) {
        o.pass = false;
        o.detail += "; a symmetry of order " + std::to_string(2 * *s.order) + " also passes";
    }
    if (const Value* cv = a.named("center")) {
        Poly c = a.poly(*cv, universal_vars());
        if (!c.is_constant() || c.constant_value() != s.center) {
            o.pass = false;
            o.detail = "expected center " + to_string(c) + "; " + o.detail;
        }
    }
    if (const Value* ov = a.named("order")) {
        bool match = ov->type == Value::Type::keyword ? (ov->text == "torus" && !s.order)
                                                      : (s.order && a.integer(*ov) == static_cast<long>(*s.order));
        if (!match) {
            o.pass = false;
            o.detail = "expected order " + print(*ov) + "; " + o.detail;
        }
    }
    if (const Value* lv = a.named("lambda")) {
        if (a.integer(*lv) != static_cast<long>(s.lambda_exponent)) {
            o.pass = false;
            o.detail = "expected lambda exponent " + print(*lv) + "; " + o.detail;
        }
    }
    return o;
}

inline Outcome run_lift(const Args& a) {
    a.allow(2, {"expect"});
    const Automorphism& g = a.planeaut(a.need(0, "g"));
    PlaneDivisor div = a.divisor(a.need(1, "div"));
    Automorphism sigma = lift_to_H(g, div);
    Outcome o;
    o.detail = "sigma = " + to_string(sigma) + ", commutes with (x + " + to_string(div.poly()) + ", y, z)";
    if (const Value* ev = a.named("expect")) {
        const Automorphism& expect = a.automorphism(*ev);
        if (!(expect.images_only() == sigma.images_only())) {
            o.pass = false;
            o.detail = "expected " + to_string(expect) + ", found " + to_string(sigma);
        }
    }
    return o;
}

inline Outcome run_pres(const Args& a) {
    a.allow(1, {"candidates", "expect"});
    const GroupLaw& law = a.law(a.need(0, "L"));
    std::vector<GElem> cands;
    std::vector<std::string> cand_names;
    if (const Value* cv = a.named("candidates"))
        for (const Value* e : a.list(*cv)) {
            cands.push_back(a.gelem(*e));
            cand_names.push_back(print(*e));
        }
    PresWitnesses w = pres_lemma_witnesses(law);
    PresReport r = verify_pres_lemma(law, w, cands);
    Outcome o;
    std::vector<std::string> passing;
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        const auto& c = r.candidates[i];
        if (c.passes) passing.push_back(cand_names[i]);
        std::string failed;
        for (auto j : c.failed) failed += (failed.empty() ? "" : ",") + std::to_string(j);
        o.witnesses.push_back(cand_names[i] + " = " + to_string(c.candidate) +
                              (c.passes ? ": centralizes G^(2)" : ": fails witness families " + failed));
    }
    for (const auto& it : w.items) o.witnesses.push_back("witness z^" + std::to_string(it.i) + " P^" + std::to_string(it.j) + ": " + to_string(it.value));
    o.pass = r.holds;
    o.detail = "centralizers of G^(2) among candidates: [" + join(passing, ", ") + "]; fiber centralizes: " +
               yes(r.fiber_centralizes) + "; nu = " + to_string(law.nu()) + " (declared model); " + to_string(law.convention());
    if (const Value* ev = a.named("expect")) {
        std::vector<std::string> expect;
        for (const Value* e : a.list(*ev)) expect.push_back(print(*e));
        std::vector<std::string> got = passing;
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        if (expect != got) {
            o.pass = false;
            o.detail = "expected [" + join(expect, ", ") + "]; " + o.detail;
        }
    }
    return o;
}

inline Outcome run_char_commutator(const Args& a, const RunOptions& opt, Rng& rng) {
    a.allow(1, {"h", "f", "budget"});
    const DeltaContext& c = a.context(a.need(0, "C"));
    Vars kv = kernel_vars();
    std::vector<std::pair<Poly, Poly>> sample;
    if (const Value* hv = a.named("h")) {
        Poly f = a.named("f") ? a.poly(*a.named("f"), kv) : Poly(kv);
        sample.push_back({a.poly(*hv, kv), f});
    } else {
        unsigned budget = budget_of(a, opt);
        for (unsigned i = 0; i < budget; ++i) {
            NElem n = random_nelem(rng, opt);
            sample.push_back({n.h, n.f});
        }
    }
    std::optional<std::string> failure;
    for (const auto& [h, f] : sample) {
        CommutatorReport r = char_commutator_check(c, h, f);
        if (!r.holds) {
            failure = "h = " + to_string(h) + ", f = " + to_string(f) + ": " + to_string(r.lhs) + " vs " + to_string(r.rhs);
            break;
        }
    }
    if (sample.size() == 1 && !failure) {
        Poly coeff = c.expand(sample.front().first) * c.a_prime().pow(2) * Rational(-2);
        return {true, "[h*e o f*u', [P^2*u', e]] = (" + to_string(coeff) + ")*u'", {}};
    }
    return first_failure({}, static_cast<unsigned>(sample.size()), "pairs with [h*e o f*u', [P^2*u', e]] = -2h a'^2 * u'",
                         failure);
}

inline Outcome run_nonfence(const Args& a) {
    a.allow(6, {"u'", "d", "t", "f", "v", "k"});
    const Automorphism& up = a.automorphism(a.need(0, "u'", "u'"));
    Poly d = a.poly(a.need(1, "d", "d"), ambient_vars());
    const Automorphism& t = a.automorphism(a.need(2, "t", "t"));
    Poly f = a.poly(a.need(3, "f", "f"), ambient_vars());
    Poly v = a.poly(a.need(4, "v", "v"), ambient_vars());
    long k = a.integer(a.need(5, "k", "k"));
    if (k < 0 || k > 16) throw PreconditionFailed("k must be between 0 and 16");
    NonfenceReport r = nonfence_commutator_check(up, d, t, f, v, static_cast<unsigned>(k));
    Outcome o;
    o.pass = r.holds;
    o.detail = "mu = " + to_string(r.mu) + ", rho = " + to_string(r.rho) + ", scalar = " + to_string(r.scalar) +
               "; compositions agree: " + yes(r.holds);
    o.witnesses = {"lhs = " + to_string(r.lhs), "rhs = " + to_string(r.rhs)};
    return o;
}

inline Outcome run_fixed_scheme(const Args& a) {
    a.allow(1, {"family"});
    PlaneDivisor div = a.divisor(a.need(0, "div"));
    std::vector<Poly> family;
    if (const Value* fv = a.named("family"))
        for (const Value* e : a.list(*fv)) family.push_back(a.poly(*e, plane_vars()));
    FixedSchemeReport r = fixed_scheme_check(div, family);
    Outcome o;
    o.pass = r.fixes && r.not_moved.empty();
    std::vector<std::string> stuck;
    for (const auto& m : r.not_moved) stuck.push_back(to_string(m));
    o.detail = "witness " + to_string(fence_unipotent_witness(div)) + " fixes div(" + to_string(div.poly()) +
               "): " + yes(r.fixes) + "; moves " + std::to_string(r.moved.size()) + "/" + std::to_string(family.size()) +
               " larger subschemes" + (stuck.empty() ? "" : "; not moved: " + join(stuck, ", "));
    return o;
}

inline Outcome dispatch(const Directive& d, const Args& a, const RunOptions& opt, Rng& rng) {
    const std::string& n = d.name;
    if (n == "exp_log_roundtrip") return run_exp_log(a);
    if (n == "one_parameter_group") return run_one_parameter(a, opt, rng);
    if (n == "standard_decomposition_expect") return run_standard_decomposition(a);
    if (n == "plinth_expect") return run_plinth(a, opt);
    if (n == "admissible_complement") return run_admissible(a);
    if (n == "ad_identity") return run_ad_identity(a, opt, rng);
    if (n == "n_group_homomorphism") return run_n_group(a, opt, rng);
    if (n == "sat_instance") return run_sat(a);
    if (n == "irreducibility_criterion") return run_irreducibility(a, opt, rng);
    if (n == "conjugation_formula") return run_conjugation(a);
    if (n == "divisor_symmetry_expect") return run_divisor_symmetry(a);
    if (n == "lift_H") return run_lift(a);
    if (n == "pres_lemma") return run_pres(a);
    if (n == "char_commutator") return run_char_commutator(a, opt, rng);
    if (n == "nonfence_commutator") return run_nonfence(a);
    if (n == "fixed_scheme") return run_fixed_scheme(a);
    throw PreconditionFailed("unknown directive '" + n + "'");
}

}  // namespace detail

inline Report run(const CorpusCase& c, const RunOptions& opt = {}) {
    Report report;
    detail::Env env;
    std::size_t index = 0;
    for (const auto& item : c.items) {
        if (const auto* def = std::get_if<Definition>(&item)) {
            env.define(*def, opt.work_limit);
            continue;
        }
        const auto& d = std::get<Directive>(item);
        Result r;
        r.name = print(d);
        Rng rng(opt.seed * 0x9E3779B97F4A7C15ULL + ++index);
        try {
            WorkLimit limit(opt.work_limit);
            detail::Args args(d, env);
            detail::Outcome o = detail::dispatch(d, args, opt, rng);
            r.verdict = o.pass ? Verdict::pass : Verdict::fail;
            r.detail = std::move(o.detail);
            r.witnesses = std::move(o.witnesses);
        } catch (const Error& e) {
            r.verdict = Verdict::error;
            r.detail = e.what();
        } catch (const std::exception& e) {
            r.verdict = Verdict::error;
            r.detail = std::string("internal: ") + e.what();
        }
        report.results.push_back(std::move(r));
    }
    return report;
}

}  // namespace lnd::corpus
