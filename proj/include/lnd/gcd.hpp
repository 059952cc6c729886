#pragma once

// Exact division and gcds in Q[x_1..x_n].
//
// The gcd is computed recursively: pick the first variable either input
// depends on, split off contents (gcds of the coefficients in that variable,
// which live in fewer variables) and run a subresultant remainder sequence on
// the primitive parts. Results are normalized to graded-lex leading
// coefficient 1.

#include "lnd/poly.hpp"

#include <optional>
#include <vector>

namespace lnd {

/// Returns r with p = q*r, or nullopt when q does not divide p.
inline std::optional<Poly> try_divide_exact(const Poly& p, const Poly& q) {
    if (q.is_zero()) throw DivisionByZero("division by the zero polynomial");
    Vars v = Poly::common_vars(p, q);
    if (p.is_zero()) return Poly(v);
    if (q.is_constant()) return p * Rational(1 / q.constant_value());
    const Term& lead = q.leading_term();
    Rational inv = 1 / lead.coef;
    Poly rem = p.vars() == v ? p : Poly(v, p.constant_value());
    std::vector<Term> quotient;
    while (!rem.is_zero()) {
        const Term& t = rem.leading_term();
        if (!lead.mono.divides(t.mono)) return std::nullopt;
        Term qt{lead.mono.quotient_of(t.mono), t.coef * inv};
        rem -= q * Poly::monomial(v, qt.mono, qt.coef);
        quotient.push_back(std::move(qt));
    }
    return Poly::from_terms(v, std::move(quotient));
}

/// p / q, throwing NotDivisible when q does not divide p.
inline Poly divide_exact(const Poly& p, const Poly& q) {
    auto r = try_divide_exact(p, q);
    if (!r) throw NotDivisible("(" + to_string(q) + ") does not divide (" + to_string(p) + ")");
    return *std::move(r);
}

inline bool divides(const Poly& q, const Poly& p) {
    if (q.is_zero()) return p.is_zero();
    return try_divide_exact(p, q).has_value();
}

namespace detail {

// Polynomial in one distinguished variable with coefficients in the same
// ring (free of that variable); coeffs[e] multiplies var^e.
struct Univariate {
    std::vector<Poly> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    const Poly& lead() const { return coeffs.back(); }
    bool is_zero() const { return coeffs.empty(); }

    void trim() {
        while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    }
};

inline Univariate to_univariate(const Poly& p, std::size_t var) {
    Univariate u{coefficients_in(p, var)};
    u.trim();
    return u;
}

inline Poly from_univariate(const Univariate& u, std::size_t var, const Vars& v) {
    Poly out(v);
    for (std::size_t e = 0; e < u.coeffs.size(); ++e)
        if (!u.coeffs[e].is_zero()) out += u.coeffs[e] * Poly::monomial(v, Monomial::unit(var, static_cast<unsigned>(e)));
    return out;
}

// lc(b)^(deg a - deg b + 1) * a mod b, computed without division.
inline Univariate pseudo_remainder(Univariate a, const Univariate& b) {
    const int db = b.degree();
    const Poly& lb = b.lead();
    int steps = a.degree() - db + 1;
    while (!a.is_zero() && a.degree() >= db) {
        Poly la = a.lead();
        int shift = a.degree() - db;
        for (auto& c : a.coeffs) c = c * lb;
        for (int i = 0; i <= db; ++i) a.coeffs[static_cast<std::size_t>(i + shift)] -= la * b.coeffs[static_cast<std::size_t>(i)];
        a.trim();
        --steps;
    }
    if (steps > 0 && !a.is_zero()) {
        Poly f = lb.pow(static_cast<unsigned>(steps));
        for (auto& c : a.coeffs) c = c * f;
    }
    return a;
}

}  // namespace detail

inline Poly gcd(const Poly& p, const Poly& q);

/// gcd of the coefficients of p viewed as a polynomial in `var`.
inline Poly content_in(const Poly& p, std::size_t var) {
    Poly g(p.vars());
    for (const auto& c : coefficients_in(p, var)) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

namespace detail {

inline Poly primitive_part_in(const Poly& p, std::size_t var) {
    if (p.is_zero()) return p;
    return divide_exact(p, content_in(p, var));
}

// gcd of two primitive polynomials in `var`, both of positive degree there.
inline Poly primitive_gcd(const Poly& p, const Poly& q, std::size_t var) {
    const Vars& v = p.vars();
    Univariate a = to_univariate(p, var), b = to_univariate(q, var);
    if (a.degree() < b.degree()) std::swap(a, b);
    Poly g(v, 1), h(v, 1);
    while (true) {
        int delta = a.degree() - b.degree();
        Univariate r = pseudo_remainder(a, b);
        if (r.is_zero()) break;
        if (r.degree() == 0) return Poly(v, 1);
        Poly divisor = g * h.pow(static_cast<unsigned>(delta));
        for (auto& c : r.coeffs) c = divide_exact(c, divisor);
        a = std::move(b);
        b = std::move(r);
        g = a.lead();
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = divide_exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    return primitive_part_in(from_univariate(b, var, v), var);
}

}  // namespace detail

/// A greatest common divisor, graded-lex monic. gcd(p, 0) = monic(p);
/// gcd(0, 0) is an error.
inline Poly gcd(const Poly& p_in, const Poly& q_in) {
    Vars v = Poly::common_vars(p_in, q_in);
    if (p_in.is_zero() && q_in.is_zero()) throw DivisionByZero("gcd(0, 0) is undefined");
    Poly p = p_in.vars() == v ? p_in : Poly(v, p_in.constant_value());
    Poly q = q_in.vars() == v ? q_in : Poly(v, q_in.constant_value());
    if (p.is_zero()) return q.monic();
    if (q.is_zero()) return p.monic();
    if (p.is_constant() || q.is_constant()) return Poly(v, 1);
    std::size_t var = v->size();
    for (std::size_t i = 0; i < v->size(); ++i) {
        if (p.degree_in(i) > 0 || q.degree_in(i) > 0) {
            var = i;
            break;
        }
    }
    if (p.degree_in(var) == 0) return gcd(p, content_in(q, var));
    if (q.degree_in(var) == 0) return gcd(content_in(p, var), q);
    Poly cp = content_in(p, var), cq = content_in(q, var);
    Poly c = gcd(cp, cq);
    Poly pp = divide_exact(p, cp), pq = divide_exact(q, cq);
    return (c * detail::primitive_gcd(pp, pq, var)).monic();
}

inline Poly gcd(std::span<const Poly> polys) {
    Poly g;
    bool any = false;
    for (const auto& p : polys) {
        if (p.is_zero()) continue;
        g = any ? gcd(g, p) : p.monic();
        any = true;
        if (g.is_constant()) break;
    }
    if (!any) throw DivisionByZero("gcd of zero polynomials is undefined");
    return g;
}

}  // namespace lnd
