#pragma once

// Searches inside kernels of locally nilpotent derivations by exact linear
// algebra on monomial coefficients: plinth generators, preslices, and
// re-expression of invariants in given kernel generators.
//
// Kernels are never computed; callers declare generators and we spot-check
// them with apply(D, g) == 0.

#include "lnd/linalg.hpp"
#include "lnd/unipotent.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lnd {

/// All monomials of total degree <= deg, graded-lex descending.
inline std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned deg) {
    std::vector<Monomial> out;
    Monomial m;
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == nvars) {
            out.push_back(m);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            m.set(i, e);
            rec(i + 1, left - e);
        }
        m.set(i, 0);
    };
    rec(0, deg);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

namespace detail {

// Rows of a coefficient matrix indexed by monomials, largest first.
class MonomialIndex {
public:
    void add(const Poly& p) {
        for (const auto& t : p.terms()) rows_.emplace(t.mono, 0);
    }
    void freeze() {
        std::size_t i = 0;
        for (auto& [m, idx] : rows_) idx = i++;
    }
    std::size_t size() const { return rows_.size(); }
    std::size_t at(const Monomial& m) const { return rows_.at(m); }
    std::vector<Monomial> monomials() const {
        std::vector<Monomial> out;
        for (const auto& [m, idx] : rows_) out.push_back(m);
        return out;
    }

private:
    std::map<Monomial, std::size_t, std::greater<>> rows_;
};

// Column j of the result holds the coefficients of cols[j].
inline Matrix coefficient_matrix(const std::vector<Poly>& cols, const MonomialIndex& index) {
    Matrix m(index.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& t : cols[j].terms()) m(index.at(t.mono), j) = t.coef;
    return m;
}

inline Poly combine(const Vars& v, const std::vector<Poly>& polys, const std::vector<Rational>& coeffs,
                    std::size_t offset = 0) {
    Poly out(v);
    for (std::size_t j = 0; j < polys.size(); ++j)
        if (coeffs[offset + j] != 0) out += polys[j] * coeffs[offset + j];
    return out;
}

// Canonical smallest element of span(polys): reduce to echelon form with
// monomials descending and return the monic row with the smallest leading
// monomial. Zero if the span is zero.
inline Poly smallest_in_span(const Vars& v, const std::vector<Poly>& polys) {
    MonomialIndex index;
    for (const auto& p : polys) index.add(p);
    index.freeze();
    if (index.size() == 0) return Poly(v);
    // transpose: one row per polynomial, one column per monomial
    Matrix m(polys.size(), index.size());
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (const auto& t : polys[i].terms()) m(i, index.at(t.mono)) = t.coef;
    Echelon e = rref(std::move(m));
    if (e.pivots.empty()) return Poly(v);
    auto monos = index.monomials();
    std::size_t last = e.pivots.size() - 1;
    std::vector<Term> terms;
    for (std::size_t c = 0; c < monos.size(); ++c)
        if (e.reduced(last, c) != 0) terms.push_back({monos[c], e.reduced(last, c)});
    return Poly::from_terms(v, std::move(terms));
}

// Normal form of p modulo span(basis): zero on every pivot monomial of the
// reduced echelon form of the basis.
inline Poly reduce_modulo_span(const Poly& p, const std::vector<Poly>& basis) {
    if (basis.empty()) return p;
    MonomialIndex index;
    for (const auto& b : basis) index.add(b);
    index.freeze();
    Matrix m(basis.size(), index.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (const auto& t : basis[i].terms()) m(i, index.at(t.mono)) = t.coef;
    Echelon e = rref(std::move(m));
    auto monos = index.monomials();
    Poly out = p;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        Rational c = out.coefficient(monos[e.pivots[r]]);
        if (c == 0) continue;
        std::vector<Term> row;
        for (std::size_t col = 0; col < monos.size(); ++col)
            if (e.reduced(r, col) != 0) row.push_back({monos[col], e.reduced(r, col)});
        out -= Poly::from_terms(p.vars(), std::move(row)) * c;
    }
    return out;
}

inline void check_kernel_generators(const Derivation& d, const std::vector<Poly>& gens) {
    for (const auto& g : gens)
        if (!apply(d, g).is_zero())
            throw PreconditionFailed("declared kernel generator " + to_string(g) + " is not killed by D");
}

// Exponent vectors e over the generators with sum e_i * deg(g_i) <= bound,
// for generators of positive degree.
inline std::vector<std::vector<unsigned>> generator_exponents(const std::vector<int>& degrees, int bound) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> e(degrees.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == degrees.size()) {
            out.push_back(e);
            return;
        }
        if (degrees[i] <= 0) {
            e[i] = 0;
            rec(i + 1, left);
            return;
        }
        for (unsigned k = 0; static_cast<int>(k) * degrees[i] <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - static_cast<int>(k) * degrees[i]);
        }
        e[i] = 0;
    };
    rec(0, bound);
    return out;
}

inline Poly power_product(const Vars& v, const std::vector<Poly>& gens, const std::vector<unsigned>& e) {
    Poly out(v, 1);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (e[i] > 0) out *= gens[i].pow(e[i]);
    return out;
}

}  // namespace detail

struct PlinthResult {
    Poly q;
    Poly a;
};

/// Finds Q of degree <= deg_max with D(Q) a nonzero polynomial in the kernel
/// generators, minimizing deg D(Q); ties go to the graded-lex smallest monic
/// a, then to the canonical Q modulo ker D. D(Q) = a exactly.
inline PlinthResult plinth_search(const Derivation& d, const std::vector<Poly>& kernel_gens, unsigned deg_max) {
    const Vars& v = d.vars();
    detail::check_kernel_generators(d, kernel_gens);
    std::vector<Poly> gens;
    std::vector<int> degrees;
    for (const auto& g : kernel_gens) {
        if (g.is_constant()) continue;
        gens.push_back(g.vars() == v ? g : embed(g, v));
        degrees.push_back(g.total_degree());
    }
    std::vector<Poly> q_basis, images;
    for (const auto& m : monomials_up_to(v->size(), deg_max)) {
        q_basis.push_back(Poly::monomial(v, m));
        images.push_back(apply(d, q_basis.back()));
    }
    int image_degree = -1;
    for (const auto& p : images) image_degree = std::max(image_degree, p.total_degree());
    if (image_degree < 0) throw SearchExhausted("D vanishes on all polynomials of degree <= " + std::to_string(deg_max));

    for (int t = 0; t <= image_degree; ++t) {
        std::vector<Poly> products;
        for (const auto& e : detail::generator_exponents(degrees, t)) products.push_back(detail::power_product(v, gens, e));
        std::vector<Poly> cols = images;
        for (const auto& p : products) cols.push_back(-p);
        detail::MonomialIndex index;
        for (const auto& c : cols) index.add(c);
        index.freeze();
        std::vector<Poly> candidates;
        for (const auto& w : nullspace(detail::coefficient_matrix(cols, index))) {
            Poly a = detail::combine(v, products, w, images.size());
            if (!a.is_zero()) candidates.push_back(std::move(a));
        }
        Poly a = detail::smallest_in_span(v, candidates);
        if (a.is_zero()) continue;

        // Q: any preimage, then the canonical representative modulo ker D.
        detail::MonomialIndex qi;
        for (const auto& p : images) qi.add(p);
        qi.add(a);
        qi.freeze();
        std::vector<Rational> rhs(qi.size());
        for (const auto& term : a.terms()) rhs[qi.at(term.mono)] = term.coef;
        auto sol = solve(detail::coefficient_matrix(images, qi), rhs);
        if (!sol) throw InternalFault("plinth element without a preimage");
        Poly q = detail::combine(v, q_basis, *sol);
        std::vector<Poly> kernel_part;
        for (const auto& w : nullspace(detail::coefficient_matrix(images, qi)))
            kernel_part.push_back(detail::combine(v, q_basis, w));
        q = detail::reduce_modulo_span(q, kernel_part);
        if (!(apply(d, q) == a)) throw InternalFault("plinth search produced D(Q) != a");
        return {q, a};
    }
    throw SearchExhausted("no Q of degree <= " + std::to_string(deg_max) +
                          " maps into the generator algebra; raise the degree bound");
}

/// A polynomial f of degree <= deg_max with D(f) != 0 and D^2(f) = 0, of
/// smallest degree; canonical modulo ker D.
inline Poly preslice_search(const Derivation& d, unsigned deg_max) {
    if (d.is_zero()) throw PreconditionFailed("the zero derivation has no preslice");
    const Vars& v = d.vars();
    for (unsigned t = 1; t <= deg_max; ++t) {
        std::vector<Poly> basis, once, twice;
        for (const auto& m : monomials_up_to(v->size(), t)) {
            basis.push_back(Poly::monomial(v, m));
            once.push_back(apply(d, basis.back()));
            twice.push_back(apply(d, once.back()));
        }
        auto span_of = [&](const std::vector<Poly>& images) {
            detail::MonomialIndex idx;
            for (const auto& p : images) idx.add(p);
            idx.freeze();
            std::vector<Poly> out;
            for (const auto& w : nullspace(detail::coefficient_matrix(images, idx)))
                out.push_back(detail::combine(v, basis, w));
            return out;
        };
        std::vector<Poly> kernel = span_of(once);
        std::vector<Poly> reduced;
        for (const auto& p : span_of(twice)) {
            Poly r = detail::reduce_modulo_span(p, kernel);
            if (!r.is_zero()) reduced.push_back(std::move(r));
        }
        Poly f = detail::smallest_in_span(v, reduced);
        if (f.is_zero()) continue;
        f = detail::reduce_modulo_span(f, kernel);
        if (apply(d, f).is_zero() || !apply_power(d, f, 2).is_zero())
            throw InternalFault("preslice search produced an invalid element");
        return f;
    }
    throw SearchExhausted("no preslice of degree <= " + std::to_string(deg_max));
}

/// Default names g1, g2, ... for abstract kernel variables.
inline Vars kernel_variables(std::size_t count) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) names.push_back("g" + std::to_string(i + 1));
    return VarList::get(std::move(names));
}

namespace detail {

// Subduction: peel off leading terms using products of generators whose
// leading monomials match. Succeeds on the Δ-family kernels (distinct
// leading monomials for z^i P^j); nullopt when it gets stuck.
inline std::optional<Poly> subduce(Poly f, const std::vector<Poly>& gens, const Vars& target, unsigned deg_max) {
    std::vector<int> degrees;
    for (const auto& g : gens) degrees.push_back(g.total_degree());
    std::map<Monomial, std::vector<unsigned>> by_lead;
    int bound = std::max(f.total_degree(), 0);
    for (const auto& e : generator_exponents(degrees, bound)) {
        unsigned abstract = 0;
        for (auto k : e) abstract += k;
        if (abstract > deg_max) continue;
        Monomial lead;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) lead = lead * gens[i].leading_term().mono;
        if (!by_lead.emplace(lead, e).second) return std::nullopt;  // ambiguous leading monomials
    }
    Poly out(target);
    while (!f.is_zero()) {
        const Term& t = f.leading_term();
        auto it = by_lead.find(t.mono);
        if (it == by_lead.end()) return std::nullopt;
        Poly prod = power_product(f.vars(), gens, it->second);
        Rational c = t.coef / prod.leading_coefficient();
        Monomial abstract;
        for (std::size_t i = 0; i < gens.size(); ++i) abstract.set(i, it->second[i]);
        out += Poly::monomial(target, abstract, c);
        f -= prod * c;
    }
    return out;
}

}  // namespace detail

/// Writes f as a polynomial of abstract degree <= deg_max in the generators
/// (one variable of `target` per generator). The result substitutes back to
/// f exactly.
inline Poly express_in_kernel(const Poly& f, const std::vector<Poly>& gens, unsigned deg_max, Vars target = {}) {
    if (!target) target = kernel_variables(gens.size());
    if (target->size() != gens.size()) throw VariableMismatch("one abstract variable per generator required");
    if (gens.empty()) {
        if (f.is_constant()) return Poly(target, f.constant_value());
        throw SearchExhausted(to_string(f) + " is not a constant");
    }
    const Vars& v = gens.front().vars();
    Poly ff = f.vars() == v ? f : embed(f, v);
    bool usable = true;
    for (const auto& g : gens)
        if (g.vars() != v || g.is_constant()) usable = false;
    if (usable) {
        if (auto r = detail::subduce(ff, gens, target, deg_max)) return *r;
    }
    std::vector<Poly> products;
    std::vector<Monomial> abstract;
    for (const auto& m : monomials_up_to(gens.size(), deg_max)) {
        std::vector<unsigned> e;
        for (std::size_t i = 0; i < gens.size(); ++i) e.push_back(m[i]);
        products.push_back(detail::power_product(v, gens, e));
        abstract.push_back(m);
    }
    detail::MonomialIndex index;
    for (const auto& p : products) index.add(p);
    index.add(ff);
    index.freeze();
    std::vector<Rational> rhs(index.size());
    for (const auto& t : ff.terms()) rhs[index.at(t.mono)] = t.coef;
    auto sol = solve(detail::coefficient_matrix(products, index), rhs);
    if (!sol)
        throw SearchExhausted(to_string(f) + " is not a polynomial of degree <= " + std::to_string(deg_max) +
                              " in the given generators");
    std::vector<Term> terms;
    for (std::size_t j = 0; j < abstract.size(); ++j)
        if ((*sol)[j] != 0) terms.push_back({abstract[j], (*sol)[j]});
    return Poly::from_terms(target, std::move(terms));
}

/// The induced map on the quotient: g^*(gen_i) re-expressed in the generators.
inline std::vector<Poly> quotient_action(const Automorphism& g, const std::vector<Poly>& gens, unsigned deg_max,
                                         Vars target = {}) {
    std::vector<Poly> out;
    for (const auto& gen : gens) {
        try {
            out.push_back(express_in_kernel(g.pullback(gen), gens, deg_max, target));
        } catch (const SearchExhausted&) {
            throw PreconditionFailed("g^*(" + to_string(gen) + ") is not in the generator algebra");
        }
    }
    return out;
}

struct SatReport {
    Derivation bracket;       // [fF, B]
    Poly b_of_f;              // B(f)
    Derivation f_bracket_b;   // [F, B]
    bool identity_holds;      // [fF, B] = f[F, B] - B(f) F
    bool bracket_zero;
    bool conclusion_holds;    // bracket zero => B(f) = 0 and [F, B] = 0
};

inline SatReport sat_instance_check(const Derivation& b, const Derivation& f_der, const Poly& f) {
    if (!is_locally_nilpotent(f_der).nilpotent()) throw PreconditionFailed("F is not seen to be locally nilpotent");
    if (!apply(f_der, f).is_zero()) throw PreconditionFailed(to_string(f) + " is not in ker F");
    Derivation br = lie_bracket(f * f_der, b);
    Poly bf = apply(b, f);
    Derivation fb = lie_bracket(f_der, b);
    SatReport r{br, bf, fb, false, br.is_zero(), true};
    r.identity_holds = br == f * fb - bf * f_der;
    if (r.bracket_zero) r.conclusion_holds = bf.is_zero() && fb.is_zero();
    return r;
}

}  // namespace lnd
