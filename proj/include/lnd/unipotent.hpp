#pragma once

// Exponentials, logarithms, modifications and standard decompositions of
// unipotent automorphisms.

#include "lnd/automorphism.hpp"
#include "lnd/gcd.hpp"

#include <vector>

namespace lnd {

/// exp(D). Throws NilpotencyInconclusive when D is not seen to be locally
/// nilpotent within `cap` iterations per generator.
inline Automorphism exponential(const Derivation& d, unsigned cap = kDefaultNilpotencyCap) {
    NilpotencyEvidence ev = is_locally_nilpotent(d, cap);
    if (!ev.nilpotent())
        throw NilpotencyInconclusive("derivation not nilpotent on the generators within " + std::to_string(cap) +
                                     " iterations");
    std::vector<Poly> images;
    const Vars& v = d.vars();
    for (std::size_t i = 0; i < v->size(); ++i)
        images.push_back(exp_series(d, ev.vanishing_orders, Poly::variable(v, (*v)[i])));
    return Automorphism::from_exponential({d, std::move(ev.vanishing_orders)}, std::move(images));
}

/// log(u) = sum_{k>=1} (-1)^(k+1) (u^* - id)^k / k, evaluated on each
/// generator. Throws NotUnipotent if (u^* - id) does not kill a generator
/// within `cap` applications.
inline Derivation logarithm(const Automorphism& u, unsigned cap = kDefaultNilpotencyCap) {
    const Vars& v = u.vars();
    std::vector<Poly> images;
    for (std::size_t i = 0; i < v->size(); ++i) {
        Poly cur = Poly::variable(v, (*v)[i]);
        Poly sum(v);
        unsigned k = 1;
        for (; k <= cap; ++k) {
            cur = u.pullback(cur) - cur;
            if (cur.is_zero()) break;
            sum += cur * make_rational(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
        }
        if (k > cap) throw NotUnipotent("u^* - id is not nilpotent on " + (*v)[i] + " within " + std::to_string(cap) + " steps");
        images.push_back(std::move(sum));
    }
    return Derivation(v, std::move(images));
}

/// The derivation whose exponential is u, reusing a single-factor word.
inline Derivation generator_of(const Automorphism& u) {
    if (const auto& w = u.exp_word(); w && w->size() == 1) return w->front().derivation;
    return logarithm(u);
}

/// exp(-log u), both compositions checked against the identity.
inline Automorphism inverse_unipotent(const Automorphism& u) {
    Automorphism inv = exponential(-generator_of(u));
    Automorphism id = Automorphism::identity(u.vars());
    if (!(compose(u, inv) == id) || !(compose(inv, u) == id))
        throw InternalFault("exp(-log u) does not invert u");
    return inv;
}

/// f*u := exp(f D) for u = exp(D) and D(f) = 0.
inline Automorphism modification(const Poly& f, const Automorphism& u) {
    Derivation d = generator_of(u);
    if (!apply(d, f).is_zero()) throw PreconditionFailed("modification factor " + to_string(f) + " is not in ker D");
    Derivation fd = f * d;
    // (fD)^k = f^k D^k on generators, so the vanishing orders carry over
    // (a zero factor kills everything after one step).
    NilpotencyEvidence ev = is_locally_nilpotent(d);
    if (!ev.nilpotent()) throw NilpotencyInconclusive("generator of u is not seen to be locally nilpotent");
    if (f.is_zero()) return Automorphism::identity(u.vars());
    std::vector<Poly> images;
    const Vars& v = u.vars();
    for (std::size_t i = 0; i < v->size(); ++i)
        images.push_back(exp_series(fd, ev.vanishing_orders, Poly::variable(v, (*v)[i])));
    return Automorphism::from_exponential({std::move(fd), std::move(ev.vanishing_orders)}, std::move(images));
}

/// gcd of the generator images is a unit.
inline bool is_irreducible(const Derivation& d) {
    if (d.is_zero()) throw PreconditionFailed("the zero derivation is not irreducible");
    return gcd(std::span<const Poly>(d.images())).is_constant();
}

struct StandardDecomposition {
    Poly d;
    Derivation reduced;     // D' with D = d * D'
    Automorphism u_prime;   // exp(D')
};

/// u = d * u' with u' irreducible.
inline StandardDecomposition standard_decomposition(const Automorphism& u) {
    Derivation big = generator_of(u);
    if (big.is_zero()) throw PreconditionFailed("the identity has no standard decomposition");
    Poly d = gcd(std::span<const Poly>(big.images()));
    std::vector<Poly> reduced;
    for (const auto& img : big.images()) reduced.push_back(divide_exact(img, d));
    Derivation dp(u.vars(), std::move(reduced));
    if (!apply(big, d).is_zero()) throw InternalFault("gcd of the generator images is not in ker D");
    if (!is_locally_nilpotent(dp).nilpotent()) throw InternalFault("D / d is not locally nilpotent");
    if (!is_irreducible(dp)) throw InternalFault("D / d is not irreducible");
    return {d, dp, exponential(dp)};
}

/// The scalar c with g^*(d) = c d.
inline Rational mu_character(const Automorphism& g, const Poly& d) {
    if (d.is_zero()) throw PreconditionFailed("mu character of the zero polynomial");
    Poly gd = g.pullback(d);
    if (gd.is_zero()) throw PreconditionFailed("g^*(d) is zero");
    Rational c = gd.leading_coefficient() / d.leading_coefficient();
    if (!(gd == d * c))
        throw PreconditionFailed("g^*(" + to_string(d) + ") = " + to_string(gd) + " is not proportional to it");
    return c;
}

struct ConjugationReport {
    Rational mu;              // g^*(d) = mu d
    Automorphism lhs;         // g^-1 o (f*u') o g
    Automorphism rhs;         // (mu^-1 g^*(f)) * u'
    bool holds;
    bool literal_form_holds;  // the same with mu in place of mu^-1
};

/// Conjugation of a modification of u' by an element g of Cent(d*u').
///
/// With g^*(d) = mu d, conjugation scales D' by mu^-1 (g commutes with
/// exp(d D')), so g^-1 o (f*u') o g = (mu^-1 g^*(f)) * u'. The variant with
/// mu agrees exactly when mu^2 = 1 or f = 0; both are reported.
inline ConjugationReport conjugation_formula_check(const Automorphism& g, const Poly& f, const Automorphism& u_prime,
                                                   const Poly& d) {
    Automorphism u = modification(d, u_prime);
    if (!commutes(g, u)) throw PreconditionFailed("g does not commute with d*u'");
    Rational mu = mu_character(g, d);
    Automorphism lhs = compose(g.inverse(), compose(modification(f, u_prime), g));
    Poly gf = g.pullback(f);
    Automorphism rhs = modification(gf * Rational(1 / mu), u_prime);
    Automorphism literal = modification(gf * mu, u_prime);
    return {mu, lhs, rhs, lhs == rhs, lhs == literal};
}

}  // namespace lnd
