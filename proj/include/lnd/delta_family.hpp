#pragma once

// Δ_P derivations over A = Q[z] and the group N of pairs (h, f).
//
// Fixed coordinates x, y, z; P is a polynomial in x, y with coefficients in
// Q[z]. D' = Δ_P = -P_y d/dx + P_x d/dy, ker D' = Q[z, P]. A plinth search
// gives Q with D'(Q) = a' in Q[z]; E = Δ_Q is the admissible complement.
// Pairs (h, f) with h in Q[z], f in Q[z, P] are stored over the abstract
// kernel variables (z, P) and expanded on demand.

#include "lnd/kernel.hpp"

#include <string>
#include <vector>

namespace lnd {

inline Vars ambient_vars() { return vars({"x", "y", "z"}); }
inline Vars kernel_vars() { return vars({"z", "P"}); }

/// -p_y d/dx + p_x d/dy on Q[x, y, z].
inline Derivation delta_of(const Poly& p_in) {
    Vars v = ambient_vars();
    Poly p = embed(p_in, v);
    return Derivation(v, {-partial_derivative(p, "y"), partial_derivative(p, "x"), Poly(v)});
}

/// How products in N map to compositions.
enum class CompositionOrder {
    same,      // n_to_aut(a b) = compose(n_to_aut(a), n_to_aut(b))
    reversed,  // n_to_aut(a b) = compose(n_to_aut(b), n_to_aut(a))
};

inline std::string to_string(CompositionOrder c) {
    return c == CompositionOrder::same ? "aut(a*b) = aut(a) o aut(b)" : "aut(a*b) = aut(b) o aut(a)";
}

struct NElem {
    Poly h;  // over (z, P), using z only
    Poly f;  // over (z, P)

    friend bool operator==(const NElem&, const NElem&) = default;
};

inline NElem make_nelem(const Poly& h, const Poly& f) {
    Vars kv = kernel_vars();
    NElem n{embed(h, kv), embed(f, kv)};
    if (!n.h.only_uses({"z"})) throw PreconditionFailed("h must be a polynomial in z, got " + to_string(h));
    return n;
}

inline std::string to_string(const NElem& n) { return "n(" + to_string(n.h) + ", " + to_string(n.f) + ")"; }

class DeltaContext {
public:
    const Poly& p() const { return p_; }
    const Poly& d() const { return d_; }
    const Poly& q() const { return q_; }
    const Poly& a_prime() const { return a_prime_; }
    const Poly& a() const { return a_; }
    const Derivation& d_prime() const { return d_prime_; }  // Δ_P
    const Derivation& e_der() const { return e_der_; }      // Δ_Q
    const Automorphism& u_prime() const { return u_prime_; }
    const Automorphism& e() const { return e_; }
    const Automorphism& u() const { return u_; }
    CompositionOrder order() const { return order_; }

    /// f(z, P) with P replaced by the ambient polynomial.
    Poly expand(const Poly& kernel_poly) const {
        Poly k = embed(kernel_poly, kernel_vars());
        return substitute(k, std::vector<Poly>{z_, p_});
    }
    /// a' as an element of Q[z, P].
    Poly a_prime_kernel() const { return embed(a_prime_, kernel_vars()); }

    friend DeltaContext make_context(const Poly& p, const Poly& d, unsigned deg_max);

private:
    Poly p_, d_, q_, a_prime_, a_, z_;
    Derivation d_prime_, e_der_;
    Automorphism u_prime_, e_, u_;
    CompositionOrder order_ = CompositionOrder::same;
};

inline NElem n_mul(const NElem& a, const NElem& b, const DeltaContext& ctx);
inline Automorphism n_to_aut_raw(const NElem& n, const DeltaContext& ctx);

/// Builds the family for P and modification factor d (in z), runs the plinth
/// search with kernel generators z, P, verifies the context invariants and
/// records which composition order realizes the product law.
inline DeltaContext make_context(const Poly& p_in, const Poly& d_in, unsigned deg_max) {
    Vars v = ambient_vars();
    DeltaContext c;
    c.p_ = embed(p_in, v);
    c.d_ = embed(d_in, v);
    c.z_ = Poly::variable(v, "z");
    if (c.p_.degree_in("x") <= 0 && c.p_.degree_in("y") <= 0) throw PreconditionFailed("P must involve x or y");
    if (c.d_.is_zero() || !c.d_.only_uses({"z"})) throw PreconditionFailed("d must be a nonzero polynomial in z");
    c.d_prime_ = delta_of(c.p_);
    if (!is_locally_nilpotent(c.d_prime_).nilpotent())
        throw NilpotencyInconclusive("Δ_P is not seen to be locally nilpotent");
    PlinthResult pr = plinth_search(c.d_prime_, {c.z_, c.p_}, deg_max);
    c.q_ = pr.q;
    c.a_prime_ = pr.a;
    if (!c.a_prime_.only_uses({"z"}))
        throw PreconditionFailed("plinth generator " + to_string(c.a_prime_) + " is not in Q[z]");
    c.a_ = c.d_ * c.a_prime_;
    c.e_der_ = delta_of(c.q_);

    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw InternalFault("context invariant violated: " + what);
    };
    require(apply(c.d_prime_, c.p_).is_zero(), "Δ_P(P) = 0");
    require(apply(c.d_prime_, c.z_).is_zero(), "Δ_P(z) = 0");
    require(apply(c.d_prime_, c.q_) == c.a_prime_, "Δ_P(Q) = a'");
    require(apply(c.d_ * c.d_prime_, c.q_) == c.a_, "D(Q) = a");
    require(apply(c.e_der_, c.p_) == -c.a_prime_, "Δ_Q(P) = -a'");
    require(lie_bracket(c.d_prime_, c.e_der_).is_zero(), "[Δ_P, Δ_Q] = 0");
    require(is_irreducible(c.d_prime_), "Δ_P irreducible");
    require(is_irreducible(c.e_der_), "Δ_Q irreducible");

    c.u_prime_ = exponential(c.d_prime_);
    c.e_ = exponential(c.e_der_);
    c.u_ = modification(c.d_, c.u_prime_);

    // Try both orders on a pair that does not commute.
    NElem s = make_nelem(Poly(kernel_vars(), 1), Poly::variable(kernel_vars(), "P").pow(2));
    NElem t = make_nelem(Poly::variable(kernel_vars(), "z"), Poly::variable(kernel_vars(), "P") * Poly::variable(kernel_vars(), "z"));
    Automorphism lhs = n_to_aut_raw(n_mul(s, t, c), c);
    Automorphism as = n_to_aut_raw(s, c), at = n_to_aut_raw(t, c);
    bool same = lhs == compose(as, at);
    bool reversed = lhs == compose(at, as);
    if (same)
        c.order_ = CompositionOrder::same;
    else if (reversed)
        c.order_ = CompositionOrder::reversed;
    else
        throw InternalFault("neither composition order realizes the product law of N");
    return c;
}

/// (h, f)(h̄, f̄) = (h + h̄, f(z, P - h̄ a') + f̄) for a' in Q[z] over (z, P).
inline NElem n_mul_with(const NElem& a, const NElem& b, const Poly& a_prime) {
    Vars kv = kernel_vars();
    Poly shifted = Poly::variable(kv, "P") - b.h * a_prime;
    Poly f = substitute(a.f, std::vector<Poly>{Poly::variable(kv, "z"), shifted});
    return {a.h + b.h, f + b.f};
}

/// (-h, -f(z, P + h a')).
inline NElem n_inverse_with(const NElem& n, const Poly& a_prime) {
    Vars kv = kernel_vars();
    Poly shifted = Poly::variable(kv, "P") + n.h * a_prime;
    return {-n.h, -substitute(n.f, std::vector<Poly>{Poly::variable(kv, "z"), shifted})};
}

inline NElem n_mul(const NElem& a, const NElem& b, const DeltaContext& ctx) {
    return n_mul_with(a, b, ctx.a_prime_kernel());
}

inline NElem n_inverse(const NElem& n, const DeltaContext& ctx) { return n_inverse_with(n, ctx.a_prime_kernel()); }

inline NElem n_identity() { return {Poly(kernel_vars()), Poly(kernel_vars())}; }

/// h*e o f*u'.
inline Automorphism n_to_aut_raw(const NElem& n, const DeltaContext& ctx) {
    return compose(modification(ctx.expand(n.h), ctx.e()), modification(ctx.expand(n.f), ctx.u_prime()));
}

inline Automorphism n_to_aut(const NElem& n, const DeltaContext& ctx) { return n_to_aut_raw(n, ctx); }

/// The g in Q[z, P] with r = g * u', or an error when r is not a
/// modification of u'.
inline Poly modification_factor(const Automorphism& r, const DeltaContext& ctx) {
    Derivation l = logarithm(r);
    if (l.is_zero()) return Poly(kernel_vars());
    std::size_t pivot = 0;
    while (ctx.d_prime().image(pivot).is_zero()) ++pivot;
    auto g = try_divide_exact(l.image(pivot), ctx.d_prime().image(pivot));
    if (!g || !(*g * ctx.d_prime() == l))
        throw PreconditionFailed("logarithm is not a multiple of D'; not a modification of u'");
    if (!apply(ctx.d_prime(), *g).is_zero()) throw PreconditionFailed("factor is not in ker D'");
    unsigned bound = static_cast<unsigned>(std::max(g->total_degree(), 0));
    return express_in_kernel(*g, {Poly::variable(ambient_vars(), "z"), ctx.p()}, bound, kernel_vars());
}

/// Inverse of n_to_aut on N. Throws NotDivisible or PreconditionFailed
/// when g is not in N.
inline NElem aut_to_n(const Automorphism& g, const DeltaContext& ctx) {
    if (!commutes(g, ctx.u())) throw PreconditionFailed("g does not commute with u");
    Poly diff = ctx.p() - g.pullback(ctx.p());
    auto h = try_divide_exact(diff, ctx.a_prime());
    if (!h) throw NotDivisible("not in N: P - g^*(P) = " + to_string(diff) + " is not divisible by a'");
    if (!h->only_uses({"z"})) throw NotDivisible("not in N: (P - g^*(P))/a' = " + to_string(*h) + " is not in Q[z]");
    Automorphism eh = modification(*h, ctx.e());
    Automorphism residual = compose(eh.inverse(), g);
    NElem n = make_nelem(*h, modification_factor(residual, ctx));
    if (!(n_to_aut(n, ctx) == g)) throw InternalFault("aut_to_n reconstruction does not reproduce g");
    return n;
}

/// hE + fD' as a derivation of Q[x, y, z].
inline Derivation combined_derivation(const NElem& n, const DeltaContext& ctx) {
    return ctx.expand(n.h) * ctx.e_der() + ctx.expand(n.f) * ctx.d_prime();
}

/// The g with exp(hE)^-1 o exp(hE + fD') = g * u'.
inline Poly exp_m_decompose(const NElem& n, const DeltaContext& ctx) {
    Automorphism w = exponential(combined_derivation(n, ctx));
    Automorphism residual = compose(modification(ctx.expand(n.h), ctx.e()).inverse(), w);
    try {
        return modification_factor(residual, ctx);
    } catch (const PreconditionFailed& e) {
        throw InternalFault(std::string("Exp(hE + fD') is not exp(hE) o g*u': ") + e.what());
    }
}

struct CombineResult {
    Poly f_poly;  // F in Q[x, y, z]
    bool check;   // Δ_F = hE + fD'
};

/// F = hQ + fP - ∫ (∂f/∂P) P dP, with Δ_F = hE + fD'.
inline CombineResult combine_to_delta(const DeltaContext& ctx, const NElem& n) {
    Vars kv = kernel_vars();
    Poly pv = Poly::variable(kv, "P");
    Poly g = n.f * pv - integrate_in(partial_derivative(n.f, "P") * pv, "P");
    Poly big_f = ctx.expand(n.h) * ctx.q() + ctx.expand(g);
    return {big_f, delta_of(big_f) == combined_derivation(n, ctx)};
}

struct AdIdentityRow {
    unsigned q;
    Derivation lhs;  // fD' ad(hE)^q
    Derivation rhs;  // (-1)^q h^q E^q(f) D'
    bool holds;
};

inline std::vector<AdIdentityRow> ad_identity_check(const DeltaContext& ctx, const Poly& h_in, const Poly& f_in,
                                                    unsigned q_max) {
    Poly h = ctx.expand(h_in), f = ctx.expand(f_in);
    if (!h.only_uses({"z"})) throw PreconditionFailed("h must be a polynomial in z");
    if (!apply(ctx.d_prime(), f).is_zero()) throw PreconditionFailed("f must lie in ker D'");
    Derivation he = h * ctx.e_der();
    Derivation lhs = f * ctx.d_prime();
    Poly ef = f;
    Poly hq(ambient_vars(), 1);
    std::vector<AdIdentityRow> rows;
    for (unsigned q = 0; q <= q_max; ++q) {
        if (q > 0) {
            lhs = lie_bracket(lhs, he);
            ef = apply(ctx.e_der(), ef);
            hq *= h;
        }
        Poly coeff = hq * ef * Rational(q % 2 == 0 ? 1 : -1);
        Derivation rhs = coeff * ctx.d_prime();
        rows.push_back({q, lhs, rhs, lhs == rhs});
    }
    return rows;
}

struct CriterionReport {
    Poly gcd_hf;            // gcd(h, f) in Q[z, P]
    Poly content;           // gcd of the generator images of hE + fD'
    bool irreducible;       // content is a unit
    bool holds;             // gcd(h, f) = 1 implies irreducible
    bool content_predicted; // content equals expand(gcd(h, f))
    bool stripped;          // standard decomposition strips exactly the content
};

inline CriterionReport irreducibility_criterion_check(const DeltaContext& ctx, const NElem& n) {
    Derivation m = combined_derivation(n, ctx);
    if (m.is_zero()) throw PreconditionFailed("hE + fD' is the zero derivation");
    CriterionReport r;
    r.gcd_hf = gcd(n.h, n.f);
    r.content = gcd(std::span<const Poly>(m.images()));
    r.irreducible = r.content.is_constant();
    r.holds = !r.gcd_hf.is_constant() || r.irreducible;
    r.content_predicted = ctx.expand(r.gcd_hf).monic() == r.content;
    StandardDecomposition sd = standard_decomposition(exponential(m));
    r.stripped = sd.d == r.content && sd.d * sd.reduced == m;
    return r;
}

}  // namespace lnd
