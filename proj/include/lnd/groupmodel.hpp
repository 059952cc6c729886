#pragma once

// The abstract group G = T ⋉ (A ⋉ A[P]), A = Q[z], with a split torus T of
// rank r represented by points in (Q^*)^r.
//
// Elements are triples (λ, h, f). The torus acts on the fiber A ⋉ A[P] by
//   λ^-1 (h, f) λ = (ν(λ) h(ρ1(λ) z), μ(λ) f(ρ1(λ) z, ρ2(λ) P)),
// so (λ, n)(λ̄, n̄) = (λλ̄, c_λ̄(n) n̄), and the fiber multiplies by
//   (h, f)(h̄, f̄) = (h + h̄, f(P - h̄ a') + f̄).

#include "lnd/delta_family.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace lnd {

using TorusPoint = std::vector<Rational>;

struct CharacterVector {
    std::vector<long> exponents;

    Rational operator()(const TorusPoint& t) const {
        if (t.size() != exponents.size()) throw PreconditionFailed("torus point of the wrong rank");
        Rational r(1);
        for (std::size_t i = 0; i < t.size(); ++i) r *= pow(t[i], exponents[i]);
        return r;
    }
    bool is_trivial() const {
        for (auto e : exponents)
            if (e != 0) return false;
        return true;
    }
    friend CharacterVector operator*(const CharacterVector& a, const CharacterVector& b) {
        CharacterVector c{a.exponents};
        for (std::size_t i = 0; i < c.exponents.size(); ++i) c.exponents[i] += b.exponents.at(i);
        return c;
    }
    CharacterVector power(long k) const {
        CharacterVector c{exponents};
        for (auto& e : c.exponents) e *= k;
        return c;
    }
    friend bool operator==(const CharacterVector&, const CharacterVector&) = default;
};

inline std::string to_string(const CharacterVector& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.exponents.size(); ++i) s += (i ? ", " : "") + std::to_string(c.exponents[i]);
    return s + "]";
}

enum class CommutatorConvention {
    abab,  // [a, b] = a b a^-1 b^-1
    aabb,  // [a, b] = a^-1 b^-1 a b
};

inline std::string to_string(CommutatorConvention c) {
    return c == CommutatorConvention::abab ? "[a,b] = a*b*a^-1*b^-1" : "[a,b] = a^-1*b^-1*a*b";
}

struct GElem {
    TorusPoint torus;
    Poly h;  // over (z, P), in z only
    Poly f;  // over (z, P)

    friend bool operator==(const GElem&, const GElem&) = default;
};

inline std::string to_string(const GElem& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.torus.size(); ++i) s += (i ? ", " : "") + to_string(g.torus[i]);
    return s + "; " + to_string(g.h) + "; " + to_string(g.f) + ")";
}

class GroupLaw;
inline GElem g_mul(const GElem& a, const GElem& b, const GroupLaw& law);
inline GElem g_inverse(const GElem& a, const GroupLaw& law);

class GroupLaw {
public:
    /// Validates the law; nu defaults to rho1^k rho2^-1 for a' = c z^k.
    static GroupLaw make(CharacterVector mu, CharacterVector rho1, CharacterVector rho2,
                         std::optional<CharacterVector> nu, const Poly& a_prime) {
        GroupLaw law;
        std::size_t r = mu.exponents.size();
        if (r == 0) throw PreconditionFailed("torus rank must be positive");
        if (rho1.exponents.size() != r || rho2.exponents.size() != r || (nu && nu->exponents.size() != r))
            throw PreconditionFailed("characters of different ranks");
        law.mu_ = std::move(mu);
        law.rho1_ = std::move(rho1);
        law.rho2_ = std::move(rho2);
        law.a_prime_ = embed(a_prime, kernel_vars());
        if (law.a_prime_.is_zero() || !law.a_prime_.only_uses({"z"}))
            throw PreconditionFailed("a' must be a nonzero polynomial in z");

        // c_λ is a group automorphism of the fiber iff a'(ρ1 z) = ρ2 ν a'(z).
        CharacterVector needed;
        if (law.rho1_.is_trivial()) {
            needed = law.rho2_.power(-1);
        } else {
            if (law.a_prime_.size() != 1)
                throw PreconditionFailed("a' must be a monomial c*z^k when rho1 is nontrivial");
            long k = static_cast<long>(law.a_prime_.total_degree());
            needed = law.rho1_.power(k) * law.rho2_.power(-1);
        }
        if (nu && !(*nu == needed))
            throw PreconditionFailed("nu = " + to_string(*nu) + " does not make the torus act by automorphisms; need " +
                                     to_string(needed));
        law.nu_ = needed;
        law.points_ = test_points(r);
        for (const auto& t : law.points_) {
            if (is_one(t)) continue;
            if (law.rho1_(t) == 1 && law.rho2_(t) == 1)
                throw PreconditionFailed("ker rho1 ∩ ker rho2 is not trivial on the test points");
        }
        law.convention_ = law.detect_convention();
        return law;
    }

    const CharacterVector& mu() const { return mu_; }
    const CharacterVector& rho1() const { return rho1_; }
    const CharacterVector& rho2() const { return rho2_; }
    const CharacterVector& nu() const { return nu_; }
    const Poly& a_prime() const { return a_prime_; }
    std::size_t rank() const { return mu_.exponents.size(); }
    const std::vector<TorusPoint>& points() const { return points_; }
    CommutatorConvention convention() const { return convention_; }

    GElem identity() const { return {TorusPoint(rank(), Rational(1)), Poly(kernel_vars()), Poly(kernel_vars())}; }

    GElem element(TorusPoint t, const Poly& h, const Poly& f) const {
        if (t.size() != rank()) throw PreconditionFailed("torus point of the wrong rank");
        for (const auto& c : t)
            if (c == 0) throw PreconditionFailed("torus coordinates must be nonzero");
        GElem g{std::move(t), embed(h, kernel_vars()), embed(f, kernel_vars())};
        if (!g.h.only_uses({"z"})) throw PreconditionFailed("h must be a polynomial in z");
        return g;
    }

    /// λ^-1 (h, f) λ.
    std::pair<Poly, Poly> conjugate(const TorusPoint& t, const Poly& h, const Poly& f) const {
        Vars kv = kernel_vars();
        Poly z = Poly::variable(kv, "z"), p = Poly::variable(kv, "P");
        Poly zs = z * rho1_(t), ps = p * rho2_(t);
        return {substitute(h, std::vector<Poly>{zs, p}) * nu_(t), substitute(f, std::vector<Poly>{zs, ps}) * mu_(t)};
    }

    static bool is_one(const TorusPoint& t) {
        for (const auto& c : t)
            if (c != 1) return false;
        return true;
    }

    static std::vector<TorusPoint> test_points(std::size_t rank) {
        const std::vector<Rational> grid{Rational(1), Rational(2), Rational(-1), make_rational(1, 2), Rational(3)};
        std::vector<TorusPoint> out{TorusPoint{}};
        for (std::size_t i = 0; i < rank; ++i) {
            std::vector<TorusPoint> next;
            for (const auto& p : out)
                for (const auto& c : grid) {
                    TorusPoint q = p;
                    q.push_back(c);
                    next.push_back(std::move(q));
                }
            out = std::move(next);
        }
        return out;
    }

private:
    // Which convention gives [(1,0,q),(1,h0,f0)] = (1,0,q - q(P + h0 a')).
    CommutatorConvention detect_convention() const {
        Vars kv = kernel_vars();
        Poly z = Poly::variable(kv, "z"), p = Poly::variable(kv, "P");
        TorusPoint one(rank(), Rational(1));
        GElem a{one, Poly(kv), p.pow(2) + z};
        GElem b{one, z + Poly(kv, 1), p * z};
        Poly expected = a.f - substitute(a.f, std::vector<Poly>{z, p + b.h * a_prime_});
        GElem ai = g_inverse(a, *this), bi = g_inverse(b, *this);
        GElem abab = g_mul(g_mul(g_mul(a, b, *this), ai, *this), bi, *this);
        GElem aabb = g_mul(g_mul(g_mul(ai, bi, *this), a, *this), b, *this);
        if (abab.h.is_zero() && abab.f == expected) return CommutatorConvention::abab;
        if (aabb.h.is_zero() && aabb.f == expected) return CommutatorConvention::aabb;
        throw InternalFault("no commutator convention reproduces (1, 0, q - q(P + h0 a'))");
    }

    CharacterVector mu_, rho1_, rho2_, nu_;
    Poly a_prime_;
    std::vector<TorusPoint> points_;
    CommutatorConvention convention_ = CommutatorConvention::abab;
};

inline GElem g_mul(const GElem& a, const GElem& b, const GroupLaw& law) {
    if (a.torus.size() != law.rank() || b.torus.size() != law.rank())
        throw PreconditionFailed("element does not belong to this law");
    auto [h, f] = law.conjugate(b.torus, a.h, a.f);
    NElem n = n_mul_with(NElem{h, f}, NElem{b.h, b.f}, law.a_prime());
    TorusPoint t(a.torus.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = a.torus[i] * b.torus[i];
    return {std::move(t), std::move(n.h), std::move(n.f)};
}

inline GElem g_inverse(const GElem& a, const GroupLaw& law) {
    TorusPoint ti(a.torus.size());
    for (std::size_t i = 0; i < ti.size(); ++i) ti[i] = 1 / a.torus[i];
    NElem ni = n_inverse_with(NElem{a.h, a.f}, law.a_prime());
    auto [h, f] = law.conjugate(ti, ni.h, ni.f);
    return {std::move(ti), std::move(h), std::move(f)};
}

inline GElem commutator(const GElem& a, const GElem& b, const GroupLaw& law,
                        std::optional<CommutatorConvention> convention = std::nullopt) {
    GElem ai = g_inverse(a, law), bi = g_inverse(b, law);
    if (convention.value_or(law.convention()) == CommutatorConvention::abab)
        return g_mul(g_mul(g_mul(a, b, law), ai, law), bi, law);
    return g_mul(g_mul(g_mul(ai, bi, law), a, law), b, law);
}

/// b^-1 a b == a.
inline bool centralizes(const GElem& b, const GElem& a, const GroupLaw& law) {
    return g_mul(g_mul(g_inverse(b, law), a, law), b, law) == a;
}

// ---------------------------------------------------------------------------
// Witnesses for A[P] = Cent_G G^(2).

struct PresWitness {
    unsigned i;   // power of z
    unsigned j;   // q = z^i P^j up to a scalar
    GElem q;      // (1, 0, q) in G^(1)
    GElem value;  // [(1, 0, q), (1, h0, f0)] in G^(2)
};

struct PresWitnesses {
    GElem h0f0;                     // (1, h0, f0) in G^(1), h0 != 0
    std::vector<PresWitness> items;
};

inline PresWitnesses pres_lemma_witnesses(const GroupLaw& law) {
    Vars kv = kernel_vars();
    Poly z = Poly::variable(kv, "z"), p = Poly::variable(kv, "P");
    TorusPoint one(law.rank(), Rational(1));
    PresWitnesses w;

    // (1, h0, f0) from [(λ, 0, 0), (1, z^k, 0)] with the torus moving h.
    bool found = false;
    for (unsigned k = 0; k <= 2 && !found; ++k) {
        for (const auto& t : law.points()) {
            GElem c = commutator(law.element(t, Poly(kv), Poly(kv)), law.element(one, z.pow(k), Poly(kv)), law);
            if (!c.h.is_zero()) {
                w.h0f0 = c;
                found = true;
                break;
            }
        }
    }
    if (!found) throw PreconditionFailed("the torus acts trivially on G / A[P] at every test point");

    auto chi = [&](unsigned i, unsigned j) {
        return law.mu() * law.rho1().power(static_cast<long>(i)) * law.rho2().power(static_cast<long>(j));
    };
    auto nontrivial_point = [&](unsigned i, unsigned j) -> std::optional<TorusPoint> {
        for (const auto& t : law.points())
            if (chi(i, j)(t) != 1) return t;
        return std::nullopt;
    };
    std::optional<unsigned> base;
    for (unsigned i = 0; i <= 64 && !base; ++i) {
        bool all = true;
        for (unsigned j = 1; j <= 3; ++j)
            if (!nontrivial_point(i, j)) all = false;
        if (all) base = i;
    }
    if (!base) throw PreconditionFailed("mu rho1^i rho2^j is trivial on the test points for every i <= 64");

    for (unsigned i = *base; i <= *base + 2; ++i) {
        for (unsigned j = 1; j <= 3; ++j) {
            auto t = nontrivial_point(i, j);
            if (!t) continue;
            GElem g1 = commutator(law.element(*t, Poly(kv), Poly(kv)), law.element(one, Poly(kv), z.pow(i) * p.pow(j)), law);
            if (!GroupLaw::is_one(g1.torus) || !g1.h.is_zero() || g1.f.is_zero())
                throw InternalFault("torus commutator left the fiber");
            GElem g2 = commutator(g1, w.h0f0, law);
            Poly expected = g1.f - substitute(g1.f, std::vector<Poly>{z, p + w.h0f0.h * law.a_prime()});
            if (!g2.h.is_zero() || !(g2.f == expected) || !GroupLaw::is_one(g2.torus))
                throw InternalFault("G^(2) witness does not match q - q(P + h0 a')");
            w.items.push_back({i, j, std::move(g1), std::move(g2)});
        }
    }
    return w;
}

struct PresCandidateResult {
    GElem candidate;
    bool in_fiber;                 // torus 1 and h = 0
    bool passes;                   // centralizes every witness
    std::vector<unsigned> failed;  // witness families j that it fails
};

struct PresReport {
    bool fiber_centralizes;        // fiber test elements centralize all witnesses
    std::vector<PresCandidateResult> candidates;
    bool holds;                    // fiber_centralizes and passes == in_fiber for all candidates
};

inline PresReport verify_pres_lemma(const GroupLaw& law, const PresWitnesses& witnesses,
                                    const std::vector<GElem>& candidates) {
    Vars kv = kernel_vars();
    Poly z = Poly::variable(kv, "z"), p = Poly::variable(kv, "P");
    TorusPoint one(law.rank(), Rational(1));
    PresReport r{true, {}, true};
    std::vector<GElem> fiber{law.element(one, Poly(kv), p), law.element(one, Poly(kv), z * p.pow(2) + Poly(kv, 1)),
                             law.element(one, Poly(kv), z.pow(3) - p)};
    for (const auto& w : witnesses.items) fiber.push_back(w.value);
    for (const auto& f : fiber)
        for (const auto& w : witnesses.items)
            if (!centralizes(f, w.value, law)) r.fiber_centralizes = false;
    for (const auto& c : candidates) {
        PresCandidateResult cr{c, GroupLaw::is_one(c.torus) && c.h.is_zero(), true, {}};
        for (const auto& w : witnesses.items) {
            if (centralizes(c, w.value, law)) continue;
            cr.passes = false;
            if (std::find(cr.failed.begin(), cr.failed.end(), w.j) == cr.failed.end()) cr.failed.push_back(w.j);
        }
        std::sort(cr.failed.begin(), cr.failed.end());
        if (cr.passes != cr.in_fiber) r.holds = false;
        r.candidates.push_back(std::move(cr));
    }
    r.holds = r.holds && r.fiber_centralizes;
    return r;
}

// ---------------------------------------------------------------------------
// The same identities as honest compositions in 3-space.

inline Automorphism aut_commutator(const Automorphism& a, const Automorphism& b,
                                   CommutatorConvention c = CommutatorConvention::abab) {
    Automorphism ai = a.inverse(), bi = b.inverse();
    if (c == CommutatorConvention::abab) return compose(compose(compose(a, b), ai), bi);
    return compose(compose(compose(ai, bi), a), b);
}

struct CommutatorReport {
    Automorphism lhs;
    Automorphism rhs;
    bool holds;
};

/// [h*e o f*u', [P^2*u', e]] = (-2 h a'^2) * u'.
inline CommutatorReport char_commutator_check(const DeltaContext& ctx, const Poly& h, const Poly& f) {
    Automorphism outer = n_to_aut(make_nelem(h, f), ctx);
    Automorphism p2 = modification(ctx.p().pow(2), ctx.u_prime());
    Automorphism lhs = aut_commutator(outer, aut_commutator(p2, ctx.e()));
    Poly coeff = ctx.expand(embed(h, kernel_vars())) * ctx.a_prime().pow(2) * Rational(-2);
    Automorphism rhs = modification(coeff, ctx.u_prime());
    return {lhs, rhs, lhs == rhs};
}

struct NonfenceReport {
    Rational mu;    // t^*(d) = mu^-1 d, so t o (f*u') o t^-1 = (mu (t^-1)^*f) * u'
    Rational rho;   // t^*(v) = rho v
    Rational scalar;
    Automorphism lhs;
    Automorphism rhs;
    bool holds;
};

/// [t o f*u', [t^-1, v^k*u']] = (1 - μ(t^-1)ρ(t^-1)^k)(1 - μ(t)ρ(t)^k) v^k * u'.
inline NonfenceReport nonfence_commutator_check(const Automorphism& u_prime, const Poly& d, const Automorphism& t,
                                                const Poly& f, const Poly& v, unsigned k) {
    Derivation dp = generator_of(u_prime);
    if (!apply(dp, v).is_zero()) throw PreconditionFailed("v is not a kernel coordinate of u'");
    if (!commutes(t, modification(d, u_prime))) throw PreconditionFailed("t does not commute with d*u'");
    // The character in the formula is the one by which t rescales
    // modifications under conjugation, the inverse of the pullback scalar on d.
    Rational mu = 1 / mu_character(t, d);
    Rational rho = mu_character(t, v);
    Rational s = (1 - pow(mu, -1) * pow(rho, -static_cast<long>(k))) * (1 - mu * pow(rho, static_cast<long>(k)));
    Automorphism ti = t.inverse();
    Poly vk = v.pow(k);
    Automorphism lhs = aut_commutator(compose(t, modification(f, u_prime)), aut_commutator(ti, modification(vk, u_prime)));
    Automorphism rhs = modification(vk * s, u_prime);
    return {mu, rho, s, lhs, rhs, lhs == rhs};
}

}  // namespace lnd
