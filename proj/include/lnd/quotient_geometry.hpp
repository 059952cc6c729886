#pragma once

// The quotient plane with coordinates (y, z): divisors div(a), vertical
// fences, divisor-preserving and inert plane automorphisms, the affine
// symmetries of a root divisor on the z-line, and lifts to 3-space.

#include "lnd/unipotent.hpp"

#include <numeric>
#include <optional>
#include <vector>

namespace lnd {

inline Vars plane_vars() { return vars({"y", "z"}); }

/// Plane automorphisms are automorphisms over the variable list (y, z).
using PlaneAut = Automorphism;

class PlaneDivisor {
public:
    explicit PlaneDivisor(const Poly& a) {
        if (a.is_zero()) throw PreconditionFailed("div(0) is not a divisor");
        try {
            a_ = embed(a, plane_vars()).monic();
        } catch (const UnknownVariable&) {
            throw PreconditionFailed("divisor polynomial must be in y, z: " + to_string(a));
        }
    }
    const Poly& poly() const { return a_; }
    friend bool operator==(const PlaneDivisor&, const PlaneDivisor&) = default;

private:
    Poly a_;
};

inline PlaneAut make_plane_aut(const Poly& y_image, const Poly& z_image) {
    Vars v = plane_vars();
    return Automorphism::from_images(v, {embed(y_image, v), embed(z_image, v)});
}

/// div(a) is a disjoint union of lines z = c.
inline bool is_vertical_fence(const Poly& a) {
    if (a.is_zero()) throw PreconditionFailed("div(0) is not a divisor");
    return a.only_uses({"z"});
}

/// lambda with g^*(a) = lambda a, if any.
inline std::optional<Rational> preserves_divisor(const PlaneAut& g, const PlaneDivisor& div) {
    Poly ga = g.pullback(div.poly());
    if (ga.is_zero()) return std::nullopt;
    Rational c = ga.leading_coefficient();  // div.poly() is monic
    if (ga == div.poly() * c) return c;
    return std::nullopt;
}

/// g preserves div(a) and restricts to the identity on it.
inline bool is_inert(const PlaneAut& g, const PlaneDivisor& div) {
    if (!preserves_divisor(g, div)) throw PreconditionFailed("automorphism does not preserve the divisor");
    Vars v = plane_vars();
    return divides(div.poly(), g.image("y") - Poly::variable(v, "y")) &&
           divides(div.poly(), g.image("z") - Poly::variable(v, "z"));
}

// ---------------------------------------------------------------------------
// Q[t]/(Φ_e(t)), enough to test a(ζt) = ζ^k a(t) exactly.

namespace detail {

using Dense = std::vector<Rational>;  // coefficient of t^i at index i

inline void trim(Dense& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Dense dense_mul(const Dense& a, const Dense& b) {
    if (a.empty() || b.empty()) return {};
    Dense out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

// Quotient and remainder of a by a monic b.
inline std::pair<Dense, Dense> dense_divmod(Dense a, const Dense& b) {
    trim(a);
    if (a.size() < b.size()) return {{}, a};
    Dense q(a.size() - b.size() + 1);
    for (std::size_t shift = q.size(); shift-- > 0;) {
        Rational c = a[shift + b.size() - 1];
        q[shift] = c;
        if (c != 0)
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    }
    trim(a);
    trim(q);
    return {q, a};
}

}  // namespace detail

/// Φ_e by the sieve Φ_e = (t^e - 1) / prod_{d | e, d < e} Φ_d.
inline std::vector<Rational> cyclotomic_polynomial(unsigned e) {
    if (e == 0) throw PreconditionFailed("cyclotomic polynomial of order 0");
    detail::Dense num(e + 1);
    num[0] = -1;
    num[e] = 1;
    for (unsigned d = 1; d < e; ++d) {
        if (e % d != 0) continue;
        auto [q, r] = detail::dense_divmod(num, cyclotomic_polynomial(d));
        if (!r.empty()) throw InternalFault("cyclotomic sieve left a remainder");
        num = q;
    }
    return num;
}

/// Arithmetic in Q[t]/(Φ_e); elements are reduced coefficient vectors.
class CyclotomicRing {
public:
    explicit CyclotomicRing(unsigned e) : e_(e), modulus_(cyclotomic_polynomial(e)) {}

    unsigned order() const { return e_; }
    std::size_t dimension() const { return modulus_.size() - 1; }

    std::vector<Rational> reduce(std::vector<Rational> p) const { return detail::dense_divmod(std::move(p), modulus_).second; }

    /// ζ^k for the class ζ of t.
    std::vector<Rational> zeta_power(unsigned k) const {
        std::vector<Rational> p(k % e_ + 1);
        p[k % e_] = 1;
        return reduce(std::move(p));
    }

    std::vector<Rational> mul(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
        return reduce(detail::dense_mul(a, b));
    }

    bool equal(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
        auto x = reduce(a), y = reduce(b);
        return x == y;
    }

private:
    unsigned e_;
    std::vector<Rational> modulus_;
};

/// a(ζ t) = ζ^k a(t) for a primitive e-th root of unity ζ, checked
/// coefficientwise in Q[ζ] = Q[t]/(Φ_e). `a` is univariate in z.
inline bool cyclotomic_symmetry_holds(const Poly& a, unsigned e, unsigned k) {
    CyclotomicRing ring(e);
    auto zk = ring.zeta_power(k);
    std::size_t zi = a.vars()->require("z");
    for (const auto& t : a.terms()) {
        // c ζ^n vs c ζ^k
        auto lhs = ring.zeta_power(t.mono[zi]);
        for (auto& c : lhs) c *= t.coef;
        auto rhs = zk;
        for (auto& c : rhs) c *= t.coef;
        if (!ring.equal(lhs, rhs)) return false;
    }
    return true;
}

struct DivisorSymmetry {
    Rational center;               // μ
    std::optional<unsigned> order; // e; nullopt for the torus case
    unsigned lambda_exponent = 0;  // k0 with λ = α^k0
    Poly recentered;               // a(z + μ)
    bool verified = false;
};

/// Affine symmetries z -> αz + β of the root divisor of a(z).
inline DivisorSymmetry affine_symmetries(const Poly& a_in) {
    Vars v = vars({"z"});
    Poly a;
    try {
        a = embed(a_in, v);
    } catch (const UnknownVariable&) {
        throw PreconditionFailed("affine symmetries need a polynomial in z alone");
    }
    int deg = a.total_degree();
    if (deg < 1) throw PreconditionFailed("affine symmetries need deg(a) >= 1");
    Rational cd = a.coefficient(Monomial::unit(0, static_cast<unsigned>(deg)));
    Rational cd1 = a.coefficient(Monomial::unit(0, static_cast<unsigned>(deg - 1)));
    DivisorSymmetry s;
    s.center = -cd1 / (Rational(deg) * cd);
    Poly z = Poly::variable(v, "z");
    s.recentered = substitute(a, std::vector<Poly>{z + Poly(v, s.center)});
    std::vector<unsigned> support;
    for (const auto& t : s.recentered.terms()) support.push_back(t.mono[0]);
    if (support.size() == 1) {
        s.lambda_exponent = support.front();
        // every scaling t -> αt multiplies the monomial by α^k0
        s.verified = s.recentered == Poly::monomial(v, Monomial::unit(0, support.front()), s.recentered.leading_coefficient());
        return s;
    }
    unsigned e = 0;
    for (auto x : support) e = std::gcd(e, x > support.front() ? x - support.front() : support.front() - x);
    s.order = e;
    s.lambda_exponent = support.front() % e;
    if (e <= 2) {
        Poly flipped = substitute(s.recentered, std::vector<Poly>{z * Rational(e == 2 ? -1 : 1)});
        Rational sign = (e == 2 && s.lambda_exponent % 2 == 1) ? Rational(-1) : Rational(1);
        s.verified = flipped == s.recentered * sign;
    } else {
        s.verified = cyclotomic_symmetry_holds(s.recentered, e, s.lambda_exponent);
    }
    return s;
}

/// Whether some primitive order-e scaling preserves the recentered divisor.
inline bool has_symmetry_of_order(const Poly& recentered, unsigned e) {
    for (unsigned k = 0; k < e; ++k)
        if (cyclotomic_symmetry_holds(recentered, e, k)) return true;
    return false;
}

/// σ = (λx, g(y, z)) on 3-space, checked to commute with (x + a, y, z).
inline Automorphism lift_to_H(const PlaneAut& g, const PlaneDivisor& div) {
    auto lambda = preserves_divisor(g, div);
    if (!lambda) throw PreconditionFailed("automorphism does not preserve the divisor");
    Vars v = vars({"x", "y", "z"});
    Poly x = Poly::variable(v, "x");
    Automorphism sigma = Automorphism::from_images(v, {x * *lambda, embed(g.image("y"), v), embed(g.image("z"), v)});
    if (g.has_inverse()) {
        Automorphism gi = g.inverse();
        sigma = Automorphism::with_inverse(v, sigma.images(),
                                           {x * Rational(1 / *lambda), embed(gi.image("y"), v), embed(gi.image("z"), v)});
    }
    Automorphism u = Automorphism::from_images(v, {x + embed(div.poly(), v), Poly::variable(v, "y"), Poly::variable(v, "z")});
    if (!commutes(sigma, u)) throw InternalFault("lift does not commute with the modified translation");
    return sigma;
}

/// The shear (y + a(z), z) for a vertical fence div(a).
inline PlaneAut fence_unipotent_witness(const PlaneDivisor& div) {
    const Poly& a = div.poly();
    if (!is_vertical_fence(a)) throw PreconditionFailed("divisor " + to_string(a) + " is not a vertical fence");
    if (a.degree_in("z") < 1) throw PreconditionFailed("the empty divisor has no fence witness");
    Vars v = plane_vars();
    PlaneAut sigma = exponential(a * Derivation::partial(v, "y"));
    auto lambda = preserves_divisor(sigma, div);
    if (!lambda || *lambda != 1) throw InternalFault("fence witness does not fix the divisor");
    logarithm(sigma);  // unipotent
    return sigma;
}

struct FixedSchemeReport {
    bool fixes;                 // witness is inert on div(a)
    std::vector<Poly> moved;    // m with div(a m) not fixed pointwise
    std::vector<Poly> not_moved;
};

/// The witness shear fixes div(a) pointwise and moves each div(a m) for the
/// supplied non-constant m.
inline FixedSchemeReport fixed_scheme_check(const PlaneDivisor& div, const std::vector<Poly>& family) {
    PlaneAut sigma = fence_unipotent_witness(div);
    FixedSchemeReport r{is_inert(sigma, div), {}, {}};
    for (const auto& m : family) {
        Poly mm = embed(m, plane_vars());
        if (mm.is_constant()) throw PreconditionFailed("family members must be non-constant");
        PlaneDivisor bigger(div.poly() * mm);
        bool fixed = preserves_divisor(sigma, bigger) && is_inert(sigma, bigger);
        (fixed ? r.not_moved : r.moved).push_back(mm);
    }
    return r;
}

}  // namespace lnd
