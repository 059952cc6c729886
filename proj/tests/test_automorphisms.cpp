#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lnd;

namespace {

Vars xyz() { return ambient_vars(); }
Poly P(std::string_view s) { return parse_poly(s, xyz()); }
Automorphism aut(std::string_view a, std::string_view b, std::string_view c) {
    return Automorphism::from_images(xyz(), {P(a), P(b), P(c)});
}
Derivation der(std::string_view a, std::string_view b, std::string_view c) { return Derivation(xyz(), {P(a), P(b), P(c)}); }
Derivation delta() { return der("-2*y", "z", "0"); }
Derivation dx() { return Derivation::partial(xyz(), "x"); }

// The corpus of locally nilpotent derivations used by the group-law checks.
std::vector<Derivation> lnd_corpus() {
    return {dx(), der("z^2 + 1", "0", "0"), der("y*z^2", "0", "0"), delta(), P("z") * delta()};
}

TEST(Compose, Examples) {
    Automorphism t = aut("x + 1", "y", "z");
    EXPECT_EQ(compose(t, Automorphism::identity(xyz())), t);
    EXPECT_EQ(compose(t, t), aut("x + 2", "y", "z"));
    EXPECT_TRUE(compose(exponential(delta()), exponential(-delta())).is_identity());
}

TEST(Compose, ConventionIsPullbackOrder) {
    // (g o h)^*(p) = h^*(g^*(p)), checked at points.
    Rng rng(41);
    for (int i = 0; i < 20; ++i) {
        auto r = [&] { return Automorphism::from_images(xyz(), {rng.poly(xyz(), 2), rng.poly(xyz(), 2), rng.poly(xyz(), 2)}); };
        Automorphism g = r(), h = r();
        std::vector<Rational> pt{rng.rational(), rng.rational(), rng.rational()};
        auto via_h = oracle::eval_map(h.images(), pt);
        EXPECT_EQ(oracle::eval_map(compose(g, h).images(), pt), oracle::eval_map(g.images(), via_h));
    }
}

TEST(Compose, ExpWordAgreesWithSubstitution) {
    // The factored pullback and plain substitution compute the same map.
    Rng rng(42);
    auto corpus = lnd_corpus();
    for (int i = 0; i < 20; ++i) {
        Automorphism a = exponential(corpus[static_cast<std::size_t>(rng.uniform(0, 4))] * rng.nonzero_rational(4));
        Automorphism b = exponential(corpus[static_cast<std::size_t>(rng.uniform(0, 4))] * rng.nonzero_rational(4));
        Automorphism fast = compose(a, b), slow = compose(a.images_only(), b.images_only());
        EXPECT_EQ(fast, slow);
        Poly p = rng.poly(xyz(), 3);
        EXPECT_EQ(fast.pullback(p), slow.pullback(p));
    }
}

TEST(OneParameterGroup, RandomTimes) {
    Rng rng(43);
    for (const auto& d : lnd_corpus())
        for (int i = 0; i < 10; ++i) {
            Rational s = rng.rational(), t = rng.rational();
            Automorphism lhs = compose(exponential(d * s), exponential(d * t));
            EXPECT_EQ(lhs.images(), exponential(d * (s + t)).images());
            EXPECT_EQ(lhs.images(), oracle::exp_images(d * (s + t)));
        }
}

TEST(ExpLog, RoundtripOnCorpusAndTriangular) {
    for (const auto& d : lnd_corpus()) {
        EXPECT_EQ(logarithm(exponential(d).images_only()), d);
        Automorphism u = exponential(d);
        EXPECT_EQ(exponential(logarithm(u.images_only())), u);
    }
    Rng rng(44);
    for (int i = 0; i < 30; ++i) {
        Derivation d(xyz(), {rng.poly(xyz(), 3, 9, {"y", "z"}), rng.poly(xyz(), 3, 9, {"z"}), Poly(xyz(), rng.rational())});
        EXPECT_EQ(logarithm(exponential(d).images_only()), d);
    }
}

TEST(Inverse, Examples) {
    EXPECT_EQ(inverse_unipotent(aut("x + 1", "y", "z")), aut("x - 1", "y", "z"));
    EXPECT_EQ(inverse_unipotent(exponential(delta()).images_only()).images(),
              (std::vector<Poly>{P("x + 2*y - z"), P("y - z"), P("z")}));
    EXPECT_THROW(inverse_unipotent(aut("2*x", "y", "z")), NotUnipotent);
}

TEST(Inverse, TriangularWitness) {
    Automorphism g = aut("2*x + y^2*z", "y - z^3", "1/2*z");
    Automorphism gi = g.inverse();
    EXPECT_TRUE(compose(g, gi).is_identity());
    EXPECT_TRUE(compose(gi, g).is_identity());
    EXPECT_THROW(aut("x + y^2", "y + x^2", "z").inverse(), PreconditionFailed);
}

TEST(Inverse, ExplicitWitnessIsChecked) {
    auto imgs = std::vector<Poly>{P("x + y^2"), P("y"), P("z")};
    EXPECT_NO_THROW(Automorphism::with_inverse(xyz(), imgs, {P("x - y^2"), P("y"), P("z")}));
    EXPECT_THROW(Automorphism::with_inverse(xyz(), imgs, {P("x + y^2"), P("y"), P("z")}), PreconditionFailed);
}

TEST(Commutes, Examples) {
    EXPECT_TRUE(commutes(exponential(delta()), exponential(P("z") * delta())));
    EXPECT_TRUE(commutes(aut("x", "z", "y"), aut("x + 1", "y", "z")));
    EXPECT_FALSE(commutes(aut("y", "x", "z"), aut("x + 1", "y", "z")));
}

TEST(Modification, Examples) {
    Automorphism u = exponential(delta());
    EXPECT_EQ(modification(P("1"), u), u);
    EXPECT_EQ(modification(P("z"), u), exponential(P("z") * delta()));
    EXPECT_THROW(modification(P("x"), aut("x + 1", "y", "z")), PreconditionFailed);
}

TEST(MuCharacter, Examples) {
    EXPECT_EQ(mu_character(Automorphism::identity(xyz()), P("z^2 + 1")), 1);
    Automorphism g = aut("x", "y", "-z");
    EXPECT_EQ(mu_character(g, P("z^2")), 1);
    EXPECT_EQ(mu_character(g, P("z^3")), -1);
    EXPECT_THROW(mu_character(aut("x", "y", "z + 1"), P("z")), PreconditionFailed);
}

TEST(Conjugation, Examples) {
    Automorphism up = exponential(dx());
    auto id = conjugation_formula_check(Automorphism::identity(xyz()), P("z"), up, P("z^2"));
    EXPECT_TRUE(id.holds);
    auto r = conjugation_formula_check(aut("x", "y", "-z"), P("z"), up, P("z^2"));
    EXPECT_EQ(r.mu, 1);
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.rhs, modification(P("-z"), up));
}

TEST(Conjugation, ByElementsOfN) {
    DeltaContext ctx = make_context(P("x*z + y^2"), P("1"), 3);
    Rng rng(45);
    Vars kv = kernel_vars();
    for (int i = 0; i < 5; ++i) {
        Automorphism g = n_to_aut(make_nelem(rng.poly(kv, 2, 5, {"z"}), rng.poly(kv, 2, 5)), ctx);
        auto r = conjugation_formula_check(g, ctx.p(), ctx.u_prime(), ctx.d());
        EXPECT_TRUE(r.holds);
        // Oracle: conjugating directly at a point.
        std::vector<Rational> pt{rng.rational(), rng.rational(), rng.rational()};
        Automorphism lhs = compose(compose(g.inverse(), modification(ctx.p(), ctx.u_prime())), g);
        EXPECT_EQ(oracle::eval_map(lhs.images(), pt), oracle::eval_map(r.rhs.images(), pt));
    }
}

TEST(Conjugation, ScalingCharacterIsInverted) {
    // g = (2x, y, 2z) commutes with z*(x+1, y, z); by hand,
    // g^-1 o (f*u') o g sends x to x + g^*(f)/2.
    Automorphism up = exponential(dx());
    Automorphism g = aut("2*x", "y", "2*z");
    ASSERT_TRUE(commutes(g, modification(P("z"), up)));
    auto r = conjugation_formula_check(g, P("y + z"), up, P("z"));
    EXPECT_EQ(r.mu, 2);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.literal_form_holds);
    EXPECT_EQ(r.rhs, modification(P("1/2*y + z"), up));
}

}  // namespace
