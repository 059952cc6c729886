#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lnd;

namespace {

Vars xyz() { return vars({"x", "y", "z"}); }
Poly P(std::string_view s) { return parse_poly(s, xyz()); }

TEST(Arith, DifferenceOfSquares) { EXPECT_EQ(P("(x+y)*(x-y)"), P("x^2 - y^2")); }

TEST(Arith, ZeroAbsorbs) { EXPECT_TRUE((P("x*z + y^2 + 3") * Poly(xyz())).is_zero()); }

TEST(Arith, SquareMatchesTermwiseExpansion) {
    Poly p = P("x*z + y^2");
    EXPECT_EQ(p * p, oracle::expand_product(p, p));
    EXPECT_EQ(p * p, P("x^2*z^2 + 2*x*y^2*z + y^4"));
}

TEST(Arith, RandomProductsMatchTermwiseExpansion) {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Poly a = rng.poly(xyz(), 4), b = rng.poly(xyz(), 4);
        EXPECT_EQ(a * b, oracle::expand_product(a, b));
    }
}

TEST(Arith, RingAxioms) {
    Rng rng(12);
    for (int i = 0; i < 30; ++i) {
        Poly a = rng.poly(xyz(), 3), b = rng.poly(xyz(), 3), c = rng.poly(xyz(), 3);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a + b, b + a);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(Arith, EvaluationIsAHomomorphism) {
    Rng rng(13);
    for (int i = 0; i < 30; ++i) {
        Poly a = rng.poly(xyz(), 3), b = rng.poly(xyz(), 3);
        std::vector<Rational> pt{rng.rational(), rng.rational(), rng.rational()};
        EXPECT_EQ(oracle::eval(a * b, pt), oracle::eval(a, pt) * oracle::eval(b, pt));
        EXPECT_EQ(oracle::eval(a + b, pt), oracle::eval(a, pt) + oracle::eval(b, pt));
    }
}

TEST(Substitute, PIsInvariantUnderExpDelta) {
    Poly p = P("x*z + y^2");
    std::vector<Poly> images{P("x - 2*y - z"), P("y + z"), P("z")};
    EXPECT_EQ(substitute(p, images), p);
}

TEST(Substitute, Identity) {
    Rng rng(14);
    Poly p = rng.poly(xyz(), 4);
    std::vector<Poly> id{P("x"), P("y"), P("z")};
    EXPECT_EQ(substitute(p, id), p);
}

TEST(Substitute, OddSignFlip) {
    Vars z = vars({"z"});
    Poly a = parse_poly("z^3 - z", z);
    EXPECT_EQ(substitute(a, std::vector<Poly>{parse_poly("-z", z)}), -a);
}

TEST(Substitute, AgreesWithPointEvaluation) {
    Rng rng(15);
    for (int i = 0; i < 20; ++i) {
        Poly p = rng.poly(xyz(), 3);
        std::vector<Poly> imgs{rng.poly(xyz(), 2), rng.poly(xyz(), 2), rng.poly(xyz(), 2)};
        std::vector<Rational> pt{rng.rational(), rng.rational(), rng.rational()};
        EXPECT_EQ(oracle::eval(substitute(p, imgs), pt), oracle::eval(p, oracle::eval_map(imgs, pt)));
    }
}

TEST(Calculus, PartialDerivatives) {
    EXPECT_EQ(partial_derivative(P("x*z + y^2"), "y"), P("2*y"));
    EXPECT_TRUE(partial_derivative(P("7/3"), "x").is_zero());
}

TEST(Calculus, IntegratePowersOfP) {
    Vars kv = vars({"z", "P"});
    for (unsigned i = 0; i < 6; ++i) {
        Poly pi = Poly::variable(kv, "P").pow(i);
        EXPECT_EQ(integrate_in(pi, "P"), Poly::variable(kv, "P").pow(i + 1) * make_rational(1, i + 1));
    }
    EXPECT_TRUE(integrate_in(Poly(kv), "P").is_zero());
}

TEST(Calculus, IntegrateThenDifferentiate) {
    Rng rng(16);
    for (int i = 0; i < 50; ++i) {
        Poly p = rng.poly(xyz(), 4);
        for (const char* v : {"x", "y", "z"}) EXPECT_EQ(partial_derivative(integrate_in(p, v), v), p);
    }
}

TEST(Calculus, DifferentiateThenIntegrateWithoutConstantTerm) {
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
        Poly p = rng.poly(xyz(), 4);
        Poly no_const = p - substitute(p, std::vector<Poly>{P("0"), P("y"), P("z")});
        EXPECT_EQ(integrate_in(partial_derivative(no_const, "x"), "x"), no_const);
    }
}

// Euclid on dense coefficient vectors, lowest degree first.
std::vector<Rational> univariate_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    auto trim = [](std::vector<Rational>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        while (a.size() >= b.size() && !a.empty()) {
            Rational f = a.back() / b.back();
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
            trim(a);
        }
        std::swap(a, b);
    }
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
    return a;
}

TEST(Gcd, UnivariateAgainstEuclid) {
    Vars z = vars({"z"});
    Poly g = gcd(parse_poly("z^2", z), parse_poly("z^3 - z^2", z));
    EXPECT_EQ(g, parse_poly("z^2", z));
    auto e = univariate_gcd({0, 0, 1}, {0, 0, -1, 1});
    Poly from_euclid(z);
    for (std::size_t i = 0; i < e.size(); ++i) from_euclid += Poly::variable(z, "z").pow(static_cast<unsigned>(i)) * e[i];
    EXPECT_EQ(g, from_euclid);
}

TEST(Gcd, RandomUnivariateAgainstEuclid) {
    Vars z = vars({"z"});
    Rng rng(18);
    for (int i = 0; i < 30; ++i) {
        Poly common = rng.nonzero_poly(z, 2), a = rng.nonzero_poly(z, 3) * common, b = rng.nonzero_poly(z, 3) * common;
        auto dense = [&](const Poly& p) {
            std::vector<Rational> v(static_cast<std::size_t>(p.total_degree()) + 1, Rational(0));
            for (const auto& t : p.terms()) v[t.mono[0]] = t.coef;
            return v;
        };
        auto e = univariate_gcd(dense(a), dense(b));
        Poly expect(z);
        for (std::size_t k = 0; k < e.size(); ++k) expect += Poly::variable(z, "z").pow(static_cast<unsigned>(k)) * e[k];
        EXPECT_EQ(gcd(a, b), expect);
    }
}

TEST(Gcd, WithZeroIsNormalized) {
    EXPECT_EQ(gcd(P("-3*x*z + 6"), Poly(xyz())), P("x*z - 2"));
}

TEST(Gcd, ContentOfZDelta) { EXPECT_EQ(gcd(P("-2*y*z"), P("z*z")), P("z")); }

TEST(Gcd, DividesBothAndScalesWithCommonFactor) {
    Rng rng(19);
    for (int i = 0; i < 30; ++i) {
        Poly p = rng.nonzero_poly(xyz(), 2), q = rng.nonzero_poly(xyz(), 2), r = rng.nonzero_poly(xyz(), 2);
        Poly g = gcd(p, q);
        EXPECT_TRUE(divides(g, p));
        EXPECT_TRUE(divides(g, q));
        EXPECT_EQ(gcd(p * r, q * r), (g * r).monic());
    }
}

TEST(Divide, ExactQuotients) {
    EXPECT_EQ(divide_exact(P("x^2*z^2 + 2*x*y^2*z + y^4"), P("x*z + y^2")), P("x*z + y^2"));
    Poly p = P("x^3 - 2*y*z + 1/2");
    EXPECT_EQ(divide_exact(p, P("1")), p);
    EXPECT_THROW(divide_exact(P("z + 1"), P("z")), NotDivisible);
    EXPECT_THROW(divide_exact(P("z + 1"), Poly(xyz())), DivisionByZero);
}

TEST(Divide, RandomProductsDivide) {
    Rng rng(20);
    for (int i = 0; i < 30; ++i) {
        Poly a = rng.nonzero_poly(xyz(), 3), b = rng.nonzero_poly(xyz(), 3);
        EXPECT_EQ(divide_exact(oracle::expand_product(a, b), b), a);
    }
}

TEST(Print, CanonicalRoundtrip) {
    Rng rng(21);
    for (int i = 0; i < 50; ++i) {
        Poly p = rng.poly(xyz(), 4) * rng.nonzero_rational();
        std::string s = to_string(p);
        EXPECT_EQ(to_string(parse_poly(s, xyz())), s);
        EXPECT_EQ(parse_poly(s, xyz()), p);
    }
}

TEST(Print, GradedLexOrder) { EXPECT_EQ(to_string(P("z + y^2 + x*z + 1")), "x*z + y^2 + z + 1"); }

TEST(Parse, Diagnostics) {
    EXPECT_THROW(parse_poly("x +", xyz()), ParseError);
    EXPECT_THROW(parse_poly("w", xyz()), ParseError);
    EXPECT_THROW(parse_poly("x^-1", xyz()), ParseError);
    EXPECT_THROW(parse_poly(std::string(1000, '(') + "x" + std::string(1000, ')'), xyz()), ParseError);
    EXPECT_THROW(parse_poly("(x+y+z+1)^100000", xyz()), ParseError);
    EXPECT_EQ(parse_poly("5/7*x - 3", xyz()), P("x*5/7 - 3"));
}

TEST(WorkLimit, CountsTermProductsAndRestores) {
    Poly a = P("x + y + z + 1");
    {
        WorkLimit outer(0);
        Poly b = a * a;  // 16 products
        EXPECT_EQ(outer.used(), 16u);
        {
            WorkLimit inner(20);
            EXPECT_NO_THROW(b = a * a);
            EXPECT_THROW(b = a * a, ResourceLimit);
        }
        EXPECT_EQ(outer.used(), 16u);
        EXPECT_NO_THROW(a.pow(20));
    }
}

}  // namespace
