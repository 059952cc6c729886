// Acceptance run: one line per criterion with its wall time against the limit.
// Usage: acceptance <path to lnd cli> <corpus dir>

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace lnd;
namespace fs = std::filesystem;

namespace {

Vars xyz() { return ambient_vars(); }
Poly X(std::string_view s) { return parse_poly(s, xyz()); }
Poly K(std::string_view s) { return parse_poly(s, kernel_vars()); }
Derivation der(std::string_view a, std::string_view b, std::string_view c) { return Derivation(xyz(), {X(a), X(b), X(c)}); }
Derivation delta() { return der("-2*y", "z", "0"); }

std::vector<Derivation> lnd_corpus() {
    return {Derivation::partial(xyz(), "x"), der("z^2 + 1", "0", "0"), der("y*z^2", "0", "0"), delta(), X("z") * delta()};
}

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

const DeltaContext& family() {
    static const DeltaContext c = make_context(X("x*z + y^2"), X("1"), 3);
    return c;
}

// ---------------------------------------------------------------------------

std::string one_parameter_group() {
    Rng rng(1001);
    unsigned n = 0;
    for (const auto& d : lnd_corpus())
        for (int i = 0; i < 100; ++i, ++n) {
            Rational s = rng.rational(), t = rng.rational();
            Automorphism lhs = compose(exponential(d * s).images_only(), exponential(d * t).images_only());
            require(lhs == exponential(d * (s + t)), "Exp(sD) o Exp(tD) != Exp((s+t)D) for D = " + to_string(d));
        }
    return std::to_string(n) + " (D, s, t) triples";
}

std::string exp_log_roundtrip() {
    std::vector<Derivation> sample = lnd_corpus();
    Rng rng(1002);
    for (int i = 0; i < 100; ++i)
        sample.emplace_back(xyz(), std::vector<Poly>{rng.poly(xyz(), 3, 9, {"y", "z"}), rng.poly(xyz(), 3, 9, {"z"}),
                                                     Poly(xyz(), rng.rational())});
    for (const auto& d : sample) {
        Automorphism u = exponential(d).images_only();
        require(logarithm(u) == d, "log(Exp(D)) != D for D = " + to_string(d));
        require(exponential(logarithm(u)) == u, "Exp(log u) != u for D = " + to_string(d));
    }
    return std::to_string(sample.size()) + " derivations";
}

std::string delta_suite() {
    Automorphism u = exponential(delta());
    require(u.images() == std::vector<Poly>{X("x - 2*y - z"), X("y + z"), X("z")}, "Exp(Δ_P) images");
    require(u.images() == oracle::exp_images(delta()), "Exp(Δ_P) against truncated series");
    PlinthResult pr = plinth_search(delta(), {X("z"), X("x*z + y^2")}, 3);
    require(pr.a == X("z") && apply(delta(), pr.q - X("y")).is_zero(), "plinth (Q, a) = (y, z)");
    require(oracle::attainable_plinths(delta(), 3, {X("1")}).empty(), "brute force: unit plinth attainable");
    auto basis = oracle::attainable_plinths(delta(), 3, {X("1"), X("z")});
    require(basis.size() == 1 && basis[0].monic() == X("z"), "brute force: degree-1 plinths are not <z>");
    Derivation e = -Derivation::partial(xyz(), "x");
    require(family().e_der() == e, "E = -d/dx");
    require(apply(e, X("x*z + y^2")) == X("-z"), "E(P) = -z");
    require(lie_bracket(delta(), e).is_zero(), "[D, E] = 0");
    require(is_irreducible(e), "E irreducible");
    return "Exp, plinth (brute force over deg <= 3), complement";
}

std::string standard_decompositions() {
    auto a = standard_decomposition(exponential(X("z") * delta()));
    require(a.d == X("z") && a.u_prime == exponential(delta()), "z * Exp(Δ_P)");
    auto b = standard_decomposition(exponential(der("z^2 + 1", "0", "0")));
    require(b.d == X("z^2 + 1") && b.u_prime.images() == std::vector<Poly>{X("x + 1"), X("y"), X("z")},
            "(z^2+1) d/dx");
    return "2 decompositions";
}

std::string ad_identity() {
    Rng rng(1005);
    for (int i = 0; i < 50; ++i) {
        Poly h = rng.poly(kernel_vars(), 3, 9, {"z"}), f = rng.poly(kernel_vars(), 3);
        Poly hh = family().expand(h), ff = family().expand(f);
        for (const auto& row : ad_identity_check(family(), h, f, 4)) {
            Poly coeff = hh.pow(row.q) * apply_power(family().e_der(), ff, row.q) * Rational(row.q % 2 ? -1 : 1);
            require(row.holds && row.rhs == coeff * family().d_prime(),
                    "q = " + std::to_string(row.q) + ", h = " + to_string(h) + ", f = " + to_string(f));
        }
    }
    return "50 (h, f) x q = 0..4";
}

std::string n_group() {
    Rng rng(1006);
    auto r = [&] { return make_nelem(rng.poly(kernel_vars(), 3, 9, {"z"}), rng.poly(kernel_vars(), 3)); };
    const DeltaContext& c = family();
    for (int i = 0; i < 200; ++i) {
        NElem a = r(), b = r();
        Automorphism ga = n_to_aut(a, c), gb = n_to_aut(b, c);
        Automorphism prod = c.order() == CompositionOrder::same ? compose(ga, gb) : compose(gb, ga);
        require(n_to_aut(n_mul(a, b, c), c) == prod, "homomorphism at " + to_string(a) + ", " + to_string(b));
        require(aut_to_n(ga, c) == a, "aut_to_n(n_to_aut(n)) != n for " + to_string(a));
        require(commutes(ga, c.u()) && commutes(ga, c.u_prime()), "image does not commute with u, u'");
        exp_m_decompose(a, c);
    }
    return "200 pairs, " + to_string(c.order());
}

std::string sat_instances() {
    Rng rng(1007);
    Vars kv = kernel_vars();
    auto kernel_elem = [&](unsigned deg) {
        return substitute(rng.nonzero_poly(kv, deg, 5), std::vector<Poly>{X("z"), X("x*z + y^2")});
    };
    for (int i = 0; i < 100; ++i) {
        Derivation f_der, b;
        Poly f;
        if (i % 2 == 0) {
            f_der = delta();
            b = kernel_elem(2) * delta();
            f = kernel_elem(2);
        } else {
            Poly c1 = rng.nonzero_poly(xyz(), 2, 5, {"y", "z"});
            f_der = Derivation(xyz(), {c1, Poly(xyz()), Poly(xyz())});
            b = Derivation(xyz(), {rng.poly(xyz(), 2, 5, {"y", "z"}), Poly(xyz()), Poly(xyz())});
            f = rng.poly(xyz(), 2, 5, {"y", "z"});
        }
        SatReport s = sat_instance_check(b, f_der, f);
        require(s.identity_holds && s.bracket_zero && s.conclusion_holds, "positive case " + std::to_string(i));
    }
    std::vector<Derivation> bs{Derivation::partial(xyz(), "z"), -Derivation::partial(xyz(), "x"), Derivation::partial(xyz(), "y")};
    for (int i = 0; i < 20; ++i) {
        // P^2 cannot cancel against a degree-1 kernel element, so B(f) != 0 for
        // every B below that moves P.
        Poly f = kernel_elem(1) + X("x*z + y^2").pow(2);
        const Derivation& b = bs[static_cast<std::size_t>(i % 3)];
        SatReport s = sat_instance_check(b, delta(), f);
        require(s.identity_holds && !s.bracket_zero && (!s.b_of_f.is_zero() || !s.f_bracket_b.is_zero()),
                "negative case " + std::to_string(i) + " reports no obstruction");
    }
    return "100 positive, 20 negative";
}

std::string irreducibility() {
    Rng rng(1008);
    Vars kv = kernel_vars();
    int coprime = 0, tries = 0;
    while (coprime < 100) {
        require(++tries < 10000, "could not sample coprime pairs");
        NElem n = make_nelem(rng.poly(kv, 3, 9, {"z"}), rng.poly(kv, 3));
        if (n.h.is_zero() && n.f.is_zero()) continue;
        if (!gcd(n.h, n.f).is_constant()) continue;
        CriterionReport r = irreducibility_criterion_check(family(), n);
        require(r.irreducible && r.holds, "coprime pair gave a reducible derivation: " + to_string(n));
        ++coprime;
    }
    for (int i = 0; i < 20; ++i) {
        Poly c = rng.nonzero_poly(kv, 2, 5, {"z"});
        if (c.is_constant()) c += K("z");
        NElem n = make_nelem(c * rng.nonzero_poly(kv, 2, 5, {"z"}), c * rng.nonzero_poly(kv, 2, 5));
        CriterionReport r = irreducibility_criterion_check(family(), n);
        require(!r.irreducible && r.content_predicted && r.stripped, "content of " + to_string(n));
    }
    return "100 coprime, 20 with common factor";
}

std::string divisor_symmetries() {
    Vars z = vars({"z"});
    DivisorSymmetry a = affine_symmetries(parse_poly("z^3 - z", z));
    require(a.center == 0 && a.order == std::optional<unsigned>(2) && a.lambda_exponent % 2 == 1 && a.verified,
            "z^3 - z");
    require(substitute(parse_poly("z^3 - z", z), std::vector<Poly>{parse_poly("-z", z)}) == parse_poly("z - z^3", z),
            "oracle a(-z) = -a(z)");
    DivisorSymmetry b = affine_symmetries(parse_poly("z^3 + 1", z));
    require(b.center == 0 && b.order == std::optional<unsigned>(3) && b.verified, "z^3 + 1");
    require(oracle::cube_root_symmetry(parse_poly("z^3 + 1", z), 0, b.lambda_exponent), "oracle in Q[t]/(t^2+t+1)");
    DivisorSymmetry c = affine_symmetries(parse_poly("z^2", z));
    require(c.center == 0 && !c.order && c.verified, "z^2 torus case");
    return "z^3 - z, z^3 + 1, z^2";
}

std::string group_model() {
    GroupLaw law = GroupLaw::make(CharacterVector{{-2}}, CharacterVector{{1}}, CharacterVector{{2}}, std::nullopt, K("z"));
    Rng rng(1010);
    TorusPoint one{Rational(1)};
    for (int i = 0; i < 50; ++i) {
        Poly q = rng.poly(kernel_vars(), 3), h0 = rng.poly(kernel_vars(), 2, 9, {"z"}), f0 = rng.poly(kernel_vars(), 2);
        GElem c = commutator(law.element(one, Poly(kernel_vars()), q), law.element(one, h0, f0), law);
        Poly expected = q - substitute(q, std::vector<Poly>{K("z"), K("P") + h0 * K("z")});
        require(c == law.element(one, Poly(kernel_vars()), expected), "commutator for q = " + to_string(q));
    }
    PresWitnesses w = pres_lemma_witnesses(law);
    std::vector<GElem> cands{law.element({Rational(2)}, K("0"), K("0")), law.element(one, K("1"), K("0")),
                             law.element(one, K("0"), K("P")), law.identity()};
    PresReport pr = verify_pres_lemma(law, w, cands);
    require(pr.holds && !pr.candidates[0].passes && !pr.candidates[1].passes && pr.candidates[2].passes &&
                pr.candidates[3].passes,
            "A[P] not isolated");
    for (int i = 0; i < 20; ++i) {
        Poly h = rng.poly(kernel_vars(), 2, 9, {"z"});
        CommutatorReport r = char_commutator_check(family(), h, Poly(kernel_vars()));
        Poly coeff = family().expand(h) * X("z^2") * Rational(-2);
        require(r.holds && r.lhs.images() == oracle::exp_images(coeff * family().d_prime()),
                "char commutator for h = " + to_string(h));
    }
    return "50 commutators, pres lemma, 20 char commutators";
}

std::string fixed_scheme() {
    Vars pv = plane_vars();
    std::vector<Poly> fam{parse_poly("z", pv), parse_poly("z + 1", pv), parse_poly("y", pv), parse_poly("y + z", pv),
                          parse_poly("z^2 - 3", pv)};
    for (const char* a : {"z", "z^2"}) {
        FixedSchemeReport r = fixed_scheme_check(PlaneDivisor(parse_poly(a, pv)), fam);
        require(r.fixes && r.moved.size() == fam.size(), std::string("a = ") + a);
    }
    return "a = z, z^2 against 5 larger subschemes";
}

// ---- CLI determinism and parser totality ----------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string run_cli(const std::string& cli, const fs::path& file) {
    std::string cmd = "\"" + cli + "\" check --seed 3 \"" + file.string() + "\" 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw Failure("cannot start " + cli);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    pclose(pipe);
    return out;
}

std::string mutate(std::string s, Rng& rng) {
    static const std::string alphabet = "xyzP0123456789+-*^/(){}[];,=.> \n#abcdnkt'";
    unsigned steps = static_cast<unsigned>(rng.uniform(1, 3));
    for (unsigned k = 0; k < steps && !s.empty(); ++k) {
        auto pos = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(s.size()) - 1));
        if (rng.uniform(0, 1) == 0) {
            // Keeps the text well formed: rewrite one digit.
            auto digit = s.find_first_of("0123456789", pos);
            if (digit != std::string::npos) {
                s[digit] = static_cast<char>('0' + rng.uniform(0, 9));
                continue;
            }
        }
        switch (rng.uniform(0, 4)) {
            case 0: s.erase(pos, 1); break;
            case 1: s.insert(pos, 1, alphabet[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(alphabet.size()) - 1))]); break;
            case 2: s[pos] = alphabet[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(alphabet.size()) - 1))]; break;
            case 3: {
                auto len = static_cast<std::size_t>(rng.uniform(1, 40));
                s.erase(pos, len);
                break;
            }
            default: {
                auto other = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(s.size()) - 1));
                s.insert(pos, s.substr(other, static_cast<std::size_t>(rng.uniform(1, 30))));
            }
        }
    }
    return s;
}

std::string cli_and_fuzz(const std::string& cli, const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".corpus") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    require(!files.empty(), "no shipped corpora in " + dir.string());
    for (const auto& f : files) {
        std::string a = run_cli(cli, f), b = run_cli(cli, f);
        require(!a.empty() && a == b, "two CLI runs differ on " + f.filename().string());
    }
    Rng rng(1012);
    corpus::RunOptions opt;
    opt.budget = 2;
    opt.max_budget = 2;
    // Mutated inputs can be valid but enormous (P = xz + y^9); the limit turns those into ERROR.
    opt.work_limit = 5000000;
    unsigned diagnostics = 0, reports = 0, limited = 0;
    for (int i = 0; i < 1000; ++i) {
        const fs::path& f = files[static_cast<std::size_t>(i) % files.size()];
        std::string src = mutate(slurp(f), rng);
        try {
            corpus::CorpusCase c = corpus::parse(src);
            corpus::Report r = corpus::run(c, opt);
            require(r.results.size() == static_cast<std::size_t>(std::count_if(c.items.begin(), c.items.end(), [](const auto& it) {
                        return std::holds_alternative<corpus::Directive>(it);
                    })),
                    "missing verdicts for mutation " + std::to_string(i));
            ++reports;
            for (const auto& res : r.results)
                if (res.verdict == corpus::Verdict::error && res.detail.find("work limit") != std::string::npos) ++limited;
        } catch (const ParseError& e) {
            require(e.line() >= 1 && e.column() >= 1 && !e.message().empty(), "unpositioned diagnostic");
            ++diagnostics;
        } catch (const Failure&) {
            throw;
        } catch (const std::exception& e) {
            throw Failure("mutation " + std::to_string(i) + " escaped with: " + e.what());
        }
    }
    return "CLI byte-identical on " + std::to_string(files.size()) + " corpora; 1000 mutations: " +
           std::to_string(diagnostics) + " diagnostics, " + std::to_string(reports) + " reports, " +
           std::to_string(limited) + " verdicts hit the work limit";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <lnd cli> <corpus dir>\n";
        return 2;
    }
    std::string cli = argv[1];
    fs::path dir = argv[2];
    struct Criterion {
        int id;
        const char* name;
        double limit;  // seconds; 0 when only exactness is required
        std::function<std::string()> run;
    };
    std::vector<Criterion> all{
        {1, "one-parameter group law", 10, one_parameter_group},
        {2, "exp/log roundtrip", 10, exp_log_roundtrip},
        {3, "Δ_{xz+y^2} worked suite", 5, delta_suite},
        {4, "standard decomposition", 0, standard_decompositions},
        {5, "ad identity", 30, ad_identity},
        {6, "N-group isomorphism", 60, n_group},
        {7, "(Sat) instances", 0, sat_instances},
        {8, "irreducibility criterion", 0, irreducibility},
        {9, "divisor symmetries", 5, divisor_symmetries},
        {10, "group-model identities", 60, group_model},
        {11, "fixed-scheme check", 0, fixed_scheme},
        {12, "CLI determinism and parser totality", 60, [&] { return cli_and_fuzz(cli, dir); }},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit > 0 && secs >= c.limit) {
            ok = false;
            detail += " (over the time limit)";
        }
        char timing[64];
        if (c.limit > 0)
            std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, c.limit);
        else
            std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " [" << timing << "] " << detail
                  << std::endl;
        failed += ok ? 0 : 1;
    }
    std::cout << (all.size() - static_cast<std::size_t>(failed)) << "/" << all.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
