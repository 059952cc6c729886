#include "lnd/lnd.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lnd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> shipped() {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(LND_CORPUS_DIR))
        if (e.path().extension() == ".corpus") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

TEST(CorpusParse, Definitions) {
    auto c = corpus::parse("derivation D { x -> -2*y; y -> z; z -> 0 }\ncheck exp_log_roundtrip(D)\n");
    ASSERT_EQ(c.items.size(), 2u);
    const auto& d = std::get<corpus::Definition>(c.items[0]);
    EXPECT_EQ(d.kind, corpus::Kind::derivation);
    EXPECT_EQ(d.name, "D");
    const auto& dir = std::get<corpus::Directive>(c.items[1]);
    EXPECT_EQ(dir.name, "exp_log_roundtrip");
}

TEST(CorpusParse, PolyNamedPRoundtrips) {
    std::string src = "poly P = x*z + y^2\n";
    std::string once = corpus::print(corpus::parse(src));
    EXPECT_EQ(once, src);
    EXPECT_EQ(corpus::print(corpus::parse(once)), once);
}

TEST(CorpusParse, ShippedRoundtrip) {
    for (const auto& p : shipped()) {
        std::string once = corpus::print(corpus::parse(slurp(p)));
        EXPECT_EQ(corpus::print(corpus::parse(once)), once) << p;
    }
}

TEST(CorpusParse, PositionedDiagnostics) {
    struct Case {
        const char* src;
        std::size_t line, column;
    };
    for (auto [src, line, column] : {Case{"derivation D { x -> ; }", 1, 21}, Case{"\ncheck nope(D)", 2, 7},
                                     Case{"poly Q = w", 1, 10}, Case{"check exp_log_roundtrip(D)", 1, 25}}) {
        try {
            corpus::parse(src);
            ADD_FAILURE() << "no diagnostic for " << src;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), line) << src << ": " << e.message();
            EXPECT_EQ(e.column(), column) << src << ": " << e.message();
        }
    }
}

TEST(CorpusParse, RejectsRedefinitionAndReservedNames) {
    EXPECT_THROW(corpus::parse("poly Q = z\npoly Q = y"), ParseError);
    EXPECT_THROW(corpus::parse("poly x = z"), ParseError);
    EXPECT_THROW(corpus::parse("derivation P { x -> 1 }"), ParseError);
    EXPECT_THROW(corpus::parse("poly P = P"), ParseError);
}

TEST(CorpusRun, EmptyCorpus) {
    auto r = corpus::run(corpus::parse(""));
    EXPECT_TRUE(r.results.empty());
    EXPECT_EQ(r.render(false), "summary: 0/0/0\n");
}

TEST(CorpusRun, ShippedFamilyPasses) {
    auto r = corpus::run(corpus::parse(slurp(fs::path(LND_CORPUS_DIR) / "freudenburg_family.corpus")));
    EXPECT_GT(r.results.size(), 0u);
    EXPECT_TRUE(r.ok()) << r.render(true);
}

TEST(CorpusRun, QuotientAndGroupPasses) {
    auto r = corpus::run(corpus::parse(slurp(fs::path(LND_CORPUS_DIR) / "quotient_and_group.corpus")));
    EXPECT_TRUE(r.ok()) << r.render(true);
}

TEST(CorpusRun, WrongPlinthFailsWithWitness) {
    auto r = corpus::run(corpus::parse(slurp(fs::path(LND_CORPUS_DIR) / "plinth_wrong.corpus")));
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].verdict, corpus::Verdict::fail);
    EXPECT_NE(r.results[0].detail.find("a = z"), std::string::npos) << r.results[0].detail;
}

TEST(CorpusRun, FailedDefinitionGivesError) {
    auto r = corpus::run(corpus::parse("derivation D { x -> x }\ncheck exp_log_roundtrip(D)\n"));
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].verdict, corpus::Verdict::error);
}

TEST(CorpusRun, Deterministic) {
    auto c = corpus::parse(slurp(fs::path(LND_CORPUS_DIR) / "quotient_and_group.corpus"));
    corpus::RunOptions opt;
    opt.seed = 7;
    EXPECT_EQ(corpus::run(c, opt).render(true), corpus::run(c, opt).render(true));
}

TEST(CorpusRun, SeededDirectivesAgreeAcrossSeeds) {
    auto c = corpus::parse(
        "poly P = x*z + y^2\ncontext C { P = P; d = 1 }\ncheck n_group_homomorphism(C, budget = 5)\n");
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        corpus::RunOptions opt;
        opt.seed = seed;
        EXPECT_TRUE(corpus::run(c, opt).ok()) << seed;
    }
}

TEST(CorpusRun, WorkLimitGivesErrorNotHang) {
    auto c = corpus::parse("poly P = x*z + y^2\ncontext C { P = P; d = 1 }\ncheck n_group_homomorphism(C, budget = 5)\n");
    corpus::RunOptions opt;
    opt.work_limit = 100;
    auto r = corpus::run(c, opt);
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].verdict, corpus::Verdict::error);
    EXPECT_NE(r.results[0].detail.find("work limit"), std::string::npos) << r.results[0].detail;
    opt.work_limit = 0;
    EXPECT_TRUE(corpus::run(c, opt).ok());
}

}  // namespace
