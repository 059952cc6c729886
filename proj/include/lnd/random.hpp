#pragma once

// Seeded generators for property checks. Only the raw mt19937_64 stream is
// used (no std distributions) so that sequences are identical across
// standard libraries.

#include "lnd/poly.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lnd {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [lo, hi].
    long uniform(long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(engine_() % span);
    }

    Rational rational(long range = 9) {
        long num = uniform(-range, range);
        long den = uniform(1, range);
        return make_rational(num, den);
    }

    Rational nonzero_rational(long range = 9) {
        while (true) {
            Rational r = rational(range);
            if (r != 0) return r;
        }
    }

    /// Random polynomial over `v` using only `use` (all variables when
    /// empty), total degree <= deg, integer coefficients in [-range, range].
    Poly poly(const Vars& v, unsigned deg, long range = 9, std::vector<std::string_view> use = {}, double density = 0.5) {
        std::vector<std::size_t> idx;
        if (use.empty())
            for (std::size_t i = 0; i < v->size(); ++i) idx.push_back(i);
        else
            for (auto n : use) idx.push_back(v->require(n));
        std::vector<Monomial> monos{Monomial{}};
        for (std::size_t i : idx) {
            std::vector<Monomial> next;
            for (const auto& m : monos) {
                unsigned used = 0;
                for (std::size_t j : idx) used += m[j];
                for (unsigned e = 0; used + e <= deg; ++e) {
                    Monomial mm = m;
                    mm.set(i, e);
                    next.push_back(mm);
                }
            }
            monos = std::move(next);
        }
        std::vector<Term> terms;
        auto threshold = static_cast<std::uint64_t>(density * 1000);
        for (const auto& m : monos) {
            if (static_cast<std::uint64_t>(uniform(0, 999)) >= threshold) continue;
            long c = uniform(-range, range);
            if (c != 0) terms.push_back({m, Rational(c)});
        }
        return Poly::from_terms(v, std::move(terms));
    }

    Poly nonzero_poly(const Vars& v, unsigned deg, long range = 9, std::vector<std::string_view> use = {}) {
        while (true) {
            Poly p = poly(v, deg, range, use);
            if (!p.is_zero()) return p;
        }
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace lnd
