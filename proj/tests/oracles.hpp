#pragma once

// Reference computations for the tests. They deliberately avoid the library
// algorithms they check: polynomials are plain exponent-vector maps,
// elimination is a naive dense Gauss over mpq_class, and the exponential is a
// fixed-length truncated series.

#include "lnd/lnd.hpp"

#include <map>
#include <optional>
#include <vector>

namespace oracle {

using lnd::Poly;
using lnd::Rational;
using Exps = std::vector<unsigned>;
using Dense = std::map<Exps, Rational>;

inline Dense to_dense(const Poly& p) {
    Dense d;
    for (const auto& t : p.terms()) {
        Exps e(p.vars()->size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = t.mono[i];
        d[e] = t.coef;
    }
    return d;
}

inline Poly from_dense(const lnd::Vars& v, const Dense& d) {
    std::vector<lnd::Term> terms;
    for (const auto& [e, c] : d) {
        lnd::Monomial m;
        for (std::size_t i = 0; i < e.size(); ++i) m.set(i, e[i]);
        terms.push_back({m, c});
    }
    return Poly::from_terms(v, std::move(terms));
}

inline Dense mul(const Dense& a, const Dense& b) {
    Dense out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exps e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out[e] += ca * cb;
        }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

/// Term-by-term product.
inline Poly expand_product(const Poly& a, const Poly& b) { return from_dense(a.vars(), mul(to_dense(a), to_dense(b))); }

/// p at a rational point, one term at a time.
inline Rational eval(const Poly& p, const std::vector<Rational>& pt) {
    Rational s(0);
    for (const auto& t : p.terms()) {
        Rational m = t.coef;
        for (std::size_t i = 0; i < pt.size(); ++i)
            for (unsigned k = 0; k < t.mono[i]; ++k) m *= pt[i];
        s += m;
    }
    return s;
}

/// sum_{k <= 40} D^k(v) / k!, with D^41(v) required to vanish.
inline std::vector<Poly> exp_images(const lnd::Derivation& d) {
    std::vector<Poly> out;
    for (const auto& name : d.vars()->names()) {
        Poly term = Poly::variable(d.vars(), name), sum(d.vars());
        Rational fact(1);
        for (unsigned k = 0; k <= 40; ++k) {
            if (k) fact *= k;
            sum += term * Rational(1 / fact);
            term = lnd::apply(d, term);
        }
        if (!term.is_zero()) throw std::runtime_error("series did not terminate");
        out.push_back(sum);
    }
    return out;
}

/// Composition by pointwise evaluation: the images of g o h at a point.
inline std::vector<Rational> eval_map(const std::vector<Poly>& images, const std::vector<Rational>& pt) {
    std::vector<Rational> out;
    for (const auto& p : images) out.push_back(eval(p, pt));
    return out;
}

/// Basis of the null space of the rows x cols matrix m, by naive elimination.
inline std::vector<std::vector<Rational>> kernel(std::vector<std::vector<Rational>> m, std::size_t cols) {
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m[i][free];
        basis.push_back(v);
    }
    return basis;
}

inline std::size_t rank_of(std::vector<std::vector<Rational>> rows, std::size_t cols) {
    return cols - kernel(std::move(rows), cols).size();
}

/// All exponent vectors in n variables of total degree <= deg.
inline std::vector<Exps> monomials(std::size_t n, unsigned deg) {
    std::vector<Exps> out{Exps(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Exps> next;
        for (const auto& e : out) {
            unsigned used = 0;
            for (auto x : e) used += x;
            for (unsigned k = 0; used + k <= deg; ++k) {
                Exps f = e;
                f[i] = k;
                next.push_back(f);
            }
        }
        out = std::move(next);
    }
    return out;
}

inline Poly mono(const lnd::Vars& v, const Exps& e) { return from_dense(v, Dense{{e, Rational(1)}}); }

/// The plinth question answered by brute force. Unknowns are the
/// coefficients of Q over all monomials of degree <= deg_q and of a over the
/// given kernel candidates; the equation is D(Q) = a. Returns a basis of the
/// attainable a.
inline std::vector<Poly> attainable_plinths(const lnd::Derivation& d, unsigned deg_q, const std::vector<Poly>& kernel_candidates) {
    const lnd::Vars& v = d.vars();
    std::vector<Poly> cols;
    for (const auto& e : monomials(v->size(), deg_q)) cols.push_back(lnd::apply(d, mono(v, e)));
    std::size_t nq = cols.size();
    for (const auto& k : kernel_candidates) cols.push_back(-k);
    std::map<Exps, std::size_t> row_of;
    for (const auto& c : cols)
        for (const auto& [e, _] : to_dense(c)) row_of.emplace(e, row_of.size());
    std::vector<std::vector<Rational>> m(row_of.size(), std::vector<Rational>(cols.size(), Rational(0)));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [e, c] : to_dense(cols[j])) m[row_of[e]][j] = c;
    std::vector<std::vector<Rational>> proj;
    for (const auto& sol : kernel(m, cols.size())) {
        std::vector<Rational> part(sol.begin() + static_cast<long>(nq), sol.end());
        proj.push_back(part);
    }
    // Row-reduce the projections to a basis of attainable a.
    std::size_t nk = kernel_candidates.size();
    std::vector<Poly> out;
    if (proj.empty()) return out;
    std::vector<std::vector<Rational>> chosen;
    for (const auto& p : proj) {
        auto trial = chosen;
        trial.push_back(p);
        if (rank_of(trial, nk) > chosen.size()) chosen = trial;
    }
    for (const auto& c : chosen) {
        Poly a(v);
        for (std::size_t j = 0; j < nk; ++j) a += kernel_candidates[j] * c[j];
        out.push_back(a);
    }
    return out;
}

/// Elements a + b t of Q[t]/(t^2 + t + 1), the cube roots of unity.
struct Eisenstein {
    Rational a, b;
    friend Eisenstein operator*(const Eisenstein& x, const Eisenstein& y) {
        // t^2 = -1 - t
        Rational c0 = x.a * y.a - x.b * y.b;
        Rational c1 = x.a * y.b + x.b * y.a - x.b * y.b;
        return {c0, c1};
    }
    friend Eisenstein operator+(const Eisenstein& x, const Eisenstein& y) { return {x.a + y.a, x.b + y.b}; }
    friend bool operator==(const Eisenstein&, const Eisenstein&) = default;
};

inline Eisenstein zeta_pow(unsigned k) {
    Eisenstein r{1, 0}, z{0, 1};
    for (unsigned i = 0; i < k; ++i) r = r * z;
    return r;
}

/// a(ζ z) == ζ^k a(z) coefficientwise, a univariate in variable `var`.
inline bool cube_root_symmetry(const Poly& a, std::size_t var, unsigned k) {
    for (const auto& t : a.terms()) {
        unsigned e = t.mono[var];
        Eisenstein lhs = zeta_pow(e) * Eisenstein{t.coef, 0};
        Eisenstein rhs = zeta_pow(k) * Eisenstein{t.coef, 0};
        if (!(lhs == rhs)) return false;
    }
    return true;
}

}  // namespace oracle
