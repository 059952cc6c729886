#pragma once

// Sparse multivariate polynomials over Q.
//
// A Poly is a list of (monomial, coefficient) terms sorted in descending
// graded-lex order (variables ordered as in the variable list, first is
// largest), with no zero coefficients. Two polys compare equal iff their
// variable lists and term lists are equal.

#include "lnd/errors.hpp"
#include "lnd/rational.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lnd {

inline constexpr std::size_t kMaxVars = 8;

namespace detail {

// Term products done by the current thread. A limit of 0 means unlimited.
struct WorkMeter {
    std::uint64_t used = 0;
    std::uint64_t limit = 0;
};

inline WorkMeter& work_meter() {
    thread_local WorkMeter m;
    return m;
}

inline void charge_work(std::uint64_t n) {
    WorkMeter& m = work_meter();
    m.used += n;
    if (m.limit && m.used > m.limit)
        throw ResourceLimit("work limit of " + std::to_string(m.limit) + " term products exceeded");
}

}  // namespace detail

/// Caps the polynomial work done in a scope. Deterministic, unlike a timeout.
class WorkLimit {
public:
    explicit WorkLimit(std::uint64_t limit) : saved_(detail::work_meter()) {
        detail::work_meter() = {0, limit};
    }
    ~WorkLimit() { detail::work_meter() = saved_; }
    WorkLimit(const WorkLimit&) = delete;
    WorkLimit& operator=(const WorkLimit&) = delete;

    std::uint64_t used() const { return detail::work_meter().used; }

private:
    detail::WorkMeter saved_;
};

/// An interned, ordered list of variable names. Interning makes pointer
/// equality coincide with name-list equality.
class VarList {
public:
    static std::shared_ptr<const VarList> get(std::vector<std::string> names) {
        static std::mutex mutex;
        static std::map<std::vector<std::string>, std::shared_ptr<const VarList>> registry;
        if (names.size() > kMaxVars)
            throw Error("at most " + std::to_string(kMaxVars) + " variables are supported");
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j]) throw Error("duplicate variable name " + names[i]);
        std::lock_guard lock(mutex);
        auto it = registry.find(names);
        if (it != registry.end()) return it->second;
        auto list = std::shared_ptr<const VarList>(new VarList(names));
        registry.emplace(std::move(names), list);
        return list;
    }

    const std::vector<std::string>& names() const noexcept { return names_; }
    std::size_t size() const noexcept { return names_.size(); }
    const std::string& operator[](std::size_t i) const { return names_[i]; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        return std::nullopt;
    }

    std::size_t require(std::string_view name) const {
        if (auto i = index_of(name)) return *i;
        throw UnknownVariable("unknown variable '" + std::string(name) + "'");
    }

private:
    explicit VarList(std::vector<std::string> names) : names_(std::move(names)) {}
    std::vector<std::string> names_;
};

using Vars = std::shared_ptr<const VarList>;

inline Vars vars(std::initializer_list<std::string> names) {
    return VarList::get(std::vector<std::string>(names));
}

/// Exponent vector packed into two words of four 16-bit lanes (variable 0 in
/// the top lane of word 0), so graded-lex comparison is degree then two
/// unsigned word compares. Exponents are capped at 15 bits; the spare lane
/// bit catches overflow in products.
class Monomial {
public:
    static constexpr unsigned kMaxExponent = 0x7FFF;

    Monomial() = default;

    unsigned operator[](std::size_t i) const {
        return static_cast<unsigned>((words_[i / 4] >> shift(i)) & 0xFFFFu);
    }
    unsigned degree() const noexcept { return degree_; }
    bool is_one() const noexcept { return degree_ == 0; }

    void set(std::size_t i, unsigned e) {
        if (e > kMaxExponent) throw Error("exponent overflow");
        unsigned old = (*this)[i];
        words_[i / 4] &= ~(std::uint64_t{0xFFFF} << shift(i));
        words_[i / 4] |= std::uint64_t{e} << shift(i);
        degree_ = degree_ - old + e;
    }

    static Monomial unit(std::size_t var, unsigned e = 1) {
        Monomial m;
        m.set(var, e);
        return m;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m;
        m.words_[0] = a.words_[0] + b.words_[0];
        m.words_[1] = a.words_[1] + b.words_[1];
        if ((m.words_[0] | m.words_[1]) & kOverflowMask) throw Error("exponent overflow");
        m.degree_ = a.degree_ + b.degree_;
        return m;
    }

    bool divides(const Monomial& other) const {
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if ((*this)[i] > other[i]) return false;
        return true;
    }

    /// other / this; caller checks divides().
    Monomial quotient_of(const Monomial& other) const {
        Monomial m;
        m.words_[0] = other.words_[0] - words_[0];
        m.words_[1] = other.words_[1] - words_[1];
        m.degree_ = other.degree_ - degree_;
        return m;
    }

    /// Graded lex: higher total degree is larger, ties broken by the first
    /// differing exponent (larger exponent of an earlier variable wins).
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
        if (a.words_[0] != b.words_[0]) return a.words_[0] <=> b.words_[0];
        return a.words_[1] <=> b.words_[1];
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.words_ == b.words_;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = words_[0] * 0x9E3779B97F4A7C15ull;
        h ^= (h >> 29) ^ (words_[1] * 0xC2B2AE3D27D4EB4Full);
        h ^= h >> 32;
        return static_cast<std::size_t>(h);
    }

private:
    static constexpr std::uint64_t kOverflowMask = 0x8000800080008000ull;
    static constexpr unsigned shift(std::size_t i) { return static_cast<unsigned>(48 - 16 * (i % 4)); }

    std::array<std::uint64_t, 2> words_{};
    std::uint32_t degree_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

struct Term {
    Monomial mono;
    Rational coef;
    friend bool operator==(const Term&, const Term&) = default;
};

namespace detail {

/// Open-addressing map Monomial -> Integer used while multiplying.
class MonomialAccumulator {
public:
    explicit MonomialAccumulator(std::size_t expected) {
        std::size_t cap = 16;
        while (cap < 2 * expected) cap <<= 1;
        index_.assign(cap, kEmpty);
        entries_.reserve(expected);
    }

    Integer& slot(const Monomial& m) {
        std::size_t mask = index_.size() - 1;
        std::size_t h = m.hash() & mask;
        while (true) {
            std::uint32_t idx = index_[h];
            if (idx == kEmpty) {
                index_[h] = static_cast<std::uint32_t>(entries_.size());
                entries_.emplace_back(m, Integer(0));
                if (2 * entries_.size() > index_.size()) {
                    grow();
                    return entries_.back().second;
                }
                return entries_.back().second;
            }
            if (entries_[idx].first == m) return entries_[idx].second;
            h = (h + 1) & mask;
        }
    }

    std::size_t size() const noexcept { return entries_.size(); }
    std::vector<std::pair<Monomial, Integer>>& entries() noexcept { return entries_; }

private:
    static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;

    void grow() {
        std::vector<std::uint32_t> fresh(index_.size() * 2, kEmpty);
        std::size_t mask = fresh.size() - 1;
        for (std::uint32_t k = 0; k < entries_.size(); ++k) {
            std::size_t h = entries_[k].first.hash() & mask;
            while (fresh[h] != kEmpty) h = (h + 1) & mask;
            fresh[h] = k;
        }
        index_.swap(fresh);
    }

    std::vector<std::uint32_t> index_;
    std::vector<std::pair<Monomial, Integer>> entries_;
};

}  // namespace detail

class Poly {
public:
    /// The zero polynomial over the empty variable list. Constants over the
    /// empty list are promoted when combined with polys over a real list.
    Poly() : vars_(VarList::get({})) {}
    explicit Poly(Vars v) : vars_(std::move(v)) {}
    Poly(Vars v, const Rational& c) : vars_(std::move(v)) {
        if (c != 0) terms_.push_back({Monomial{}, c});
    }
    Poly(Vars v, long c) : Poly(std::move(v), Rational(c)) {}

    /// Builds from arbitrary terms: sorts, merges duplicates, drops zeros.
    static Poly from_terms(Vars v, std::vector<Term> terms) {
        Poly p(std::move(v));
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return a.mono > b.mono; });
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
                p.terms_.back().coef += t.coef;
                if (p.terms_.back().coef == 0) p.terms_.pop_back();
            } else if (t.coef != 0) {
                p.terms_.push_back(std::move(t));
            }
        }
        return p;
    }

    static Poly variable(Vars v, std::string_view name) {
        auto i = v->require(name);
        Poly p(std::move(v));
        p.terms_.push_back({Monomial::unit(i), Rational(1)});
        return p;
    }

    static Poly monomial(Vars v, const Monomial& m, const Rational& c = Rational(1)) {
        Poly p(std::move(v));
        if (c != 0) p.terms_.push_back({m, c});
        return p;
    }

    const Vars& vars() const noexcept { return vars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        const auto& last = terms_.back();
        return last.mono.is_one() ? last.coef : Rational(0);
    }

    /// Total degree; -1 for the zero polynomial.
    int total_degree() const noexcept {
        return terms_.empty() ? -1 : static_cast<int>(terms_.front().mono.degree());
    }

    int degree_in(std::size_t var) const noexcept {
        int d = -1;
        for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.mono[var]));
        return d;
    }
    int degree_in(std::string_view name) const { return degree_in(vars_->require(name)); }

    /// True iff every term has zero exponent outside the given variables.
    bool only_uses(std::initializer_list<std::string_view> names) const {
        return only_uses(std::span<const std::string_view>(names.begin(), names.size()));
    }
    bool only_uses(std::span<const std::string_view> names) const {
        std::array<bool, kMaxVars> allowed{};
        for (auto n : names)
            if (auto i = vars_->index_of(n)) allowed[*i] = true;
        for (const auto& t : terms_)
            for (std::size_t i = 0; i < vars_->size(); ++i)
                if (!allowed[i] && t.mono[i] != 0) return false;
        return true;
    }

    const Term& leading_term() const {
        if (terms_.empty()) throw Error("leading term of zero polynomial");
        return terms_.front();
    }
    const Rational& leading_coefficient() const { return leading_term().coef; }

    Rational coefficient(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& key) { return t.mono > key; });
        if (it != terms_.end() && it->mono == m) return it->coef;
        return Rational(0);
    }

    /// Scales so the graded-lex leading coefficient is 1 (zero stays zero).
    Poly monic() const {
        if (terms_.empty()) return *this;
        Rational inv = 1 / terms_.front().coef;
        return *this * inv;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.coef = -t.coef;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) { return add(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return add(a, b, true); }

    friend Poly operator*(const Poly& a, const Rational& c) {
        if (c == 0) return Poly(a.vars_);
        Poly r = a;
        for (auto& t : r.terms_) t.coef *= c;
        return r;
    }
    friend Poly operator*(const Rational& c, const Poly& a) { return a * c; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Vars v = common_vars(a, b);
        if (a.is_zero() || b.is_zero()) return Poly(v);
        const Poly& small = a.size() <= b.size() ? a : b;
        const Poly& large = a.size() <= b.size() ? b : a;
        detail::charge_work(small.size() * large.size());
        Poly r(v);
        if (small.size() == 1) {
            const auto& s = small.terms_[0];
            r.terms_.reserve(large.size());
            // Multiplying by a single monomial keeps the order.
            for (const auto& t : large.terms_) r.terms_.push_back({t.mono * s.mono, t.coef * s.coef});
            return r;
        }
        // Clear denominators so the inner loop is integer multiply-add only.
        Integer small_den = common_denominator(small), large_den = common_denominator(large);
        std::vector<Integer> small_num = scaled_numerators(small, small_den);
        std::vector<Integer> large_num = scaled_numerators(large, large_den);
        detail::MonomialAccumulator acc(small.size() * large.size());
        for (std::size_t i = 0; i < small.size(); ++i) {
            const Monomial& sm = small.terms_[i].mono;
            for (std::size_t j = 0; j < large.size(); ++j) {
                Integer& slot = acc.slot(sm * large.terms_[j].mono);
                mpz_addmul(slot.get_mpz_t(), small_num[i].get_mpz_t(), large_num[j].get_mpz_t());
            }
        }
        Integer den = small_den * large_den;
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc.entries()) {
            if (c == 0) continue;
            Rational q;
            mpz_swap(mpq_numref(q.get_mpq_t()), c.get_mpz_t());
            mpz_set(mpq_denref(q.get_mpq_t()), den.get_mpz_t());
            if (den != 1) q.canonicalize();
            r.terms_.push_back({m, std::move(q)});
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return x.mono > y.mono; });
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(unsigned e) const {
        Poly result(vars_, 1);
        Poly base = *this;
        while (e) {
            if (e & 1u) result = result * base;
            e >>= 1u;
            if (e) base = base * base;
        }
        return result;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_ != b.terms_) return false;
        return a.vars_ == b.vars_ || a.is_constant();
    }

    /// Shared variable list of two operands, promoting empty-list constants.
    static Vars common_vars(const Poly& a, const Poly& b) {
        if (a.vars_ == b.vars_) return a.vars_;
        if (a.vars_->size() == 0 && a.is_constant()) return b.vars_;
        if (b.vars_->size() == 0 && b.is_constant()) return a.vars_;
        throw VariableMismatch("variable lists differ");
    }

private:
    static Integer common_denominator(const Poly& p) {
        Integer d = 1;
        for (const auto& t : p.terms_)
            if (t.coef.get_den() != 1) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), t.coef.get_den_mpz_t());
        return d;
    }

    static std::vector<Integer> scaled_numerators(const Poly& p, const Integer& den) {
        std::vector<Integer> out;
        out.reserve(p.size());
        for (const auto& t : p.terms_) {
            if (den == 1) {
                out.emplace_back(t.coef.get_num());
            } else {
                Integer v;
                mpz_divexact(v.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
                out.push_back(v * t.coef.get_num());
            }
        }
        return out;
    }

    static Poly add(const Poly& a, const Poly& b, bool subtract) {
        Poly r(common_vars(a, b));
        r.terms_.reserve(a.size() + b.size());
        auto i = a.terms_.begin(), ie = a.terms_.end();
        auto j = b.terms_.begin(), je = b.terms_.end();
        while (i != ie || j != je) {
            if (j == je || (i != ie && i->mono > j->mono)) {
                r.terms_.push_back(*i++);
            } else if (i == ie || j->mono > i->mono) {
                r.terms_.push_back({j->mono, subtract ? Rational(-j->coef) : j->coef});
                ++j;
            } else {
                Rational c = subtract ? Rational(i->coef - j->coef) : Rational(i->coef + j->coef);
                if (c != 0) r.terms_.push_back({i->mono, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    Vars vars_;
    std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Printing. Terms in graded-lex order, " + " / " - " separators, "*" between
// coefficient and variables, "^" for exponents.

inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rational c = t.coef;
        bool negative = c < 0;
        if (negative) c = -c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < p.vars()->size(); ++i) {
            unsigned e = t.mono[i];
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += (*p.vars())[i];
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty())
            out += c.get_str();
        else if (c == 1)
            out += mono;
        else
            out += c.get_str() + "*" + mono;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ring maps and calculus.

/// Re-expresses p over another variable list, matching variables by name.
/// Every variable p actually uses must exist in the target list.
inline Poly embed(const Poly& p, const Vars& target) {
    if (p.vars() == target) return p;
    std::array<std::size_t, kMaxVars> map{};
    std::array<bool, kMaxVars> used{};
    for (const auto& t : p.terms())
        for (std::size_t i = 0; i < p.vars()->size(); ++i)
            if (t.mono[i] != 0) used[i] = true;
    for (std::size_t i = 0; i < p.vars()->size(); ++i)
        if (used[i]) map[i] = target->require((*p.vars())[i]);
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const auto& t : p.terms()) {
        Monomial m;
        for (std::size_t i = 0; i < p.vars()->size(); ++i)
            if (t.mono[i] != 0) m.set(map[i], t.mono[i]);
        terms.push_back({m, t.coef});
    }
    return Poly::from_terms(target, std::move(terms));
}

namespace detail {

struct SubstitutionPlan {
    std::span<const Poly> images;
    Vars target;
    std::vector<std::vector<Poly>> powers;  // powers[k][e] = images[k]^e, filled lazily

    const Poly& power(std::size_t k, unsigned e) {
        auto& cache = powers[k];
        if (cache.empty()) cache.push_back(Poly(target, 1));
        while (cache.size() <= e) cache.push_back(cache.back() * images[k]);
        return cache[e];
    }
};

// Horner evaluation in variable k over terms whose exponents below k are zero.
inline Poly substitute_rec(std::vector<Term> terms, std::size_t k, SubstitutionPlan& plan) {
    const std::size_t n = plan.images.size();
    if (terms.empty()) return Poly(plan.target);
    if (k == n) {
        Rational c(0);
        for (const auto& t : terms) c += t.coef;
        return Poly(plan.target, c);
    }
    std::map<unsigned, std::vector<Term>, std::greater<>> groups;
    for (auto& t : terms) {
        unsigned e = t.mono[k];
        Term rest{t.mono, std::move(t.coef)};
        rest.mono.set(k, 0);
        groups[e].push_back(std::move(rest));
    }
    if (groups.size() == 1 && groups.begin()->first == 0)
        return substitute_rec(std::move(groups.begin()->second), k + 1, plan);
    // Horner: the large accumulated value is only multiplied by image powers
    // spanning the exponent gaps.
    Poly acc(plan.target);
    std::optional<unsigned> prev;
    for (auto& [e, group] : groups) {
        if (prev) acc = acc * plan.power(k, *prev - e);
        acc = acc + substitute_rec(std::move(group), k + 1, plan);
        prev = e;
    }
    if (*prev > 0) acc = acc * plan.power(k, *prev);
    return acc;
}

}  // namespace detail

/// Evaluates p at images[i] for the i-th variable of p. All images must share
/// one variable list, which becomes the result's list.
inline Poly substitute(const Poly& p, std::span<const Poly> images) {
    if (images.size() != p.vars()->size())
        throw UnknownVariable("substitution needs one image per variable (" +
                              std::to_string(p.vars()->size()) + " expected, " +
                              std::to_string(images.size()) + " given)");
    Vars target = images.empty() ? p.vars() : images.front().vars();
    for (const auto& img : images) {
        if (img.vars() != target) {
            if (img.is_constant() && img.vars()->size() == 0) continue;
            throw VariableMismatch("substitution images over different variable lists");
        }
    }
    std::vector<Poly> promoted(images.begin(), images.end());
    for (auto& img : promoted)
        if (img.vars() != target) img = Poly(target, img.constant_value());
    detail::SubstitutionPlan plan{promoted, target, std::vector<std::vector<Poly>>(promoted.size())};
    return detail::substitute_rec(p.terms(), 0, plan);
}

/// Named form: every variable p uses needs an entry; unused ones may be absent.
inline Poly substitute(const Poly& p, const std::map<std::string, Poly>& images) {
    std::optional<Vars> target;
    for (const auto& [name, img] : images) {
        if (img.vars()->size() == 0 && img.is_constant()) continue;
        if (!target) target = img.vars();
        else if (*target != img.vars())
            throw VariableMismatch("substitution images over different variable lists");
    }
    Vars tv = target ? *target : p.vars();
    std::vector<Poly> ordered;
    ordered.reserve(p.vars()->size());
    for (std::size_t i = 0; i < p.vars()->size(); ++i) {
        const auto& name = (*p.vars())[i];
        auto it = images.find(name);
        if (it == images.end()) {
            if (p.degree_in(i) > 0) throw UnknownVariable("no image for variable '" + name + "'");
            ordered.emplace_back(tv);
            continue;
        }
        ordered.push_back(it->second.vars() == tv ? it->second : Poly(tv, it->second.constant_value()));
    }
    return substitute(p, ordered);
}

inline Poly partial_derivative(const Poly& p, std::size_t var) {
    if (var >= p.vars()->size()) throw UnknownVariable("variable index out of range");
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const auto& t : p.terms()) {
        unsigned e = t.mono[var];
        if (e == 0) continue;
        Monomial m = t.mono;
        m.set(var, e - 1);
        terms.push_back({m, t.coef * e});
    }
    return Poly::from_terms(p.vars(), std::move(terms));
}

inline Poly partial_derivative(const Poly& p, std::string_view name) {
    return partial_derivative(p, p.vars()->require(name));
}

/// Formal antiderivative in one variable with zero constant term.
inline Poly integrate_in(const Poly& p, std::size_t var) {
    if (var >= p.vars()->size()) throw UnknownVariable("variable index out of range");
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const auto& t : p.terms()) {
        unsigned e = t.mono[var];
        Monomial m = t.mono;
        m.set(var, e + 1);
        terms.push_back({m, t.coef / Rational(e + 1)});
    }
    return Poly::from_terms(p.vars(), std::move(terms));
}

inline Poly integrate_in(const Poly& p, std::string_view name) {
    return integrate_in(p, p.vars()->require(name));
}

/// Coefficients of p viewed as a polynomial in one variable: result[e] is the
/// coefficient of var^e (still over p's variable list, free of var).
inline std::vector<Poly> coefficients_in(const Poly& p, std::size_t var) {
    int deg = p.degree_in(var);
    if (deg < 0) return {};
    std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(deg) + 1);
    for (const auto& t : p.terms()) {
        Monomial m = t.mono;
        unsigned e = m[var];
        m.set(var, 0);
        buckets[e].push_back({m, t.coef});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(Poly::from_terms(p.vars(), std::move(b)));
    return out;
}

}  // namespace lnd
