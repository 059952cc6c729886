#pragma once

// Derivations of Q[x_1..x_n] given by their images on the generators, plus
// the pieces of LND calculus that need nothing beyond Poly: application,
// brackets, nilpotency evidence and the exponential series on a polynomial.

#include "lnd/poly.hpp"

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace lnd {

class Derivation {
public:
    Derivation() = default;

    /// images[i] is the image of the i-th variable; all images share `v`.
    Derivation(Vars v, std::vector<Poly> images) : vars_(std::move(v)), images_(std::move(images)) {
        if (images_.size() != vars_->size())
            throw VariableMismatch("derivation needs one image per variable");
        for (auto& img : images_) {
            if (img.vars() == vars_) continue;
            if (img.vars()->size() == 0 && img.is_constant()) {
                img = Poly(vars_, img.constant_value());
                continue;
            }
            throw VariableMismatch("derivation image over a different variable list");
        }
    }

    static Derivation zero(const Vars& v) { return Derivation(v, std::vector<Poly>(v->size(), Poly(v))); }

    /// d/d(name).
    static Derivation partial(const Vars& v, std::string_view name) {
        std::vector<Poly> imgs(v->size(), Poly(v));
        imgs[v->require(name)] = Poly(v, 1);
        return Derivation(v, std::move(imgs));
    }

    const Vars& vars() const noexcept { return vars_; }
    const std::vector<Poly>& images() const noexcept { return images_; }
    const Poly& image(std::size_t i) const { return images_.at(i); }
    const Poly& image(std::string_view name) const { return images_.at(vars_->require(name)); }

    bool is_zero() const {
        for (const auto& p : images_)
            if (!p.is_zero()) return false;
        return true;
    }

    /// Max total degree of the images; -1 for the zero derivation.
    int degree() const {
        int d = -1;
        for (const auto& p : images_) d = std::max(d, p.total_degree());
        return d;
    }

    friend bool operator==(const Derivation& a, const Derivation& b) {
        return a.vars_ == b.vars_ && a.images_ == b.images_;
    }

    friend Derivation operator+(const Derivation& a, const Derivation& b) {
        check_same(a, b);
        std::vector<Poly> out;
        for (std::size_t i = 0; i < a.images_.size(); ++i) out.push_back(a.images_[i] + b.images_[i]);
        return Derivation(a.vars_, std::move(out));
    }
    friend Derivation operator-(const Derivation& a, const Derivation& b) {
        check_same(a, b);
        std::vector<Poly> out;
        for (std::size_t i = 0; i < a.images_.size(); ++i) out.push_back(a.images_[i] - b.images_[i]);
        return Derivation(a.vars_, std::move(out));
    }
    Derivation operator-() const { return *this * Rational(-1); }

    friend Derivation operator*(const Derivation& d, const Rational& c) {
        std::vector<Poly> out;
        for (const auto& p : d.images_) out.push_back(p * c);
        return Derivation(d.vars_, std::move(out));
    }
    friend Derivation operator*(const Rational& c, const Derivation& d) { return d * c; }

    /// The derivation f*D.
    friend Derivation operator*(const Poly& f, const Derivation& d) {
        Poly g = embed_into(f, d.vars_);
        std::vector<Poly> out;
        for (const auto& p : d.images_) out.push_back(g * p);
        return Derivation(d.vars_, std::move(out));
    }

private:
    static void check_same(const Derivation& a, const Derivation& b) {
        if (a.vars_ != b.vars_) throw VariableMismatch("derivations over different variable lists");
    }
    static Poly embed_into(const Poly& f, const Vars& v) {
        if (f.vars() == v) return f;
        if (f.vars()->size() == 0) return Poly(v, f.constant_value());
        throw VariableMismatch("multiplier over a different variable list");
    }

    Vars vars_ = VarList::get({});
    std::vector<Poly> images_;
};

/// D(p), the Leibniz extension of the generator images.
inline Poly apply(const Derivation& d, const Poly& p) {
    if (p.is_constant()) return Poly(d.vars());
    if (p.vars() != d.vars()) throw VariableMismatch("derivation and polynomial over different variables");
    Poly result(d.vars());
    for (std::size_t i = 0; i < d.images().size(); ++i) {
        const Poly& img = d.image(i);
        if (img.is_zero()) continue;
        Poly dp = partial_derivative(p, i);
        if (!dp.is_zero()) result += dp * img;
    }
    return result;
}

/// D^k(p).
inline Poly apply_power(const Derivation& d, Poly p, unsigned k) {
    for (unsigned i = 0; i < k && !p.is_zero(); ++i) p = apply(d, p);
    return p;
}

inline Derivation lie_bracket(const Derivation& d, const Derivation& e) {
    if (d.vars() != e.vars()) throw VariableMismatch("derivations over different variable lists");
    std::vector<Poly> out;
    for (std::size_t i = 0; i < d.images().size(); ++i)
        out.push_back(apply(d, e.image(i)) - apply(e, d.image(i)));
    return Derivation(d.vars(), std::move(out));
}

struct NilpotencyEvidence {
    enum class Status { nilpotent, inconclusive };
    Status status = Status::inconclusive;
    /// Smallest k with D^k(v) = 0, per generator (filled when nilpotent).
    std::vector<unsigned> vanishing_orders;
    unsigned iterations_used = 0;

    bool nilpotent() const noexcept { return status == Status::nilpotent; }
};

inline constexpr unsigned kDefaultNilpotencyCap = 64;

/// Iterates D on each generator. Never claims "not locally nilpotent": if a
/// generator survives `cap` applications the verdict is only inconclusive.
inline NilpotencyEvidence is_locally_nilpotent(const Derivation& d, unsigned cap = kDefaultNilpotencyCap) {
    if (cap < 1) throw PreconditionFailed("nilpotency cap must be at least 1");
    NilpotencyEvidence ev;
    const Vars& v = d.vars();
    for (std::size_t i = 0; i < v->size(); ++i) {
        Poly cur = Poly::variable(v, (*v)[i]);
        unsigned k = 0;
        while (!cur.is_zero() && k < cap) {
            cur = apply(d, cur);
            ++k;
            ++ev.iterations_used;
        }
        if (!cur.is_zero()) {
            ev.vanishing_orders.clear();
            return ev;
        }
        ev.vanishing_orders.push_back(k);
    }
    ev.status = NilpotencyEvidence::Status::nilpotent;
    return ev;
}

/// Upper bound on the nilpotency index of D at p, given vanishing orders of
/// the generators: D-degree is additive, deg_D(v) = order(v) - 1.
inline unsigned nilpotency_bound(const std::vector<unsigned>& orders, const Poly& p) {
    unsigned best = 0;
    for (const auto& t : p.terms()) {
        unsigned w = 0;
        for (std::size_t i = 0; i < orders.size(); ++i)
            w += t.mono[i] * (orders[i] == 0 ? 0u : orders[i] - 1);
        best = std::max(best, w);
    }
    return best + 1;
}

/// exp(D)(p) = sum D^k(p)/k!, for D already known to be locally nilpotent
/// with the given vanishing orders.
inline Poly exp_series(const Derivation& d, const std::vector<unsigned>& orders, const Poly& p) {
    if (p.vars() != d.vars()) {
        if (p.is_constant()) return Poly(d.vars(), p.constant_value());
        throw VariableMismatch("derivation and polynomial over different variables");
    }
    const unsigned bound = nilpotency_bound(orders, p);
    Poly sum = p;
    Poly cur = p;
    Rational factorial(1);
    for (unsigned k = 1; k <= bound; ++k) {
        cur = apply(d, cur);
        if (cur.is_zero()) return sum;
        factorial *= k;
        sum += cur * Rational(1 / factorial);
    }
    throw InternalFault("exponential series failed to terminate within its degree bound");
}

/// {x -> p; y -> q; z -> r}
inline std::string to_string(const Derivation& d) {
    std::string s = "{";
    for (std::size_t i = 0; i < d.vars()->size(); ++i)
        s += (i ? "; " : " ") + std::string((*d.vars())[i]) + " -> " + to_string(d.image(i));
    return s + " }";
}

}  // namespace lnd
