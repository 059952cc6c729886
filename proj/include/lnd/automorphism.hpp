#pragma once

// Polynomial endomorphisms of affine n-space, stored by their pullbacks of
// the coordinate functions.
//
// Composition convention: (g o h)(v) = g(h(v)), so the pullbacks compose in
// reverse, (g o h)^* = h^* o g^*, and compose(g, h).image(v) = h^*(g^*(v)).
//
// An automorphism built from exponentials of locally nilpotent derivations
// remembers that factorization. Its pullback of an arbitrary polynomial is
// then evaluated with the exponential series of each factor instead of by
// substituting high-degree images into high-degree polynomials; both routes
// compute the same ring homomorphism (checked in the tests).

#include "lnd/derivation.hpp"
#include "lnd/linalg.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace lnd {

class Automorphism;

namespace detail {
struct InverseCell;
}

/// exp(derivation) with the vanishing orders that bound its series.
struct ExpFactor {
    Derivation derivation;
    std::vector<unsigned> orders;
};

class Automorphism {
public:
    Automorphism() = default;

    /// A map given only by its pullback images. No inverse is known.
    static Automorphism from_images(Vars v, std::vector<Poly> images) {
        Automorphism a;
        a.init(std::move(v), std::move(images));
        return a;
    }

    /// A map together with an explicit inverse witness; both compositions are
    /// checked to be the identity.
    static Automorphism with_inverse(Vars v, std::vector<Poly> images, std::vector<Poly> inverse_images) {
        Automorphism a = from_images(v, std::move(images));
        Automorphism inv = from_images(v, std::move(inverse_images));
        Automorphism id = identity(v);
        if (!(compose(a, inv) == id) || !(compose(inv, a) == id))
            throw PreconditionFailed("inverse witness does not invert the map");
        a.set_inverse([inv] { return inv; });
        return a;
    }

    static Automorphism identity(const Vars& v) {
        std::vector<Poly> imgs;
        for (const auto& name : v->names()) imgs.push_back(Poly::variable(v, name));
        Automorphism a = from_images(v, std::move(imgs));
        a.word_ = std::vector<ExpFactor>{};
        return a;
    }

    /// Internal constructor used by the exponential: images of exp(d).
    static Automorphism from_exponential(ExpFactor factor, std::vector<Poly> images) {
        Automorphism a;
        Vars v = factor.derivation.vars();
        a.init(std::move(v), std::move(images));
        a.word_ = std::vector<ExpFactor>{std::move(factor)};
        return a;
    }

    const Vars& vars() const noexcept { return vars_; }
    const std::vector<Poly>& images() const noexcept { return images_; }
    const Poly& image(std::size_t i) const { return images_.at(i); }
    const Poly& image(std::string_view name) const { return images_.at(vars_->require(name)); }

    /// Max total degree of the pullback images.
    int degree() const noexcept { return degree_; }

    bool is_identity() const {
        for (std::size_t i = 0; i < images_.size(); ++i)
            if (!(images_[i] == Poly::variable(vars_, (*vars_)[i]))) return false;
        return true;
    }

    /// Factorization as exp(D_1) o ... o exp(D_k), when known.
    const std::optional<std::vector<ExpFactor>>& exp_word() const noexcept { return word_; }

    bool has_inverse() const noexcept { return word_.has_value() || inverse_ != nullptr || degree_ <= 1; }

    /// The inverse witness: from the exponential word when known (exp(-D_k) o
    /// ... o exp(-D_1)), else the stored (lazily evaluated) witness, else the
    /// inverse of an affine map. Throws PreconditionFailed otherwise.
    Automorphism inverse() const;

    /// g^*(p) = p o g.
    Poly pullback(const Poly& p) const {
        if (word_) {
            Poly q = p;
            if (q.vars() != vars_) {
                if (!q.is_constant()) throw VariableMismatch("pullback of a polynomial over other variables");
                q = Poly(vars_, q.constant_value());
            }
            return pullback_word(*word_, q);
        }
        return substitute(p, images_);
    }

    /// The same map with every shortcut removed: only the images remain.
    Automorphism images_only() const { return from_images(vars_, images_); }

    friend bool operator==(const Automorphism& a, const Automorphism& b) {
        return a.vars_ == b.vars_ && a.images_ == b.images_;
    }

    /// g o h.
    friend Automorphism compose(const Automorphism& g, const Automorphism& h);

private:
    void set_inverse(std::function<Automorphism()> make);
    Automorphism affine_inverse() const;
    std::optional<Automorphism> triangular_inverse() const;

    // (exp(D_1) o ... o exp(D_k))^* = exp(D_k)^* o ... o exp(D_1)^*, and
    // exp(D)^* acts on polynomials as the operator sum D^j / j!.
    static Poly pullback_word(const std::vector<ExpFactor>& word, Poly p) {
        for (const auto& f : word) p = exp_series(f.derivation, f.orders, p);
        return p;
    }

    void init(Vars v, std::vector<Poly> images) {
        vars_ = std::move(v);
        if (images.size() != vars_->size()) throw VariableMismatch("automorphism needs one image per variable");
        for (auto& img : images) {
            if (img.vars() == vars_) continue;
            if (img.vars()->size() == 0 && img.is_constant()) {
                img = Poly(vars_, img.constant_value());
                continue;
            }
            throw VariableMismatch("automorphism image over a different variable list");
        }
        images_ = std::move(images);
        degree_ = -1;
        for (const auto& p : images_) degree_ = std::max(degree_, p.total_degree());
    }

    Vars vars_ = VarList::get({});
    std::vector<Poly> images_;
    int degree_ = -1;
    std::optional<std::vector<ExpFactor>> word_;
    std::shared_ptr<detail::InverseCell> inverse_;
};

namespace detail {

struct InverseCell {
    std::once_flag once;
    std::function<Automorphism()> make;
    std::optional<Automorphism> value;
};

}  // namespace detail

inline void Automorphism::set_inverse(std::function<Automorphism()> make) {
    inverse_ = std::make_shared<detail::InverseCell>();
    inverse_->make = std::move(make);
}

inline Automorphism Automorphism::inverse() const {
    if (word_) {
        std::vector<ExpFactor> inv;
        for (auto it = word_->rbegin(); it != word_->rend(); ++it) inv.push_back({-it->derivation, it->orders});
        Automorphism a;
        std::vector<Poly> imgs;
        for (const auto& name : vars_->names()) imgs.push_back(pullback_word(inv, Poly::variable(vars_, name)));
        a.init(vars_, std::move(imgs));
        a.word_ = std::move(inv);
        return a;
    }
    if (inverse_) {
        auto cell = inverse_;
        std::call_once(cell->once, [&] { cell->value = cell->make(); });
        return *cell->value;
    }
    if (degree_ <= 1) return affine_inverse();
    if (auto t = triangular_inverse()) return *std::move(t);
    throw PreconditionFailed("no inverse witness for this automorphism");
}

// v -> A v + b pulled back; the inverse pulls back along A^{-1}(v - b).
inline Automorphism Automorphism::affine_inverse() const {
    const std::size_t n = vars_->size();
    Matrix a(n, 2 * n);
    std::vector<Rational> shift(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = images_[i].coefficient(Monomial::unit(j));
        a(i, n + i) = 1;
        shift[i] = images_[i].constant_value();
    }
    Echelon e = rref(std::move(a));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw PreconditionFailed("affine map is not invertible");
    std::vector<Poly> imgs;
    for (std::size_t i = 0; i < n; ++i) {
        Poly p(vars_);
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& c = e.reduced(i, n + j);
            if (c != 0) p += (Poly::variable(vars_, (*vars_)[j]) - Poly(vars_, shift[j])) * c;
        }
        imgs.push_back(std::move(p));
    }
    Automorphism inv = from_images(vars_, std::move(imgs));
    if (!(compose(*this, inv) == identity(vars_))) throw InternalFault("affine inverse check failed");
    return inv;
}

// Images of the form c*v_i + g(already solved variables), in some order.
inline std::optional<Automorphism> Automorphism::triangular_inverse() const {
    const std::size_t n = vars_->size();
    std::vector<std::optional<Poly>> solved(n);
    for (std::size_t round = 0; round < n; ++round) {
        bool progress = false;
        for (std::size_t i = 0; i < n && !progress; ++i) {
            if (solved[i]) continue;
            Rational c = images_[i].coefficient(Monomial::unit(i));
            if (c == 0) continue;
            Poly rest = images_[i] - Poly::variable(vars_, (*vars_)[i]) * c;
            bool ok = true;
            for (std::size_t j = 0; j < n && ok; ++j)
                if (!solved[j] && rest.degree_in(j) > 0) ok = false;
            if (!ok) continue;
            std::vector<Poly> sub;
            for (std::size_t j = 0; j < n; ++j) sub.push_back(solved[j] ? *solved[j] : Poly::variable(vars_, (*vars_)[j]));
            solved[i] = (Poly::variable(vars_, (*vars_)[i]) - substitute(rest, sub)) * Rational(1 / c);
            progress = true;
        }
        if (!progress) return std::nullopt;
    }
    std::vector<Poly> imgs;
    for (auto& p : solved) imgs.push_back(std::move(*p));
    Automorphism inv = from_images(vars_, std::move(imgs));
    if (!(compose(*this, inv) == identity(vars_)) || !(compose(inv, *this) == identity(vars_))) return std::nullopt;
    return inv;
}

inline Automorphism compose(const Automorphism& g, const Automorphism& h) {
    if (g.vars_ != h.vars_) throw VariableMismatch("automorphisms over different variable lists");
    std::vector<Poly> imgs;
    imgs.reserve(g.images_.size());
    for (const auto& gi : g.images_) imgs.push_back(h.pullback(gi));
    Automorphism r;
    r.init(g.vars_, std::move(imgs));
    if (g.word_ && h.word_) {
        std::vector<ExpFactor> w = *g.word_;
        w.insert(w.end(), h.word_->begin(), h.word_->end());
        r.word_ = std::move(w);
    } else if (g.has_inverse() && h.has_inverse()) {
        r.set_inverse([g, h] { return compose(h.inverse(), g.inverse()); });
    }
    return r;
}

/// Exact equality of g o u and u o g.
inline bool commutes(const Automorphism& g, const Automorphism& u) { return compose(g, u) == compose(u, g); }

/// {x -> p; y -> q; z -> r}
inline std::string to_string(const Automorphism& d) {
    std::string s = "{";
    for (std::size_t i = 0; i < d.vars()->size(); ++i)
        s += (i ? "; " : " ") + std::string((*d.vars())[i]) + " -> " + to_string(d.image(i));
    return s + " }";
}

}  // namespace lnd
