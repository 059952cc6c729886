#pragma once

// Exact rationals backed by GMP. mpq_class keeps values canonical (lowest
// terms, positive denominator) as long as every constructor path goes
// through canonicalize(), which the helpers below do.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lnd {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "-3", "5/7", "+12". Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    auto slash = s.find('/');
    auto valid_int = [](std::string_view t, bool allow_sign) {
        if (t.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && t[0] == '-') i = 1;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(s, true)) throw std::invalid_argument("bad rational literal: " + s);
        return Rational(Integer(s));
    }
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw std::invalid_argument("bad rational literal: " + s);
    return make_rational(Integer(num), Integer(den));
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// r^e for a (possibly negative) machine exponent; r must be nonzero if e < 0.
inline Rational pow(const Rational& r, long e) {
    if (e < 0) {
        if (r == 0) throw std::domain_error("zero to a negative power");
        Rational inv = 1 / r;
        return pow(inv, -e);
    }
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(e));
    return make_rational(n, d);
}

}  // namespace lnd
