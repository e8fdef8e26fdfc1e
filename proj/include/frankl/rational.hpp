#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace frankl {

// Exact arithmetic everywhere a certificate is involved. mpq_class keeps
// values canonical (reduced, positive denominator) by construction.
using Rat = mpq_class;
using Int = mpz_class;

inline std::string to_string(const Int& v) { return v.get_str(); }

// "p" or "p/q".
inline std::string to_string(const Rat& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

// mpq_class(num, den) does not reduce; GMP arithmetic requires canonical
// operands, so every ratio construction must pass through here.
inline Rat make_rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// g * y for g = lcm of the reduced denominators. Input must be nonnegative
// and not all zero; the result is a nonnegative integer vector with sum >= 1.
inline std::vector<Int> lcm_scale(const std::vector<Rat>& y) {
    Int g = 1;
    bool any = false;
    for (const Rat& v : y) {
        if (sgn(v) < 0) throw std::invalid_argument("lcm_scale: negative entry");
        if (sgn(v) != 0) any = true;
        mpz_lcm(g.get_mpz_t(), g.get_mpz_t(), v.get_den().get_mpz_t());
    }
    if (!any) throw std::invalid_argument("lcm_scale: all-zero vector");
    std::vector<Int> out;
    out.reserve(y.size());
    for (const Rat& v : y) {
        Rat scaled = v * Rat(g);
        out.emplace_back(scaled.get_num());
    }
    return out;
}

}  // namespace frankl
