#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace tng {

// Exact arithmetic everywhere: dwell times, costs and potentials are
// arbitrary-precision rationals, integer quantities (horizons, bounds)
// are arbitrary-precision integers.
using Rat = mpq_class;
using BigInt = mpz_class;

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Builds a canonical rational; the raw two-argument mpq_class constructor
/// does not reduce the fraction, which breaks exact comparisons.
inline Rat make_rat(long num, long den) {
    if (den == 0) throw ModelError("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q" or a plain integer string into a canonical rational.
inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw ModelError("empty rational literal");
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw ModelError("bad rational literal: " + s);
    if (r.get_den() == 0)
        throw ModelError("zero denominator: " + s);
    r.canonicalize();
    return r;
}

/// Formats canonically: integers without a slash, otherwise "p/q".
inline std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

inline long rat_to_long(const Rat& r) {
    if (!rat_is_integer(r) || !r.get_num().fits_slong_p())
        throw ModelError("value does not fit a machine integer: " + rat_to_string(r));
    return r.get_num().get_si();
}

inline BigInt int_pow(const BigInt& base, unsigned long exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

inline BigInt int_lcm(const BigInt& a, const BigInt& b) {
    BigInt out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

/// Least common multiple of the denominators of a set of rationals.
inline BigInt denominator_lcm(const std::vector<Rat>& values) {
    BigInt l = 1;
    for (const Rat& v : values) l = int_lcm(l, BigInt(v.get_den()));
    return l;
}

}  // namespace tng
