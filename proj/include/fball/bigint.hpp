#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "fball/errors.hpp"

namespace fball {

using bigint = mpz_class;
using rational = mpq_class;

// valuations live in Q ∪ {∞}; nullopt is ∞ ("zero to precision")
using val_t = std::optional<rational>;

inline bigint pow_z(const bigint& base, unsigned long e) {
    bigint r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline bigint pow_z(long base, unsigned long e) { return pow_z(bigint(base), e); }

// exact p-adic valuation of a nonzero integer
inline long valp_z(const bigint& n, long p) {
    if (n == 0) fail(errc::bad_input, "valuation of integer zero");
    bigint q;
    return static_cast<long>(mpz_remove(q.get_mpz_t(), n.get_mpz_t(), bigint(p).get_mpz_t()));
}

inline bigint mod_z(const bigint& a, const bigint& m) {
    bigint r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()); // nonnegative remainder
    return r;
}

inline bigint invert_z(const bigint& a, const bigint& m) {
    bigint r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        fail(errc::division_by_zero_to_precision, "no inverse mod " + m.get_str());
    return r;
}

inline bigint powmod_z(const bigint& b, const bigint& e, const bigint& m) {
    bigint r;
    if (e < 0) {
        bigint ib = invert_z(b, m), pe = -e;
        mpz_powm(r.get_mpz_t(), ib.get_mpz_t(), pe.get_mpz_t(), m.get_mpz_t());
    } else {
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    }
    return r;
}

inline rational ratl(long num, long den = 1) {
    rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const rational& q) { return q.get_str(); }

inline std::string val_str(const val_t& v) { return v ? rat_str(*v) : std::string("inf"); }

// min with ∞ treated as largest
inline val_t val_min(const val_t& a, const val_t& b) {
    if (!a) return b;
    if (!b) return a;
    return *a <= *b ? a : b;
}

inline bool val_lt(const val_t& a, const val_t& b) {
    if (!a) return false;       // ∞ < x never
    if (!b) return true;        // finite < ∞
    return *a < *b;
}

inline long floor_q(const rational& q) {
    bigint r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return static_cast<long>(r.get_si());
}

inline long ceil_q(const rational& q) {
    bigint r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return static_cast<long>(r.get_si());
}

} // namespace fball
