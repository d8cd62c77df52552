#pragma once

#include <string>
#include <utility>

#include "fball/bigint.hpp"
#include "fball/errors.hpp"

namespace fball {

/*
 * An element of Q_p known to absolute precision N: the value is u * p^v with
 * 0 < u < p^(N-v) and p ∤ u, and the representation promises nothing past
 * p^N.  "Zero" means zero to precision N (|x| <= p^-N), not exact zero; a
 * nonzero representation always has v < N so at least one digit is certain.
 *
 * Precision propagation follows the ultrametric rules:
 *   add:  N = min(N1, N2)
 *   mul:  N = min(N1 + v2, N2 + v1)   (zero operands enter with v = +inf)
 *   div:  relative precision = min of the operands' relative precisions
 * Lowering precision is always allowed; raising it never is.
 */
class padic_scalar {
public:
    padic_scalar() : p_(3), zero_(true), v_(0), u_(0), prec_(1) {}

    static padic_scalar zero(long p, long prec) {
        check_prime(p);
        padic_scalar x;
        x.p_ = p;
        x.zero_ = true;
        x.prec_ = prec;
        return x;
    }

    static padic_scalar one(long p, long prec) { return from_integer(p, 1, prec); }

    static padic_scalar from_integer(long p, const bigint& n, long prec) {
        check_prime(p);
        if (prec < 1) fail(errc::precision_exhausted, "requested precision < 1");
        padic_scalar x;
        x.p_ = p;
        bigint m = mod_z(n, pow_z(p, prec));
        if (m == 0) {
            x.zero_ = true;
            x.prec_ = prec;
            return x;
        }
        long v = valp_z(m, p);
        if (v >= prec) { // stray digits beyond the certified window
            x.zero_ = true;
            x.prec_ = prec;
            return x;
        }
        x.zero_ = false;
        x.v_ = v;
        x.u_ = mod_z(m / pow_z(p, v), pow_z(p, prec - v));
        x.prec_ = prec;
        return x;
    }

    // value u * p^v certified mod p^prec; u may carry excess digits, they are cut
    static padic_scalar from_unit(long p, long v, const bigint& u, long prec) {
        check_prime(p);
        if (prec - v < 1) fail(errc::precision_exhausted, "unit with relative precision < 1");
        padic_scalar x;
        x.p_ = p;
        bigint m = mod_z(u, pow_z(p, prec - v));
        if (m == 0) {
            x.zero_ = true;
            x.prec_ = prec;
            return x;
        }
        long extra = valp_z(m, p);
        if (v + extra >= prec) {
            x.zero_ = true;
            x.prec_ = prec;
            return x;
        }
        x.zero_ = false;
        x.v_ = v + extra;
        x.u_ = mod_z(m / pow_z(p, extra), pow_z(p, prec - x.v_));
        x.prec_ = prec;
        return x;
    }

    static padic_scalar from_ratio(long p, const bigint& num, const bigint& den, long prec) {
        if (den == 0) fail(errc::bad_input, "zero denominator");
        if (num == 0) return zero(p, prec);
        long vn = valp_z(num, p), vd = valp_z(den, p);
        long v = vn - vd;
        if (prec - v < 1) fail(errc::precision_exhausted, "ratio below requested precision");
        bigint pk = pow_z(p, prec - v);
        bigint un = mod_z(num / pow_z(p, vn), pk);
        bigint ud = mod_z(den / pow_z(p, vd), pk);
        return from_unit(p, v, mod_z(un * invert_z(ud, pk), pk), prec);
    }

    static padic_scalar from_rational(long p, const rational& q, long prec) {
        return from_ratio(p, q.get_num(), q.get_den(), prec);
    }

    long prime() const { return p_; }
    long prec() const { return prec_; }
    bool is_zero() const { return zero_; } // zero to certified precision

    // nullopt encodes "infinite to this precision"
    val_t valuation() const {
        if (zero_) return std::nullopt;
        return rational(v_);
    }

    long exact_valuation() const {
        if (zero_) fail(errc::valuation_mismatch, "valuation of zero-to-precision scalar");
        return v_;
    }

    const bigint& unit() const { return u_; }
    long rel_prec() const { return zero_ ? 0 : prec_ - v_; }
    bool is_integral() const { return zero_ ? prec_ > 0 : v_ >= 0; }
    bool is_unit() const { return !zero_ && v_ == 0; }

    // canonical representative in [0, p^(prec-v)) * p^v, needs v >= 0
    bigint lift() const {
        if (zero_) return 0;
        if (v_ < 0) fail(errc::not_integral, "lift of negative-valuation scalar");
        return u_ * pow_z(p_, v_);
    }

    // representative of the value mod p^n (n <= prec), needs v >= 0
    bigint lift_mod(long n) const {
        if (n > prec_) fail(errc::precision_exhausted, "lift beyond certified precision");
        return mod_z(lift(), pow_z(p_, n));
    }

    padic_scalar truncated(long n) const {
        if (n >= prec_) return *this;
        if (zero_ || v_ >= n) return zero(p_, n);
        return from_unit(p_, v_, u_, n);
    }

    padic_scalar neg() const {
        if (zero_) return *this;
        return from_unit(p_, v_, pow_z(p_, prec_ - v_) - u_, prec_);
    }

    padic_scalar add(const padic_scalar& o) const {
        match(o);
        long n = std::min(prec_, o.prec_);
        if (zero_ && o.zero_) return zero(p_, n);
        if (zero_) return o.truncated(n);
        if (o.zero_) return truncated(n);
        long v = std::min(v_, o.v_);
        if (v >= n) return zero(p_, n);
        bigint pk = pow_z(p_, n - v);
        bigint s = mod_z(u_ * pow_z(p_, v_ - v) + o.u_ * pow_z(p_, o.v_ - v), pk);
        return from_unit(p_, v, s, n);
    }

    padic_scalar sub(const padic_scalar& o) const { return add(o.neg()); }

    padic_scalar mul(const padic_scalar& o) const {
        match(o);
        if (zero_ && o.zero_) return zero(p_, prec_ + o.prec_);
        if (zero_) return zero(p_, prec_ + o.v_);
        if (o.zero_) return zero(p_, o.prec_ + v_);
        long n = std::min(prec_ + o.v_, o.prec_ + v_);
        long v = v_ + o.v_;
        return from_unit(p_, v, mod_z(u_ * o.u_, pow_z(p_, n - v)), n);
    }

    padic_scalar div(const padic_scalar& o) const {
        match(o);
        if (o.zero_)
            fail(errc::division_by_zero_to_precision,
                 "divisor vanishes to precision " + std::to_string(o.prec_));
        if (zero_) return zero(p_, prec_ - o.v_);
        long rel = std::min(rel_prec(), o.rel_prec());
        long v = v_ - o.v_;
        bigint pk = pow_z(p_, rel);
        return from_unit(p_, v, mod_z(mod_z(u_, pk) * invert_z(o.u_, pk), pk), v + rel);
    }

    padic_scalar inv() const { return one(p_, rel_prec() == 0 ? prec_ : rel_prec()).div(*this); }

    // small integer powers, enough for series work
    padic_scalar pow(long e) const {
        if (e < 0) return inv().pow(-e);
        padic_scalar r = one(p_, prec_ + (zero_ ? 0 : std::max(0L, (e - 1) * v_)));
        padic_scalar b = *this;
        while (e > 0) {
            if (e & 1) r = r.mul(b);
            e >>= 1;
            if (e) b = b.mul(b);
        }
        return r;
    }

    bool equals(const padic_scalar& o) const { return sub(o).is_zero(); }

    // decimal form; negative valuation renders as an exact fraction
    std::string decimal_str() const {
        if (zero_) return "0";
        if (v_ >= 0) return lift().get_str();
        return u_.get_str() + "/" + pow_z(p_, -v_).get_str();
    }

    std::string str() const {
        std::string s = zero_ ? "0" : decimal_str();
        return s + " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
    }

private:
    static void check_prime(long p) {
        if (p < 3 || p % 2 == 0) fail(errc::bad_input, "prime must be odd and >= 3");
    }
    void match(const padic_scalar& o) const {
        if (p_ != o.p_) fail(errc::bad_input, "mixed primes in scalar arithmetic");
    }

    long p_;
    bool zero_;
    long v_;
    bigint u_;
    long prec_;
};

inline padic_scalar operator+(const padic_scalar& a, const padic_scalar& b) { return a.add(b); }
inline padic_scalar operator-(const padic_scalar& a, const padic_scalar& b) { return a.sub(b); }
inline padic_scalar operator-(const padic_scalar& a) { return a.neg(); }
inline padic_scalar operator*(const padic_scalar& a, const padic_scalar& b) { return a.mul(b); }
inline padic_scalar operator/(const padic_scalar& a, const padic_scalar& b) { return a.div(b); }

} // namespace fball
