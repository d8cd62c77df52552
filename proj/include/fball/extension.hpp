#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fball/bigint.hpp"
#include "fball/errors.hpp"
#include "fball/linalg.hpp"
#include "fball/scalar.hpp"

namespace fball {

// Coefficient trait surface shared by Q_p scalars and ring elements, so
// series and point code can be written once over any coordinate type.
inline long prime_of(const padic_scalar& x) { return x.prime(); }
inline padic_scalar zero_like(const padic_scalar& x) { return padic_scalar::zero(x.prime(), x.prec()); }
inline padic_scalar one_like(const padic_scalar& x) { return padic_scalar::one(x.prime(), x.prec()); }
inline padic_scalar embed_like(const padic_scalar&, const padic_scalar& s) { return s; }
inline padic_scalar scale_c(const padic_scalar& x, const padic_scalar& s) { return x.mul(s); }
inline rational prec_bound(const padic_scalar& x) { return rational(x.prec()); }

template <class C> class ext_elem;

/*
 * C[T]/(g) for monic g, C either padic_scalar (extensions of Q_p) or
 * ext_elem<padic_scalar> (two-step towers).  The ring owns the modulus and a
 * working precision for fresh coefficients; elements are reduced coefficient
 * vectors of length degree().
 */
template <class C>
rational prec_bound(const ext_elem<C>& x);

template <class C>
class ext_ring : public std::enable_shared_from_this<ext_ring<C>> {
public:
    enum class mkind { cyclotomic, eisenstein, kummer, tower };

    // use the make_*_ring helpers; they validate and fill in gen_valuation
    ext_ring(long p, long prec, mkind k, long level, std::vector<C> modulus, bool best_effort)
        : p_(p), prec_(prec), kind_(k), level_(level), modulus_(std::move(modulus)),
          best_effort_(best_effort), vt_(0) {}

    long prime() const { return p_; }
    long prec() const { return prec_; }
    long degree() const { return static_cast<long>(modulus_.size()) - 1; }
    mkind kind() const { return kind_; }
    long level() const { return level_; }
    bool best_effort() const { return best_effort_; }
    const std::vector<C>& modulus() const { return modulus_; }
    const rational& gen_valuation() const { return vt_; }
    void set_gen_valuation(const rational& v) { vt_ = v; } // called once by make helpers

    ext_elem<C> zero() const;
    ext_elem<C> one() const;
    ext_elem<C> gen() const;
    ext_elem<C> make(std::vector<C> coeffs) const;
    ext_elem<C> embed(const padic_scalar& s) const;
    ext_elem<C> embed_coeff(const C& c) const;

private:
    long p_;
    long prec_;
    mkind kind_;
    long level_;
    std::vector<C> modulus_;
    bool best_effort_;
    rational vt_;
};

using qring = ext_ring<padic_scalar>;
using qelem = ext_elem<padic_scalar>;

template <class C>
class ext_elem {
public:
    using ring_t = ext_ring<C>;

    ext_elem() = default;
    ext_elem(std::shared_ptr<const ring_t> R, std::vector<C> c) : ring_(std::move(R)), c_(std::move(c)) {
        const long d = ring_->degree();
        if (static_cast<long>(c_.size()) > d)
            fail(errc::bad_input, "coefficient vector longer than ring degree");
        while (static_cast<long>(c_.size()) < d) c_.push_back(coeff_zero());
    }

    const std::shared_ptr<const ring_t>& ring() const { return ring_; }
    const std::vector<C>& coeffs() const { return c_; }
    long prime() const { return ring_->prime(); }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    // index of the top coefficient that is nonzero at precision, -1 if none
    long formal_degree() const {
        for (long i = static_cast<long>(c_.size()) - 1; i >= 0; --i)
            if (!c_[i].is_zero()) return i;
        return -1;
    }

    ext_elem add(const ext_elem& o) const {
        match(o);
        std::vector<C> r(c_);
        for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + o.c_[i];
        return ext_elem(ring_, std::move(r));
    }

    ext_elem neg() const {
        std::vector<C> r(c_);
        for (auto& x : r) x = -x;
        return ext_elem(ring_, std::move(r));
    }

    ext_elem sub(const ext_elem& o) const { return add(o.neg()); }

    ext_elem mul(const ext_elem& o) const {
        match(o);
        const long d = ring_->degree();
        std::vector<C> conv(2 * d - 1, coeff_zero());
        for (long i = 0; i < d; ++i) {
            if (c_[i].is_zero()) continue;
            for (long j = 0; j < d; ++j) {
                if (o.c_[j].is_zero()) continue;
                conv[i + j] = conv[i + j] + c_[i] * o.c_[j];
            }
        }
        reduce_in_place(conv);
        conv.resize(d, coeff_zero());
        return ext_elem(ring_, std::move(conv));
    }

    ext_elem scale(const padic_scalar& s) const {
        std::vector<C> r(c_);
        for (auto& x : r) x = scale_c(x, s);
        return ext_elem(ring_, std::move(r));
    }

    // exact v_p-normalized valuation via the norm; nullopt when the element
    // vanishes to precision
    val_t valuation() const {
        if (is_zero()) return std::nullopt;
        long e = formal_degree();
        if (e == 0) return c_[0].valuation();
        if constexpr (std::is_same_v<C, padic_scalar>) {
            return valuation_resultant(e);
        } else {
            // two-step tower: norm down to the inner ring, then recurse
            C nrm = norm_to_inner(e);
            val_t vi = nrm.valuation();
            if (!vi) fail(errc::norm_precision_loss, "tower norm vanishes to precision");
            rational v = *vi / rational(ring_->degree());
            v.canonicalize();
            return v;
        }
    }

    rational prec_bound() const {
        rational best;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            rational b = fball::prec_bound(c_[i]) + rational(static_cast<long>(i)) * ring_->gen_valuation();
            if (first || b < best) {
                best = b;
                first = false;
            }
        }
        return best;
    }

    // Galois action T -> (1+T)^a - 1 on cyclotomic rings
    ext_elem conjugate(const bigint& a) const {
        if (ring_->kind() != ring_t::mkind::cyclotomic)
            fail(errc::unsupported_ring, "conjugation is only modeled on cyclotomic rings");
        bigint pk = pow_z(ring_->prime(), ring_->level());
        bigint ar = mod_z(a, pk);
        if (ar == 0 || mod_z(ar, ring_->prime()) == 0)
            fail(errc::bad_input, "conjugation exponent must be a unit mod p^level");
        ext_elem s = pow_elem_of(ring_->one().add(ring_->gen()), ar).sub(ring_->one());
        return eval_at(s);
    }

    // Horner evaluation of the coefficient polynomial at another ring element
    ext_elem eval_at(const ext_elem& s) const {
        ext_elem acc = ring_->zero();
        for (long i = static_cast<long>(c_.size()) - 1; i >= 0; --i)
            acc = acc.mul(s).add(ring_->embed_coeff(c_[i]));
        return acc;
    }

    ext_elem inv() const;

    bool equals(const ext_elem& o) const { return sub(o).is_zero(); }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) s += " + ";
            s += "(" + c_[i].str() + ")*T^" + std::to_string(i);
        }
        return s;
    }

private:
    friend class ext_ring<C>;

    C coeff_zero() const {
        if constexpr (std::is_same_v<C, padic_scalar>)
            return padic_scalar::zero(ring_->prime(), ring_->prec());
        else
            return zero_like(ring_->modulus()[0]);
    }

    void match(const ext_elem& o) const {
        if (ring_.get() != o.ring_.get())
            fail(errc::unsupported_ring, "elements from different ring instances");
    }

    void reduce_in_place(std::vector<C>& v) const {
        const long d = ring_->degree();
        const auto& g = ring_->modulus();
        for (long i = static_cast<long>(v.size()) - 1; i >= d; --i) {
            if (v[i].is_zero()) continue;
            C lead = v[i];
            for (long j = 0; j < d; ++j) // g is monic: clear v[i] against lead * g
                v[i - d + j] = v[i - d + j] - lead * g[j];
            v[i] = coeff_zero();
        }
    }

    static ext_elem pow_elem_of(ext_elem b, bigint e) {
        ext_elem r = b.ring_->one();
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = r.mul(b);
            e >>= 1;
            if (e > 0) b = b.mul(b);
        }
        return r;
    }

    val_t valuation_resultant(long e) const
        requires std::is_same_v<C, padic_scalar>
    {
        // lift to integral representatives, tracking a power-of-p shift
        long shift = 0;
        for (const auto& x : c_)
            if (!x.is_zero() && x.exact_valuation() < 0)
                shift = std::max(shift, -x.exact_valuation());
        const long d = ring_->degree();
        const long p = ring_->prime();
        long M = ring_->prec();
        for (const auto& x : ring_->modulus()) M = std::min(M, x.prec());
        for (const auto& x : c_)
            M = std::min(M, x.prec() + shift);
        if (M <= 0) fail(errc::norm_precision_loss, "no certified digits for resultant");
        bigint pm = pow_z(p, M), ps = pow_z(p, shift);
        auto liftc = [&](const padic_scalar& s, long extra_shift) {
            if (s.is_zero()) return bigint(0);
            padic_scalar t = extra_shift ? scale_c(s, padic_scalar::from_integer(p, pow_z(p, extra_shift), s.prec() + extra_shift + 1)) : s;
            return mod_z(t.lift(), pm);
        };
        const long n = d + e;
        std::vector<std::vector<bigint>> S(n, std::vector<bigint>(n, bigint(0)));
        const auto& g = ring_->modulus();
        for (long r = 0; r < e; ++r) // e rows of the modulus
            for (long j = 0; j <= d; ++j)
                S[r][r + j] = liftc(g[d - j], 0);
        for (long r = 0; r < d; ++r) // d rows of the element
            for (long j = 0; j <= e; ++j)
                S[e + r][r + j] = liftc(c_[e - j], shift);
        long detv = detail::det_valuation_mod(p, M, std::move(S));
        rational v(detv - shift * d, d);
        v.canonicalize();
        return v;
    }

    C norm_to_inner(long e) const; // defined after det helpers

    std::shared_ptr<const ring_t> ring_;
    std::vector<C> c_;
};

template <class C>
ext_elem<C> ext_ring<C>::zero() const {
    return ext_elem<C>(this->shared_from_this(), {});
}

template <class C>
ext_elem<C> ext_ring<C>::one() const {
    std::vector<C> v;
    if constexpr (std::is_same_v<C, padic_scalar>)
        v.push_back(padic_scalar::one(p_, prec_));
    else
        v.push_back(one_like(modulus_[0]));
    return ext_elem<C>(this->shared_from_this(), std::move(v));
}

template <class C>
ext_elem<C> ext_ring<C>::gen() const {
    std::vector<C> v;
    if constexpr (std::is_same_v<C, padic_scalar>) {
        v.push_back(padic_scalar::zero(p_, prec_));
        v.push_back(padic_scalar::one(p_, prec_));
    } else {
        v.push_back(zero_like(modulus_[0]));
        v.push_back(one_like(modulus_[0]));
    }
    return ext_elem<C>(this->shared_from_this(), std::move(v));
}

template <class C>
ext_elem<C> ext_ring<C>::embed_coeff(const C& c) const {
    std::vector<C> v{c};
    return ext_elem<C>(this->shared_from_this(), std::move(v));
}

template <class C>
ext_elem<C> ext_ring<C>::make(std::vector<C> coeffs) const {
    return ext_elem<C>(this->shared_from_this(), std::move(coeffs));
}

template <class C>
ext_elem<C> ext_ring<C>::embed(const padic_scalar& s) const {
    if (s.prime() != p_) fail(errc::bad_input, "embedding scalar with a different prime");
    std::vector<C> v;
    if constexpr (std::is_same_v<C, padic_scalar>)
        v.push_back(s);
    else
        v.push_back(embed_like(modulus_[0], s));
    return ext_elem<C>(this->shared_from_this(), std::move(v));
}

// lift a coefficient into a constant element (identity for matching types)
template <class C>
ext_elem<C> embed_coeff_helper(const ext_ring<C>& R, const C& c) {
    std::vector<C> v{c};
    return ext_elem<C>(R.shared_from_this(), std::move(v));
}

// trait overloads for ring elements
// cut a value down to |error| <= p^-bound (never raises precision)
inline padic_scalar truncate_c(const padic_scalar& x, const rational& bound) {
    long n = floor_q(bound);
    return n >= x.prec() ? x : x.truncated(n);
}

template <class C>
ext_elem<C> truncate_c(const ext_elem<C>& x, const rational& bound) {
    std::vector<C> v(x.coeffs());
    const rational& vt = x.ring()->gen_valuation();
    for (size_t i = 0; i < v.size(); ++i)
        v[i] = truncate_c(v[i], bound - rational(static_cast<long>(i)) * vt);
    return ext_elem<C>(x.ring(), std::move(v));
}

template <class C> long prime_of(const ext_elem<C>& x) { return x.prime(); }
template <class C> ext_elem<C> zero_like(const ext_elem<C>& x) { return x.ring()->zero(); }
template <class C> ext_elem<C> one_like(const ext_elem<C>& x) { return x.ring()->one(); }
template <class C> ext_elem<C> embed_like(const ext_elem<C>& x, const padic_scalar& s) { return x.ring()->embed(s); }
template <class C> ext_elem<C> scale_c(const ext_elem<C>& x, const padic_scalar& s) { return x.scale(s); }
template <class C> ext_elem<C> scale_c(const ext_elem<C>& x, const ext_elem<C>& s) { return x.mul(s); }
template <class C> rational prec_bound(const ext_elem<C>& x) { return x.prec_bound(); }

template <class C> ext_elem<C> operator+(const ext_elem<C>& a, const ext_elem<C>& b) { return a.add(b); }
template <class C> ext_elem<C> operator-(const ext_elem<C>& a, const ext_elem<C>& b) { return a.sub(b); }
template <class C> ext_elem<C> operator-(const ext_elem<C>& a) { return a.neg(); }
template <class C> ext_elem<C> operator*(const ext_elem<C>& a, const ext_elem<C>& b) { return a.mul(b); }

template <class E>
E pow_elem(E b, bigint e) {
    if (e < 0) fail(errc::bad_input, "pow_elem wants a nonnegative exponent");
    E r = one_like(b);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = r * b;
        e >>= 1;
        if (e > 0) b = b * b;
    }
    return r;
}

// (1+x)^-1 for v(x) > 0, by the geometric series; exact to the precision floor
template <class E>
E inv_one_plus(const E& x) {
    if (x.is_zero()) return one_like(x);
    val_t vx = x.valuation();
    if (!vx || *vx <= 0) fail(errc::convergence_violation, "inv_one_plus needs positive valuation");
    rational target = prec_bound(x);
    E acc = one_like(x), term = one_like(x);
    rational reached(0);
    while (reached < target) {
        term = -(term * x);
        acc = acc + term;
        reached += *vx;
    }
    return acc;
}

/*
 * Faddeev–LeVerrier characteristic polynomial over a commutative coefficient
 * ring: divisions are by the integers 1..n only, which exist as scalars.
 * Returns (c_1, ..., c_n) with char(t) = t^n + c_1 t^(n-1) + ... + c_n and
 * det = (-1)^n c_n.
 */
template <class E>
std::vector<E> charpoly_fl(const std::vector<std::vector<E>>& A) {
    const long n = static_cast<long>(A.size());
    E zero = zero_like(A[0][0]), one = one_like(A[0][0]);
    const long p = prime_of(A[0][0]);
    std::vector<std::vector<E>> N(n, std::vector<E>(n, zero));
    for (long i = 0; i < n; ++i) N[i][i] = one;
    std::vector<E> cs;
    for (long k = 1; k <= n; ++k) {
        std::vector<std::vector<E>> P(n, std::vector<E>(n, zero));
        for (long i = 0; i < n; ++i)
            for (long l = 0; l < n; ++l) {
                if (A[i][l].is_zero()) continue;
                for (long j = 0; j < n; ++j) {
                    if (N[l][j].is_zero()) continue;
                    P[i][j] = P[i][j] + A[i][l] * N[l][j];
                }
            }
        E tr = zero;
        for (long i = 0; i < n; ++i) tr = tr + P[i][i];
        long vk = valp_z(bigint(k), p);
        long kprec = ceil_q(prec_bound(tr)) + vk + 4;
        padic_scalar invk = padic_scalar::from_ratio(p, 1, k, std::max(kprec, vk + 2));
        E ck = -scale_c(tr, invk);
        cs.push_back(ck);
        if (k < n) {
            N = P;
            for (long i = 0; i < n; ++i) N[i][i] = N[i][i] + ck;
        }
    }
    return cs;
}

template <class E>
E det_fl(const std::vector<std::vector<E>>& A) {
    auto cs = charpoly_fl(A);
    E d = cs.back();
    return (A.size() % 2 == 0) ? d : -d;
}

template <class C>
C ext_elem<C>::norm_to_inner(long e) const {
    const long d = ring_->degree();
    const auto& g = ring_->modulus();
    C zero = zero_like(g[0]);
    const long n = d + e;
    std::vector<std::vector<C>> S(n, std::vector<C>(n, zero));
    for (long r = 0; r < e; ++r)
        for (long j = 0; j <= d; ++j)
            S[r][r + j] = g[d - j];
    for (long r = 0; r < d; ++r)
        for (long j = 0; j <= e; ++j)
            S[e + r][r + j] = c_[e - j];
    return det_fl(S);
}

template <class C>
ext_elem<C> ext_elem<C>::inv() const {
    val_t v = valuation();
    if (!v) fail(errc::division_by_zero_to_precision, "inverting zero-to-precision element");
    if (*v != 0) fail(errc::bad_input, "ring inversion is provided for units only");
    const long d = ring_->degree();
    if constexpr (std::is_same_v<C, padic_scalar>) {
        const long p = ring_->prime();
        long M = ring_->prec();
        for (const auto& x : c_) {
            if (!x.is_zero() && x.exact_valuation() < 0)
                fail(errc::not_integral, "unit inversion wants integral coefficients");
            M = std::min(M, x.prec());
        }
        bigint pm = pow_z(p, M);
        // multiplication-by-x matrix, columns x * T^j reduced mod g
        std::vector<std::vector<bigint>> A(d, std::vector<bigint>(d));
        ext_elem col = *this;
        for (long j = 0; j < d; ++j) {
            for (long i = 0; i < d; ++i)
                A[i][j] = col.c_[i].is_zero() ? bigint(0) : mod_z(col.c_[i].lift(), pm);
            if (j + 1 < d) col = col.mul(ring_->gen());
        }
        std::vector<bigint> b(d, bigint(0));
        b[0] = 1;
        std::vector<bigint> sol = detail::solve_unit_mod(p, M, std::move(A), std::move(b));
        std::vector<C> rc;
        rc.reserve(d);
        for (long i = 0; i < d; ++i) rc.push_back(padic_scalar::from_integer(p, sol[i], M));
        return ext_elem(ring_, std::move(rc));
    } else {
        // Cayley–Hamilton: x^-1 = -(x^(d-1) + c_1 x^(d-2) + ... + c_{d-1}) / c_d
        std::vector<std::vector<C>> A(d, std::vector<C>(d, zero_like(ring_->modulus()[0])));
        ext_elem col = *this;
        for (long j = 0; j < d; ++j) {
            for (long i = 0; i < d; ++i) A[i][j] = col.c_[i];
            if (j + 1 < d) col = col.mul(ring_->gen());
        }
        auto cs = charpoly_fl(A);
        ext_elem acc = ring_->zero();
        ext_elem xp = ring_->one();
        // acc = sum_{k=0}^{d-1} c_{d-1-k} x^k with c_0 = 1
        std::vector<C> coefs;
        coefs.push_back(one_like(ring_->modulus()[0]));
        for (long i = 0; i + 1 < d; ++i) coefs.push_back(cs[i]);
        for (long k = 0; k < d; ++k) {
            acc = acc.add(xp.mul(ring_->embed_coeff(coefs[d - 1 - k])));
            if (k + 1 < d) xp = xp.mul(*this);
        }
        C cinv = cs.back().inv();
        return acc.neg().mul(ring_->embed_coeff(cinv));
    }
}

// ---------------------------------------------------------------------------
// ring constructors

namespace detail {

// exact polynomial long division over Z, requires exact divisibility
inline std::vector<bigint> poly_divide_exact(std::vector<bigint> num, const std::vector<bigint>& den) {
    long dn = static_cast<long>(num.size()) - 1, dd = static_cast<long>(den.size()) - 1;
    if (den[dd] != 1) fail(errc::bad_modulus, "divisor must be monic");
    std::vector<bigint> q(dn - dd + 1, bigint(0));
    for (long i = dn; i >= dd; --i) {
        bigint c = num[i];
        if (c == 0) continue;
        q[i - dd] = c;
        for (long j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    for (const auto& c : num)
        if (c != 0) fail(errc::bad_modulus, "inexact polynomial division");
    return q;
}

inline std::vector<bigint> one_plus_t_power_minus_one(long p, long k) {
    // coefficients of (1+T)^(p^k) - 1
    bigint n = pow_z(p, static_cast<unsigned long>(k));
    unsigned long deg = n.get_ui();
    std::vector<bigint> c(deg + 1);
    bigint b = 1;
    c[0] = 0;
    for (unsigned long j = 1; j <= deg; ++j) {
        b = b * (n - static_cast<long>(j - 1)) / static_cast<long>(j);
        c[j] = b;
    }
    return c;
}

} // namespace detail

inline constexpr long max_cyclotomic_level = 4;
inline constexpr long max_kummer_exponent = 3;

// Q_p(zeta_{p^k}): modulus ((1+T)^(p^k)-1)/((1+T)^(p^(k-1))-1), Eisenstein of
// degree p^(k-1)(p-1); T stands for zeta - 1
inline std::shared_ptr<qring> make_cyclotomic_ring(long p, long k, long prec) {
    if (k < 1) fail(errc::bad_input, "cyclotomic level must be >= 1");
    if (k > max_cyclotomic_level) fail(errc::level_too_deep, "cyclotomic level capped at p^4");
    auto num = detail::one_plus_t_power_minus_one(p, k);
    auto den = detail::one_plus_t_power_minus_one(p, k - 1); // k=1: (1+T)-1 = T
    auto q = detail::poly_divide_exact(std::move(num), den);
    if (valp_z(q[0], p) != 1) fail(errc::not_eisenstein, "cyclotomic modulus failed the p || g(0) check");
    for (size_t j = 0; j + 1 < q.size(); ++j)
        if (q[j] != 0 && valp_z(q[j], p) < 1)
            fail(errc::not_eisenstein, "cyclotomic modulus has a unit lower coefficient");
    std::vector<padic_scalar> m;
    m.reserve(q.size());
    for (const auto& c : q) m.push_back(padic_scalar::from_integer(p, c, prec));
    auto R = std::make_shared<qring>(p, prec, qring::mkind::cyclotomic, k, std::move(m), false);
    val_t vt = R->gen().valuation();
    if (!vt) fail(errc::norm_precision_loss, "could not certify v(zeta-1)");
    R->set_gen_valuation(*vt);
    return R;
}

inline std::shared_ptr<qring> make_eisenstein_ring(long p, std::vector<padic_scalar> modulus, long prec) {
    const long d = static_cast<long>(modulus.size()) - 1;
    if (d < 2) fail(errc::bad_modulus, "extension modulus must have degree >= 2");
    if (modulus[d].is_zero() || !modulus[d].equals(padic_scalar::one(p, modulus[d].prec())))
        fail(errc::bad_modulus, "modulus must be monic");
    for (long j = 0; j < d; ++j) {
        if (modulus[j].is_zero()) continue;
        if (modulus[j].exact_valuation() < 1)
            fail(errc::not_eisenstein, "lower coefficient with valuation < 1 at index " + std::to_string(j));
    }
    if (modulus[0].is_zero() || modulus[0].exact_valuation() != 1)
        fail(errc::not_eisenstein, "constant term must have valuation exactly 1");
    auto R = std::make_shared<qring>(p, prec, qring::mkind::eisenstein, 0, std::move(modulus), false);
    val_t vt = R->gen().valuation();
    if (!vt) fail(errc::norm_precision_loss, "could not certify uniformizer valuation");
    R->set_gen_valuation(*vt);
    return R;
}

// T^(p^i) - beta with v(beta) = 0; no irreducibility proof is attempted, so
// results over this ring are flagged best-effort
inline std::shared_ptr<qring> make_kummer_ring(long p, long i, const padic_scalar& beta, long prec) {
    if (i < 1) fail(errc::bad_input, "kummer exponent must be >= 1");
    if (i > max_kummer_exponent) fail(errc::level_too_deep, "kummer exponent capped at 3");
    if (beta.is_zero() || beta.exact_valuation() != 0)
        fail(errc::bad_modulus, "kummer base must be a unit; factor out powers of p first");
    long deg = 1;
    for (long j = 0; j < i; ++j) deg *= p;
    std::vector<padic_scalar> m(deg + 1, padic_scalar::zero(p, prec));
    m[0] = -beta;
    m[deg] = padic_scalar::one(p, prec);
    auto R = std::make_shared<qring>(p, prec, qring::mkind::kummer, i, std::move(m), true);
    val_t vt = R->gen().valuation();
    if (!vt) fail(errc::norm_precision_loss, "could not certify kummer generator valuation");
    R->set_gen_valuation(*vt);
    return R;
}

using tring = ext_ring<qelem>;
using telem = ext_elem<qelem>;

// two-step tower: inner extension of Q_p, then a monic modulus over it;
// elements are nested polynomials
inline std::shared_ptr<tring> make_tower_ring(const std::shared_ptr<const qring>& inner,
                                              std::vector<qelem> outer_modulus) {
    const long d = static_cast<long>(outer_modulus.size()) - 1;
    if (d < 2) fail(errc::bad_modulus, "outer modulus must have degree >= 2");
    for (const auto& c : outer_modulus)
        if (c.ring().get() != inner.get())
            fail(errc::unsupported_ring, "outer modulus coefficients must live in the inner ring");
    if (!outer_modulus[d].equals(inner->one())) fail(errc::bad_modulus, "outer modulus must be monic");
    auto R = std::make_shared<tring>(inner->prime(), inner->prec(), tring::mkind::tower, 0,
                                     std::move(outer_modulus), true);
    val_t vt = R->gen().valuation();
    if (!vt) fail(errc::norm_precision_loss, "could not certify tower generator valuation");
    R->set_gen_valuation(*vt);
    return R;
}

// canonical inclusion of cyclotomic levels: zeta_{p^k} = zeta_{p^r}^(p^(r-k))
inline qelem embed_cyclotomic(const qelem& x, const std::shared_ptr<const qring>& target) {
    const auto& src = x.ring();
    if (src->kind() != qring::mkind::cyclotomic || target->kind() != qring::mkind::cyclotomic)
        fail(errc::unsupported_ring, "cyclotomic embedding needs cyclotomic rings");
    if (src->prime() != target->prime()) fail(errc::bad_input, "mixed primes");
    if (src->level() > target->level()) fail(errc::bad_input, "cannot embed downward in level");
    if (src->level() == target->level() && src.get() == target.get()) return x;
    bigint e = pow_z(src->prime(), target->level() - src->level());
    qelem s = pow_elem(target->one().add(target->gen()), e).sub(target->one());
    // Horner in the target ring
    qelem acc = target->zero();
    for (long i = static_cast<long>(x.coeffs().size()) - 1; i >= 0; --i)
        acc = acc.mul(s).add(target->embed(x.coeffs()[i]));
    return acc;
}

} // namespace fball
