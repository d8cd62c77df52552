#pragma once

#include <optional>
#include <vector>

#include "fball/series.hpp"

namespace fball {

enum class fg_kind { multiplicative, lubin_tate, elliptic };

inline const char* fg_kind_name(fg_kind k) {
    switch (k) {
        case fg_kind::multiplicative: return "multiplicative";
        case fg_kind::lubin_tate: return "lubin_tate";
        case fg_kind::elliptic: return "elliptic";
    }
    return "?";
}

// one-dimensional formal group law over Z_p with certified-precision
// coefficients.  The 2-variable adder F(X,Y) is stored at a fixed truncation;
// logarithms and endomorphism series are derived on demand at any 1-variable
// truncation via kind-specific closed routes (which stay cheap at high degree).
class formal_group_law {
  public:
    long prime() const { return p_; }
    long prec() const { return prec_; }
    int degree_cap() const { return D_; }
    fg_kind kind() const { return kind_; }
    const truncated_series<padic_scalar>& adder() const { return F_; }

    // F = X + Y + XY, exact at every degree
    static formal_group_law multiplicative(long p, int D, long prec) {
        auto Z = padic_scalar::zero(p, prec);
        auto one = padic_scalar::one(p, prec);
        truncated_series<padic_scalar> F(2, D, Z);
        F.set_coeff({1, 0, 0}, one);
        F.set_coeff({0, 1, 0}, one);
        if (D >= 2) F.set_coeff({1, 1, 0}, one);
        formal_group_law law(p, prec, D, fg_kind::multiplicative, std::move(F));
        return law;
    }

    // Lubin-Tate law attached to f with f = pX mod degree 2 and f = X^p mod p;
    // default f = pX + X^p.  F is grown degree by degree so that
    // F(f(X), f(Y)) = f(F(X, Y)); the degree m correction is the homogeneous
    // defect divided by p^m - p, which must stay integral.
    static formal_group_law lubin_tate(long p, int D, long prec,
                                       std::optional<truncated_series<padic_scalar>> fopt =
                                           std::nullopt) {
        long wp = prec + D + 4;  // headroom for one division by p per degree
        auto Z = padic_scalar::zero(p, wp);
        truncated_series<padic_scalar> f = fopt ? fopt->restricted(fopt->degree_cap())
                                                : default_lt_poly(p, D, wp);
        check_lt_poly(p, f);

        truncated_series<padic_scalar> F(2, D, Z);
        auto one = padic_scalar::one(p, wp);
        F.set_coeff({1, 0, 0}, one);
        F.set_coeff({0, 1, 0}, one);
        // f as 2-variable substitutions once
        truncated_series<padic_scalar> fX(2, D, Z), fY(2, D, Z);
        for (int k = 0; k <= f.degree_cap() && k <= D; ++k) {
            fX.set_coeff({k, 0, 0}, f.coeff(k));
            fY.set_coeff({0, k, 0}, f.coeff(k));
        }
        for (int m = 2; m <= D; ++m) {
            auto lhs = compose_poly_1to2(f, F);
            auto rhs = compose(F, std::vector<truncated_series<padic_scalar>>{fX, fY});
            auto E = lhs.sub(rhs);
            bigint den = pow_z(p, m) - p;
            bool touched = false;
            for (size_t i = 0; i < E.coeffs().size(); ++i) {
                auto e = E.grid()->exps[i];
                if (detail::exp_grid::degree(e) != m) continue;
                const padic_scalar& c = E.coeffs()[i];
                if (c.is_zero()) continue;
                padic_scalar d = c.div(padic_scalar::from_integer(p, den, wp));
                if (*d.valuation() < rational(0))
                    fail(errc::construction_diverged,
                         "lubin-tate correction left Z_p at degree " + std::to_string(m));
                F.set_coeff(e, F.coeff(e).add(d));
                touched = true;
            }
            (void)touched;
        }
        // the construction recursion keeps every correction in Z_p, so the
        // true adder lives in Z_p[[X,Y]] at all degrees, not just stored ones
        F.set_tail(rational(0));
        formal_group_law law(p, prec, D, fg_kind::lubin_tate, std::move(F));
        law.lt_f_ = f;
        return law;
    }

    // formal group of y^2 = x^3 + ax + b in the parameter t = -x/y: the curve
    // branch w(t) = t^3 + a t w^2 + b w^3 is iterated to convergence, the sum
    // comes from the chord through (t1, w1), (t2, w2)
    static formal_group_law elliptic(long p, int D, long prec, const bigint& a,
                                     const bigint& b) {
        // nonsingularity
        bigint disc = -16 * (4 * a * a * a + 27 * b * b);
        if (disc == 0) fail(errc::bad_input, "singular cubic");
        auto Z = padic_scalar::zero(p, prec);
        auto sa = padic_scalar::from_integer(p, a, prec);
        auto sb = padic_scalar::from_integer(p, b, prec);

        auto w1 = branch_w(p, D + 2, prec, sa, sb);
        // move everything into 2 variables
        auto t1 = series_variable(2, D, 0, Z);
        auto t2 = series_variable(2, D, 1, Z);
        truncated_series<padic_scalar> wt1(2, D, Z), wt2(2, D, Z), lambda(2, D, Z);
        for (int k = 0; k <= w1.degree_cap(); ++k) {
            if (k <= D) {
                wt1.set_coeff({k, 0, 0}, w1.coeff(k));
                wt2.set_coeff({0, k, 0}, w1.coeff(k));
            }
            // divided difference (t2^k - t1^k)/(t2 - t1) = sum t1^i t2^j, i+j = k-1
            if (w1.coeff(k).is_zero()) continue;
            for (int i = 0; i + 1 <= k && i + (k - 1 - i) <= D; ++i) {
                std::array<int, 3> e{i, k - 1 - i, 0};
                if (i + (k - 1 - i) > D) continue;
                lambda.set_coeff(e, lambda.coeff(e).add(w1.coeff(k)));
            }
        }
        auto nu = wt1.sub(lambda.mul(t1));
        auto lam2 = lambda.mul(lambda);
        auto lam3 = lam2.mul(lambda);
        auto one2 = series_constant(2, D, padic_scalar::one(p, prec));
        // cubic through the chord: c3 t^3 + c2 t^2 + .. with roots t1, t2, t3
        auto c3 = one2.add(lam2.scale(sa)).add(lam3.scale(sb));
        auto c2 = lambda.mul(nu).scale(sa).scale(padic_scalar::from_integer(p, 2, prec))
                      .add(lam2.mul(nu).scale(sb).scale(padic_scalar::from_integer(p, 3, prec)));
        // F = -t3 = c2/c3 + t1 + t2; inversion on this model is t -> -t
        auto F = c2.mul(c3.mul_inverse()).add(t1).add(t2);
        // chord addition on an integral Weierstrass model has Z_p
        // coefficients at every degree
        F.set_tail(rational(0));
        formal_group_law law(p, prec, D, fg_kind::elliptic, std::move(F));
        law.ell_a_ = sa;
        law.ell_b_ = sb;
        law.ell_w_ = w1;
        return law;
    }

    // logarithm to a chosen 1-variable truncation; log'(0) = 1
    truncated_series<padic_scalar> log_series(int D) const {
        switch (kind_) {
            case fg_kind::multiplicative:
                return log1p_series(p_, D, prec_);
            case fg_kind::lubin_tate:
                return lt_log(D);
            case fg_kind::elliptic:
                return elliptic_log(D);
        }
        fail(errc::unsupported_kind, "unknown law kind");
    }

    truncated_series<padic_scalar> exp_series(int D) const {
        return reversion(log_series(D));
    }

    // [-1](X)
    truncated_series<padic_scalar> inverse_series(int D) const {
        if (kind_ == fg_kind::elliptic) {
            auto Z = padic_scalar::zero(p_, prec_);
            auto r = truncated_series<padic_scalar>(1, D, Z);
            r.set_coeff(1, padic_scalar::one(p_, prec_).neg());
            return r;
        }
        return mult_by(-1, D);
    }

    // the endomorphism [a](X); coefficients land in Z_p and that is checked
    truncated_series<padic_scalar> mult_by(const bigint& a, int D) const {
        auto s = mult_by_unchecked(a, D);
        rational slack = mult_slack(s);
        if (slack < rational(0))
            fail(errc::integrality_lost, "[a] series has a coefficient of valuation " +
                                             rat_str(slack) + ", expected >= 0");
        // an endomorphism of a law over Z_p is integral at every degree, so
        // the exp(a log) route's unclaimed tail upgrades to a zero bound
        if (!s.tail_known()) s.set_tail(rational(0));
        return s;
    }

    // least coefficient valuation of [a]; >= 0 when the endomorphism is
    // honestly integral at working precision
    rational mult_by_slack(const bigint& a, int D) const {
        return mult_slack(mult_by_unchecked(a, D));
    }

    // --- point operations; C is the scalar ring or any extension element ---

    template <class C>
    C point_add(const C& x, const C& y) const {
        if (kind_ == fg_kind::multiplicative)
            return x.add(y).add(x.mul(y));  // exact closed form
        check_disk(x);
        check_disk(y);
        return ps_evaluate(F_, std::vector<C>{x, y}).value;
    }

    template <class C>
    C point_neg(const C& x) const {
        if (kind_ == fg_kind::elliptic) return x.neg();
        if (kind_ == fg_kind::multiplicative) {
            // -x/(1+x)
            check_disk(x);
            return inv_one_plus(x).mul(x).neg();
        }
        check_disk(x);
        auto inv = inverse_series(D_);
        return ps_evaluate(inv, std::vector<C>{x}).value;
    }

    template <class C>
    C point_sub(const C& x, const C& y) const {
        return point_add(x, point_neg(y));
    }

    // [n](x).  The multiplicative route is exact: (1+x)^n - 1 with the
    // exponent reduced modulo the order of 1 + m in the scalar case.  The
    // Lubin-Tate route applies f per power of p exactly, then the unit part
    // through the series.  Elliptic goes through the series directly.
    padic_scalar point_mult(const bigint& n, const padic_scalar& x) const {
        check_disk(x);
        if (kind_ == fg_kind::multiplicative) {
            if (n == 0) return padic_scalar::zero(p_, x.prec());
            long N = x.prec();
            bigint mod = pow_z(p_, N);
            // (1+x) is 1 mod p, so its order divides p^(N-1)
            bigint e = mod_z(n, pow_z(p_, N - 1));
            bigint base = mod_z(x.lift() + 1, mod);
            bigint r = powmod_z(base, e, mod);
            return padic_scalar::from_integer(p_, r - 1, N);
        }
        return point_mult_series(n, x);
    }

    template <class C>
    C point_mult(const bigint& n, const C& x) const {
        check_disk(x);
        if (kind_ == fg_kind::multiplicative) {
            if (n == 0) return zero_like(x);
            C one = one_like(x);
            if (n > 0) return pow_elem(one.add(x), n).sub(one);
            return pow_elem(inv_one_plus(x), bigint(-n)).sub(one);
        }
        return point_mult_series(n, x);
    }

    template <class C>
    C point_mult_series(const bigint& n, const C& x) const {
        bigint a = n < 0 ? bigint(-n) : n;
        C y = x;
        if (kind_ == fg_kind::lubin_tate && a != 0) {
            long k = a == 0 ? 0 : valp_z(a, p_);
            for (long i = 0; i < k; ++i) y = apply_poly(*lt_f_, y);
            a /= pow_z(p_, k);
        }
        if (a != 1) {
            auto s = mult_by(a, D_);
            y = ps_evaluate(s, std::vector<C>{y}).value;
        }
        if (n < 0) y = point_neg(y);
        return y;
    }

    // log of a point through an adaptively deep 1-variable series.  log' is
    // the reciprocal of an integral unit series, so k * a_k lies in Z_p and
    // the omitted terms obey the same k*v - v_p(k) floor as log(1+x)
    template <class C>
    C point_log(const C& x) const {
        if (kind_ == fg_kind::multiplicative) return log1p_point(x);
        if (x.is_zero()) {
            rational b = prec_bound(x);
            if (b <= rational(0))
                fail(errc::not_in_open_disk, "log argument not certifiably in the formal group");
            return truncate_c(x, detail::log_tail_floor(p_, b, 0));
        }
        check_disk(x);
        rational vx = *x.valuation();
        rational target = prec_bound(x);
        long K = detail::log_tail_cutoff(p_, vx, target);
        if (K < 2) K = 2;
        if (K > 512) K = 512;  // cost ceiling; the certificate shrinks honestly
        auto ls = log_series(static_cast<int>(K));
        C acc = zero_like(x);
        C pw = one_like(x);
        val_t fuzz;
        for (long k = 1; k <= K; ++k) {
            pw = pw.mul(x);
            const padic_scalar& a = ls.coeff(static_cast<int>(k));
            if (a.is_zero()) {
                fuzz = val_min(fuzz, val_t(prec_bound(a) + rational(k) * vx));
                continue;
            }
            acc = acc.add(scale_c(pw, a));
        }
        rational floor = detail::log_tail_floor(p_, vx, K);
        rational certified = *val_min(fuzz, val_t(std::min(floor, prec_bound(acc))));
        return truncate_c(acc, certified);
    }

    // structural sanity: unit axioms, commutativity, associativity (the cube
    // is checked at a reduced degree to stay affordable)
    void check_law(int assoc_D = 8) const {
        auto Z = padic_scalar::zero(p_, prec_);
        for (int k = 0; k <= D_; ++k) {
            // F(X, 0) = X and F(0, Y) = Y
            auto cx = F_.coeff({k, 0, 0});
            auto cy = F_.coeff({0, k, 0});
            auto one_at = [&](const padic_scalar& c) {
                return !c.is_zero() && c.equals(padic_scalar::one(p_, c.prec()));
            };
            bool okx = (k == 1) ? one_at(cx) : cx.is_zero();
            bool oky = (k == 1) ? one_at(cy) : cy.is_zero();
            if (!okx || !oky) fail(errc::chart_invalid, "formal group unit axiom failed");
        }
        for (size_t i = 0; i < F_.coeffs().size(); ++i) {
            auto e = F_.grid()->exps[i];
            if (!F_.coeff(e).sub(F_.coeff({e[1], e[0], 0})).is_zero())
                fail(errc::chart_invalid, "adder is not commutative");
        }
        int Da = std::min(assoc_D, D_);
        auto Fa = F_.restricted(Da);
        auto X = series_variable(3, Da, 0, Z);
        auto Y = series_variable(3, Da, 1, Z);
        auto W = series_variable(3, Da, 2, Z);
        auto FXY = compose(Fa, std::vector<truncated_series<padic_scalar>>{X, Y});
        auto FYW = compose(Fa, std::vector<truncated_series<padic_scalar>>{Y, W});
        auto left = compose(Fa, std::vector<truncated_series<padic_scalar>>{FXY, W});
        auto right = compose(Fa, std::vector<truncated_series<padic_scalar>>{X, FYW});
        if (!left.equals(right)) fail(errc::chart_invalid, "adder is not associative");
    }

    const std::optional<truncated_series<padic_scalar>>& lt_poly() const { return lt_f_; }
    const std::optional<padic_scalar>& curve_a() const { return ell_a_; }
    const std::optional<padic_scalar>& curve_b() const { return ell_b_; }

  private:
    formal_group_law(long p, long prec, int D, fg_kind k, truncated_series<padic_scalar> F)
        : p_(p), prec_(prec), D_(D), kind_(k), F_(std::move(F)) {}

    template <class C>
    void check_disk(const C& x) const {
        if (x.is_zero()) {
            if (prec_bound(x) <= rational(0))
                fail(errc::not_in_open_disk, "point not certifiably in the formal group");
            return;
        }
        if (*x.valuation() <= rational(0))
            fail(errc::not_in_open_disk, "formal group points need positive valuation");
    }

    static truncated_series<padic_scalar> default_lt_poly(long p, int D, long prec) {
        int cap = std::max<int>(D, static_cast<int>(p));
        truncated_series<padic_scalar> f(1, cap, padic_scalar::zero(p, prec));
        f.set_coeff(1, padic_scalar::from_integer(p, p, prec));
        f.set_coeff(static_cast<int>(p), padic_scalar::one(p, prec));
        return f;
    }

    static void check_lt_poly(long p, const truncated_series<padic_scalar>& f) {
        if (f.vars() != 1) fail(errc::bad_input, "lubin-tate polynomial is one-variable");
        if (!f.coeff(0).is_zero()) fail(errc::bad_input, "lubin-tate polynomial needs f(0) = 0");
        const auto& c1 = f.coeff(1);
        if (c1.is_zero() || !c1.equals(padic_scalar::from_integer(p, p, c1.prec())))
            fail(errc::bad_input, "lubin-tate polynomial needs f'(0) = p");
        // f = X^p mod p
        for (int k = 0; k <= f.degree_cap(); ++k) {
            const auto& c = f.coeff(k);
            if (c.is_zero()) continue;
            rational want = (k == p) ? rational(0) : rational(1);
            rational got = *c.valuation();
            if (k == p && got != rational(0))
                fail(errc::bad_input, "lubin-tate polynomial needs a unit at X^p");
            if (k != p && got < want)
                fail(errc::bad_input, "lubin-tate polynomial must reduce to X^p mod p");
        }
    }

    // f(S) with S a 2-variable series; f polynomial in one variable
    static truncated_series<padic_scalar> compose_poly_1to2(
        const truncated_series<padic_scalar>& f, const truncated_series<padic_scalar>& S) {
        return compose(f, std::vector<truncated_series<padic_scalar>>{S});
    }

    template <class C>
    static C apply_poly(const truncated_series<padic_scalar>& f, const C& x) {
        // exact polynomial evaluation, highest degree first
        C acc = zero_like(x);
        for (int k = f.degree_cap(); k >= 0; --k) {
            acc = acc.mul(x);
            if (!f.coeff(k).is_zero()) acc = acc.add(scale_c(one_like(x), f.coeff(k)));
        }
        return acc;
    }

    // log from the functional equation log(f(X)) = p log(X)
    truncated_series<padic_scalar> lt_log(int D) const {
        long wp = prec_ + D + 4;
        auto Z = padic_scalar::zero(p_, wp);
        auto f = *lt_f_;
        int fD = f.degree_cap();
        if (fD < D) {
            // re-pad f to the requested cap for powering
            truncated_series<padic_scalar> g(1, D, Z);
            for (int k = 0; k <= fD; ++k) g.set_coeff(k, f.coeff(k));
            f = g;
        } else if (fD > D) {
            f = f.restricted(D);
        }
        truncated_series<padic_scalar> log(1, D, Z);
        log.set_coeff(1, padic_scalar::one(p_, wp));
        std::vector<truncated_series<padic_scalar>> pows{f};
        for (int k = 2; k <= D; ++k) pows.push_back(pows.back().mul(f));
        for (int m = 2; m <= D; ++m) {
            padic_scalar s = Z;
            for (int k = 1; k < m; ++k) {
                const auto& ak = log.coeff(k);
                if (ak.is_zero()) continue;
                s = s.add(ak.mul(pows[k - 1].coeff(m)));
            }
            if (s.is_zero()) continue;
            bigint den = p_ - pow_z(p_, m);
            log.set_coeff(m, s.div(padic_scalar::from_integer(p_, den, wp)));
        }
        // the dropped coefficients carry denominators of unbounded depth
        log.set_tail_unknown();
        return log;
    }

    // invariant differential (t w' - w)/(2w) dt integrated
    truncated_series<padic_scalar> elliptic_log(int D) const {
        long wp = prec_ + 2;
        auto w = branch_w(p_, D + 2, wp, *ell_a_, *ell_b_);
        auto t = series_variable(1, D + 2, 0, padic_scalar::zero(p_, wp));
        auto num = t.mul(w.derivative(0)).sub(w);
        // both num and w are divisible by t^3; shift down before dividing
        auto num3 = shift_down(num, 3).restricted(D);
        auto den3 = shift_down(w, 3).restricted(D);
        auto omega = num3.mul(den3.mul_inverse())
                         .scale(padic_scalar::from_ratio(p_, 1, 2, wp));
        return omega.integrate(0);
    }

    static truncated_series<padic_scalar> shift_down(const truncated_series<padic_scalar>& s,
                                                     int k) {
        truncated_series<padic_scalar> r(1, s.degree_cap(), s.coeffs()[0]);
        for (int m = k; m <= s.degree_cap(); ++m) r.set_coeff(m - k, s.coeff(m));
        return r;
    }

    static truncated_series<padic_scalar> branch_w(long p, int D, long prec,
                                                   const padic_scalar& a,
                                                   const padic_scalar& b) {
        auto Z = padic_scalar::zero(p, prec);
        auto t3 = truncated_series<padic_scalar>(1, D, Z);
        t3.set_coeff(3, padic_scalar::one(p, prec));
        auto t = series_variable(1, D, 0, Z);
        auto w = t3;
        // each pass fixes at least one more degree; w = t^3(1 + ...)
        for (int it = 0; it < D; ++it) {
            auto w2 = w.mul(w);
            auto nxt = t3.add(t.mul(w2).scale(a)).add(w2.mul(w).scale(b));
            if (nxt.equals(w)) break;
            w = nxt;
        }
        return w;
    }

    truncated_series<padic_scalar> mult_by_unchecked(const bigint& a, int D) const {
        if (kind_ == fg_kind::multiplicative) {
            // (1+X)^a - 1 = sum_k binom(a, k) X^k, exact p-adic binomials
            auto Z = padic_scalar::zero(p_, prec_);
            truncated_series<padic_scalar> r(1, D, Z);
            bigint num = 1, den = 1;
            for (int k = 1; k <= D; ++k) {
                num *= (a - (k - 1));
                den *= k;
                if (num == 0) break;
                long extra = valp_z(den, p_);
                r.set_coeff(k, padic_scalar::from_ratio(p_, num, den, prec_ + extra + 1));
            }
            // binomial coefficients of an integer are integers, so past the
            // cap the series stays integral (and empty for 0 <= a <= D)
            if (a < 0 || a > bigint(D)) r.set_tail(rational(0));
            return r;
        }
        auto lg = log_series(D);
        auto scaled = lg.scale(padic_scalar::from_integer(p_, a, prec_ + D + 4));
        return compose(exp_series(D), std::vector<truncated_series<padic_scalar>>{scaled});
    }

    static rational mult_slack(const truncated_series<padic_scalar>& s) {
        rational worst(0);
        for (const auto& c : s.coeffs()) {
            if (c.is_zero()) continue;
            rational v = *c.valuation();
            if (v < worst) worst = v;
        }
        return worst;
    }

    long p_, prec_;
    int D_;
    fg_kind kind_;
    truncated_series<padic_scalar> F_;
    std::optional<truncated_series<padic_scalar>> lt_f_;
    std::optional<padic_scalar> ell_a_, ell_b_;
    std::optional<truncated_series<padic_scalar>> ell_w_;
};

// generic logarithm from the adder alone: log' = F_X(0, T)^{-1}; used to
// cross-check the kind-specific routes
inline truncated_series<padic_scalar> log_from_adder(
    const truncated_series<padic_scalar>& F) {
    int D = F.degree_cap();
    auto Z = zero_like(F.coeffs()[0]);
    truncated_series<padic_scalar> G(1, D, Z);
    for (int k = 0; k + 1 <= D; ++k) G.set_coeff(k, F.coeff({1, k, 0}));
    return G.mul_inverse().integrate(0);
}

// all [p^r]-torsion of the multiplicative formal group, living in the level-r
// cyclotomic ring: the points (1+T)^c - 1 for c = 0 .. p^r - 1
struct torsion_set {
    std::shared_ptr<const qring> ring;
    std::vector<qelem> points;
};

inline torsion_set multiplicative_torsion(long p, int level, long prec) {
    auto R = make_cyclotomic_ring(p, level, prec);
    torsion_set out;
    out.ring = R;
    bigint count = pow_z(p, level);
    auto one = R->one();
    auto zeta = R->gen().add(one);  // 1 + T
    qelem pw = one;
    for (bigint c = 0; c < count; ++c) {
        out.points.push_back(pw.sub(one));
        pw = pw.mul(zeta);
    }
    return out;
}

}  // namespace fball
