#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fball/formal_group.hpp"
#include "fball/series.hpp"

namespace fball {

// ---------------------------------------------------------------------------
// staged interpolation engine: a polynomial sequence phi_j with
// phi_j([n_i](a1)) = [m_i](a2) for all i <= j, where the index pairs
// (n_i, m_i) are chosen so that no finite union of lines covers them
// ---------------------------------------------------------------------------

namespace detail {

// sum over i = 1..j of (v + 2^i - 1), the valuation of psi_j at the next
// division node once n_i = p^(2^i - 1)
inline long cex_ledger_sum(long v, int j) {
    long s = 0;
    for (int i = 1; i <= j; ++i) s += v + (1L << i) - 1;
    return s;
}

inline padic_scalar cex_horner(const std::vector<padic_scalar>& poly, const padic_scalar& x) {
    padic_scalar acc = poly.back();
    for (size_t d = poly.size() - 1; d-- > 0;) acc = acc.mul(x).add(poly[d]);
    return acc;
}

inline rational cex_ratio(const bigint& num, const bigint& den) {
    rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace detail

// working precision schedule: every stage divides by psi_j at the next node,
// whose valuation is exactly the ledger sum, so the output budget must be
// fronted by the whole planned loss plus guard digits
inline long cex_internal_precision(long v, long n_out, int j_target) {
    return n_out + detail::cex_ledger_sum(v, j_target) + 8;
}

struct cex_state {
    formal_group_law law;
    padic_scalar alpha1, alpha2;
    long v = 0;        // common valuation of the seeds
    long n_out = 0;    // requested certified output precision
    long n_int = 0;    // working precision actually carried
    int j_target = 0;  // planned stage count (sizes the precision schedule)
    int stage = 0;     // pairs interpolated so far

    std::vector<padic_scalar> phi;  // coefficients of phi_stage, degree-indexed
    std::vector<padic_scalar> psi;  // expanded prod_i (X - roots[i])
    std::vector<bigint> n_idx, m_idx;
    std::vector<padic_scalar> roots;    // [n_i](alpha1)
    std::vector<padic_scalar> images;   // [m_i](alpha2)
    std::vector<padic_scalar> corrections;
    std::vector<padic_scalar> targets;  // A_j with [A_j](alpha2) = phi_j(0)
    std::vector<rational> slopes;       // r_j = (m_{j+1}-m_j)/(n_{j+1}-n_j)
    std::vector<rational> psi_ledger;   // v(psi_j([n_{j+1}](alpha1))), exact
    // valuations of the coefficients of c_j psi_j, one row per stage; these
    // must climb at every fixed degree for the phi_j to converge
    std::vector<std::vector<val_t>> correction_vals;

    std::vector<std::pair<bigint, bigint>> pairs() const {
        std::vector<std::pair<bigint, bigint>> out;
        for (size_t i = 0; i < n_idx.size(); ++i) out.emplace_back(n_idx[i], m_idx[i]);
        return out;
    }
};

namespace detail {

// residual of the interpolation condition at pair i, recomputed from scratch
inline padic_scalar cex_residual(const cex_state& st, size_t i) {
    auto rho = st.law.point_mult(st.n_idx[i], st.alpha1);
    auto mu = st.law.point_mult(st.m_idx[i], st.alpha2);
    return cex_horner(st.phi, rho).sub(mu);
}

// cross-route check: the closed-form endomorphism image must agree with the
// truncated [n] series evaluated at the seed, within the series certificate
inline void cex_route_check(const cex_state& st, const bigint& n, const padic_scalar& seed,
                            const padic_scalar& fast) {
    auto s = st.law.mult_by(n, st.law.degree_cap());
    auto se = ps_evaluate(s, std::vector<padic_scalar>{seed});
    auto d = se.value.sub(fast);
    if (!d.is_zero() && rational(d.exact_valuation()) < se.certified)
        fail(errc::construction_diverged,
             "endomorphism routes disagree at index " + n.get_str() + ": series path differs at valuation " +
                 rat_str(rational(d.exact_valuation())) + " against a certificate of " + rat_str(se.certified));
}

inline void cex_check_invariants(const cex_state& st) {
    const padic_scalar& c0 = st.phi[0];
    if (c0.is_zero() || c0.exact_valuation() != st.v)
        fail(errc::valuation_mismatch,
             "phi(0) drifted out of the seed sphere: expected valuation " + std::to_string(st.v));
    for (size_t i = 0; i < st.roots.size(); ++i) {
        auto res = cex_horner(st.phi, st.roots[i]).sub(st.images[i]);
        if (!res.is_zero())
            fail(errc::construction_diverged,
                 "interpolation lost at pair " + std::to_string(i + 1) + ", residual valuation " +
                     rat_str(*res.valuation()));
    }
}

}  // namespace detail

// seed state: n_1 = p, m_1 = 1, phi_1(X) = X - [n_1](a1) + a2, which puts
// phi_1(0) on the v-sphere and makes the first residual vanish identically
inline cex_state cex_init(formal_group_law law, const padic_scalar& a1, const padic_scalar& a2,
                          long n_out, int j_target) {
    long p = law.prime();
    if (a1.is_zero() || a2.is_zero() || prime_of(a1) != p || prime_of(a2) != p)
        fail(errc::valuation_mismatch, "seeds must be nonzero points of the group over the same prime");
    long v = a1.exact_valuation();
    if (v < 1 || a2.exact_valuation() != v)
        fail(errc::valuation_mismatch, "seeds need equal valuation >= 1, got " + val_str(a1.valuation()) +
                                           " and " + val_str(a2.valuation()));
    if (j_target < 1 || j_target > 24) fail(errc::bad_input, "stage target out of range [1, 24]");
    if (n_out < 1) fail(errc::bad_input, "output precision must be positive");
    if (law.kind() != fg_kind::multiplicative && !(rational(v) > ratl(1, p - 1)))
        fail(errc::unsupported_kind,
             "logarithm certificates need v > 1/(p-1) away from the multiplicative law");

    long n_int = cex_internal_precision(v, n_out, j_target);
    if (a1.prec() < n_int || a2.prec() < n_int)
        fail(errc::precision_exhausted, "seeds carry fewer than " + std::to_string(n_int) +
                                            " digits; construct them at the internal schedule");
    if (law.prec() < n_int)
        fail(errc::precision_exhausted, "law precision sits below the internal schedule of " +
                                            std::to_string(n_int) + " digits");

    cex_state st{std::move(law), a1.truncated(n_int), a2.truncated(n_int)};
    st.v = v;
    st.n_out = n_out;
    st.n_int = n_int;
    st.j_target = j_target;
    st.stage = 1;

    bigint n1(p);
    auto rho = st.law.point_mult(n1, st.alpha1);
    if (rho.is_zero() || rho.exact_valuation() != v + 1)
        fail(errc::valuation_mismatch, "[p] must raise the seed valuation by exactly one");
    st.n_idx.push_back(n1);
    st.m_idx.push_back(bigint(1));
    st.roots.push_back(rho);
    st.images.push_back(st.alpha2);
    st.phi = {st.alpha2.sub(rho), padic_scalar::one(st.law.prime(), n_int)};
    st.psi = {rho.neg(), padic_scalar::one(st.law.prime(), n_int)};
    detail::cex_route_check(st, n1, st.alpha1, rho);
    detail::cex_check_invariants(st);
    return st;
}

// convenience seed from exact integers; builds the law at the schedule
inline cex_state cex_init(fg_kind kind, long p, const bigint& a1, const bigint& a2, long n_out,
                          int j_target, int d_law = 16) {
    if (a1 == 0 || a2 == 0) fail(errc::valuation_mismatch, "seeds must be nonzero");
    long v = valp_z(a1, p);
    long n_int = cex_internal_precision(v, n_out, j_target);
    formal_group_law law = [&] {
        switch (kind) {
            case fg_kind::multiplicative:
                return formal_group_law::multiplicative(p, d_law, n_int);
            case fg_kind::lubin_tate:
                return formal_group_law::lubin_tate(p, d_law, n_int);
            case fg_kind::elliptic:
                fail(errc::unsupported_kind, "an elliptic law needs curve data; seed with a built law");
        }
        fail(errc::unsupported_kind, "unknown law kind");
    }();
    return cex_init(std::move(law), padic_scalar::from_integer(p, a1, n_int),
                    padic_scalar::from_integer(p, a2, n_int), n_out, j_target);
}

// one stage: pick n_{j+1} = p^(2^(j+1)-1), solve for the next index m_{j+1}
// through the group logarithm, divide out psi_j, and absorb the correction
inline void cex_step(cex_state& st) {
    int j = st.stage;
    long p = st.law.prime();
    if (j >= 30) fail(errc::bad_input, "stage count exceeds the index growth the schedule can carry");

    long s_j = detail::cex_ledger_sum(st.v, j);
    long v_next = st.v + (1L << (j + 1)) - 1;
    // the divisibility chain needs the new node strictly deeper than the
    // whole ledger; with doubling exponents this can only fail for v >= 2
    if (!(v_next > s_j))
        fail(errc::construction_diverged,
             "index growth too slow at stage " + std::to_string(j) + ": node valuation " +
                 std::to_string(v_next) + " does not exceed the ledger " + std::to_string(s_j));

    bigint n_next = pow_z(p, (1L << (j + 1)) - 1);
    auto rho_next = st.law.point_mult(n_next, st.alpha1);
    if (rho_next.is_zero())
        fail(errc::precision_exhausted, "[n](a1) vanishes at working precision; raise the schedule");
    if (rho_next.exact_valuation() != v_next)
        fail(errc::valuation_mismatch, "node valuation " + val_str(rho_next.valuation()) +
                                           " differs from the expected " + std::to_string(v_next));

    // ultrametric ledger: every factor rho_next - roots[i] sits at the
    // valuation of the shallower term, so the product lands exactly on s_j
    auto psi_at = padic_scalar::one(p, st.n_int);
    for (const auto& r : st.roots) psi_at = psi_at.mul(rho_next.sub(r));
    if (psi_at.is_zero() || psi_at.exact_valuation() != s_j)
        fail(errc::valuation_mismatch, "separant valuation " + val_str(psi_at.valuation()) +
                                           " off the ledger value " + std::to_string(s_j));

    // the target index: [A](a2) = phi_j(0), recovered through the logarithm
    auto lg_phi0 = st.law.point_log(st.phi[0]);
    auto lg_a2 = st.law.point_log(st.alpha2);
    auto target = lg_phi0.div(lg_a2);
    if (target.is_zero() || target.exact_valuation() != 0)
        fail(errc::valuation_mismatch, "log ratio must be a unit, got valuation " +
                                           val_str(target.valuation()));

    long m_mod = s_j - st.v;  // approximation depth that meets the ledger
    if (target.prec() < m_mod + 1)
        fail(errc::precision_exhausted, "target index known to " + std::to_string(target.prec()) +
                                            " digits, need " + std::to_string(m_mod + 1));
    bigint m_base = target.lift_mod(m_mod);
    bigint step_mod = pow_z(p, m_mod);

    // bump by multiples of p^m_mod until the new slope avoids all earlier
    // ones; each bump keeps the approximation depth intact
    bigint m_next;
    rational r_next;
    bool found = false;
    for (long t = 0; t <= 128; ++t) {
        m_next = m_base + bigint(t) * step_mod;
        r_next = detail::cex_ratio(m_next - st.m_idx.back(), n_next - st.n_idx.back());
        bool clash = false;
        for (const auto& r : st.slopes)
            if (r == r_next) { clash = true; break; }
        if (!clash) { found = true; break; }
    }
    if (!found) fail(errc::slope_exhaustion, "no fresh slope within 128 bumps at stage " + std::to_string(j));

    auto mu_next = st.law.point_mult(m_next, st.alpha2);
    auto near = mu_next.sub(st.phi[0]);
    rational near_v = near.is_zero() ? rational(near.prec()) : rational(near.exact_valuation());
    if (near_v < rational(s_j))
        fail(errc::construction_diverged, "target image misses phi(0) by valuation " + rat_str(near_v) +
                                              ", ledger requires " + std::to_string(s_j));

    auto num = mu_next.sub(detail::cex_horner(st.phi, rho_next));
    auto c = num.div(psi_at);
    if (!c.is_zero() && c.exact_valuation() < 0)
        fail(errc::integrality_failure, "correction at stage " + std::to_string(j) +
                                            " has valuation " + val_str(c.valuation()) +
                                            "; raise the working precision");

    // phi_{j+1} = phi_j + c psi_j, recording how deep each touched
    // coefficient moved; psi picks up the new root afterwards
    std::vector<val_t> moved(st.psi.size());
    if (st.phi.size() < st.psi.size())
        st.phi.resize(st.psi.size(), padic_scalar::zero(p, st.n_int));
    for (size_t d = 0; d < st.psi.size(); ++d) {
        auto delta = c.mul(st.psi[d]);
        moved[d] = delta.valuation();
        st.phi[d] = st.phi[d].add(delta);
    }
    std::vector<padic_scalar> grown(st.psi.size() + 1, padic_scalar::zero(p, st.n_int));
    for (size_t d = 0; d < st.psi.size(); ++d) {
        grown[d + 1] = grown[d + 1].add(st.psi[d]);
        grown[d] = grown[d].sub(st.psi[d].mul(rho_next));
    }
    st.psi = std::move(grown);

    st.n_idx.push_back(n_next);
    st.m_idx.push_back(m_next);
    st.roots.push_back(rho_next);
    st.images.push_back(mu_next);
    st.corrections.push_back(c);
    st.targets.push_back(target);
    st.slopes.push_back(r_next);
    st.psi_ledger.push_back(rational(s_j));
    st.correction_vals.push_back(std::move(moved));
    st.stage = j + 1;

    detail::cex_route_check(st, n_next, st.alpha1, rho_next);
    detail::cex_route_check(st, m_next, st.alpha2, mu_next);
    detail::cex_check_invariants(st);
}

inline cex_state cex_run(fg_kind kind, long p, const bigint& a1, const bigint& a2, long n_out,
                         int j_target, int d_law = 16) {
    cex_state st = cex_init(kind, p, a1, a2, n_out, j_target, d_law);
    while (st.stage < st.j_target) cex_step(st);
    return st;
}

struct cex_report {
    bool ok = true;
    std::vector<rational> residual_floor;  // certified lower bound per pair
    std::vector<bool> residual_zero;       // vanished to working precision
    int worst_pair = 0;                    // 1-based, smallest floor
    bool cauchy_ok = true;                 // correction depths climb degreewise
    int cauchy_stage = 0, cauchy_degree = -1;
    truncated_series<padic_scalar> phi_xy;  // phi(X) (-)_F Y
};

// the interpolating curve as a 2-variable series: phi(X) group-subtract Y,
// which vanishes on every pair ([n_j](a1), [m_j](a2))
inline truncated_series<padic_scalar> cex_curve(const cex_state& st, int d = 0) {
    if (d <= 0) d = st.law.degree_cap();
    if (static_cast<size_t>(d) + 1 < st.phi.size())
        fail(errc::bad_input, "curve truncation below the interpolating degree");
    auto Z = padic_scalar::zero(st.law.prime(), st.n_int);
    truncated_series<padic_scalar> phi2(2, d, Z);
    for (size_t k = 0; k < st.phi.size(); ++k) phi2.set_coeff({static_cast<int>(k), 0, 0}, st.phi[k]);
    auto Y = series_variable(2, d, 1, Z);
    auto minus_y = ps_substitute(st.law.inverse_series(d), std::vector<truncated_series<padic_scalar>>{Y});
    return ps_substitute(st.law.adder(),
                         std::vector<truncated_series<padic_scalar>>{phi2, minus_y});
}

// the curve as a graph through the origin: X -> phi(X) (-)_F phi(0), the
// shape the subtorus test consumes
inline truncated_series<padic_scalar> cex_translated_graph(const cex_state& st, int d = 0) {
    if (d <= 0) d = st.law.degree_cap();
    if (static_cast<size_t>(d) + 1 < st.phi.size())
        fail(errc::bad_input, "graph truncation below the interpolating degree");
    auto Z = padic_scalar::zero(st.law.prime(), st.n_int);
    truncated_series<padic_scalar> phi1(1, d, Z);
    for (size_t k = 0; k < st.phi.size(); ++k) phi1.set_coeff(static_cast<int>(k), st.phi[k]);
    auto shift = series_constant(1, d, st.law.point_neg(st.phi[0]));
    return ps_substitute(st.law.adder(), std::vector<truncated_series<padic_scalar>>{phi1, shift});
}

// recheck everything from scratch: fresh endomorphism images, full residual
// table, and the degreewise climb of the correction depths
inline cex_report cex_verify(const cex_state& st, long n_out, bool throw_on_fail = true) {
    cex_report rep{true, {}, {}, 0, true, 0, -1, cex_curve(st)};
    rational worst(0);
    for (size_t i = 0; i < st.n_idx.size(); ++i) {
        auto res = detail::cex_residual(st, i);
        bool zero = res.is_zero();
        rational floor = zero ? rational(res.prec()) : rational(res.exact_valuation());
        rep.residual_zero.push_back(zero);
        rep.residual_floor.push_back(floor);
        if (rep.worst_pair == 0 || floor < worst) {
            worst = floor;
            rep.worst_pair = static_cast<int>(i) + 1;
        }
    }
    if (worst < rational(n_out)) rep.ok = false;

    // nullopt depth means the coefficient vanished outright, which sits at
    // the top of the order
    for (size_t s = 0; s + 1 < st.correction_vals.size() && rep.cauchy_ok; ++s) {
        const auto& a = st.correction_vals[s];
        const auto& b = st.correction_vals[s + 1];
        for (size_t d = 0; d < a.size(); ++d) {
            if (!b[d]) continue;
            if (!a[d] || !(*b[d] > *a[d])) {
                rep.cauchy_ok = false;
                rep.cauchy_stage = static_cast<int>(s) + 1;
                rep.cauchy_degree = static_cast<int>(d);
                break;
            }
        }
    }
    if (!rep.cauchy_ok) rep.ok = false;

    if (!rep.ok && throw_on_fail) {
        if (worst < rational(n_out))
            fail(errc::residual_too_large, "residual at pair " + std::to_string(rep.worst_pair) +
                                               " has valuation " + rat_str(worst) + ", required " +
                                               std::to_string(n_out));
        fail(errc::residual_too_large,
             "correction depth fails to climb at stage " + std::to_string(rep.cauchy_stage) +
                 ", degree " + std::to_string(rep.cauchy_degree));
    }
    return rep;
}

struct line_cover_report {
    bool ok = true;
    std::vector<std::array<int, 3>> collinear;       // 1-based pair indices
    std::vector<std::pair<int, int>> equal_slopes;   // 1-based consecutive-slope clashes
    std::vector<rational> slopes;                    // r_j between consecutive pairs
};

// exact certificate that no line through any two pairs picks up a third,
// and that the consecutive slopes never repeat
inline line_cover_report line_cover_check(const std::vector<std::pair<bigint, bigint>>& pairs) {
    size_t n = pairs.size();
    if (n < 3) fail(errc::bad_input, "line cover check needs at least three pairs");
    line_cover_report rep;
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c) {
                bigint det = (pairs[b].first - pairs[a].first) * (pairs[c].second - pairs[a].second) -
                             (pairs[c].first - pairs[a].first) * (pairs[b].second - pairs[a].second);
                if (det == 0) {
                    rep.collinear.push_back({static_cast<int>(a) + 1, static_cast<int>(b) + 1,
                                             static_cast<int>(c) + 1});
                    rep.ok = false;
                }
            }
    for (size_t i = 0; i + 1 < n; ++i) {
        if (pairs[i + 1].first == pairs[i].first)
            fail(errc::bad_input, "repeated first index makes the slope undefined");
        rep.slopes.push_back(
            detail::cex_ratio(pairs[i + 1].second - pairs[i].second, pairs[i + 1].first - pairs[i].first));
    }
    for (size_t i = 0; i < rep.slopes.size(); ++i)
        for (size_t j = i + 1; j < rep.slopes.size(); ++j)
            if (rep.slopes[i] == rep.slopes[j]) {
                rep.equal_slopes.emplace_back(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
                rep.ok = false;
            }
    return rep;
}

}  // namespace fball
