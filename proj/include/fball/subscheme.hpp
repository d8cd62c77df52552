#pragma once

#include <utility>
#include <vector>

#include "fball/formal_group.hpp"

namespace fball {

// ultrametric distance data from a point to the vanishing set of the
// generators: dist is the least valuation among the generator values; empty
// dist means every generator vanishes at working precision, so the true
// distance valuation is only bounded below by `certified`
struct distance_result {
    val_t dist;
    rational certified;

    bool vanishes() const { return !dist.has_value(); }
    std::string str() const {
        if (!dist) return "0 (certified below p^-" + rat_str(certified) + ")";
        return "p^-" + rat_str(*dist);
    }
};

// closed formal subscheme of a product of one-parameter formal groups, cut out
// by finitely many truncated series in the coordinates.  laws[j] acts on the
// j-th coordinate.
template <class C>
struct formal_subscheme {
    std::vector<formal_group_law> laws;
    std::vector<truncated_series<C>> gens;

    int dim_ambient() const { return static_cast<int>(laws.size()); }

    void validate() const {
        if (laws.empty() || gens.empty()) fail(errc::bad_input, "empty subscheme data");
        for (const auto& g : gens)
            if (g.vars() != dim_ambient())
                fail(errc::variable_mismatch, "generator variable count != ambient dimension");
        for (const auto& l : laws)
            if (l.prime() != laws[0].prime()) fail(errc::bad_input, "mixed primes");
    }

    distance_result distance(const std::vector<C>& point) const {
        val_t best;         // least valuation among distinguishable values
        val_t floor_bound;  // least certified bound among vanishing values
        for (const auto& g : gens) {
            auto ev = ps_evaluate(g, point);
            if (ev.value.is_zero()) {
                floor_bound = val_min(floor_bound, val_t(ev.certified));
            } else {
                best = val_min(best, ev.value.valuation());
            }
        }
        // the distance is exact only when no vanishing generator could hide a
        // smaller valuation under its certified bound
        if (best && (!floor_bound || *best <= *floor_bound)) return {best, *best};
        return {std::nullopt, floor_bound ? *floor_bound : rational(0)};
    }

    // subscheme translated by Q: x lies in the result iff x (+) Q lies in the
    // original, so generators become g(F(X_1, Q_1), .., F(X_n, Q_n)).  For the
    // multiplicative law each coordinate map is affine and the substitution is
    // exact at every degree; in general it is exact modulo degrees above the
    // cap.
    formal_subscheme translate(const std::vector<C>& q) const {
        if (static_cast<int>(q.size()) != dim_ambient())
            fail(errc::variable_mismatch, "translation point has wrong dimension");
        int n = dim_ambient();
        int D = gens[0].degree_cap();
        for (const auto& g : gens) D = std::min(D, g.degree_cap());
        const C& ex = q[0];
        std::vector<truncated_series<C>> maps;
        maps.reserve(n);
        for (int j = 0; j < n; ++j) {
            truncated_series<C> t(n, D, ex);
            if (laws[j].kind() == fg_kind::multiplicative) {
                // F(X, q) = (1 + q) X + q, affine and exact at every degree
                std::array<int, 3> e{0, 0, 0};
                t.set_coeff(e, q[j]);
                e[j] = 1;
                t.set_coeff(e, one_like(ex).add(q[j]));
            } else {
                // column F(X_j, q) = sum_k (sum_l F_kl q^l) X_j^k
                const auto& F = laws[j].adder();
                int DF = F.degree_cap();
                std::vector<C> qpow{one_like(ex)};
                for (int l = 1; l <= DF; ++l) qpow.push_back(qpow.back().mul(q[j]));
                for (int k = 0; k <= std::min(D, DF); ++k) {
                    C ck = zero_like(ex);
                    for (int l = 0; k + l <= DF; ++l) {
                        const auto& c = F.coeff({k, l, 0});
                        if (c.is_zero()) continue;
                        ck = ck.add(scale_c(qpow[l], c));
                    }
                    std::array<int, 3> e{0, 0, 0};
                    e[j] = k;
                    t.set_coeff(e, ck);
                }
                // the column's own tail: adder content times q powers, which
                // only raise valuations while q stays in the disk
                rational vq = q[j].is_zero() ? prec_bound(q[j]) : rational(*q[j].valuation());
                if (!F.tail_known() || vq < rational(0))
                    t.set_tail_unknown();
                else
                    t.set_tail(val_min(F.min_valuation(), F.tail_bound()));
            }
            maps.push_back(std::move(t));
        }
        formal_subscheme out;
        out.laws = laws;
        for (const auto& g : gens) out.gens.push_back(ps_substitute(g, maps));
        return out;
    }
};

// lift a scalar-coefficient subscheme into an extension ring
template <class Ring>
auto lift_subscheme(const formal_subscheme<padic_scalar>& X, const std::shared_ptr<Ring>& R) {
    using E = decltype(R->zero());
    formal_subscheme<E> out;
    out.laws = X.laws;
    for (const auto& g : X.gens) {
        truncated_series<E> h(g.vars(), g.degree_cap(), R->zero());
        for (size_t i = 0; i < g.coeffs().size(); ++i)
            if (!g.coeffs()[i].is_zero() ||
                prec_bound(g.coeffs()[i]) < rational(R->prec()))
                h.set_coeff(g.grid()->exps[i], R->embed(g.coeffs()[i]));
        if (g.tail_known())
            h.set_tail(g.tail_bound());
        else
            h.set_tail_unknown();
        out.gens.push_back(std::move(h));
    }
    return out;
}

// Galois equivariance of the distance: sigma fixes the subscheme data (scalar
// coefficients), so d(alpha, X translated by sigma(alpha) (-) alpha) must
// equal d(alpha, X) exactly whenever both are finite.
struct galois_check_result {
    distance_result base;
    distance_result translated;
    bool equal;
};

template <class C>
galois_check_result galois_distance_check(const formal_subscheme<ext_elem<C>>& X,
                                          const std::vector<ext_elem<C>>& alpha,
                                          const bigint& galois_exponent) {
    if (static_cast<int>(alpha.size()) != X.dim_ambient())
        fail(errc::variable_mismatch, "point dimension != ambient dimension");
    std::vector<ext_elem<C>> shift;
    shift.reserve(alpha.size());
    for (size_t j = 0; j < alpha.size(); ++j) {
        auto sigma = alpha[j].conjugate(galois_exponent);
        shift.push_back(X.laws[j].point_sub(sigma, alpha[j]));
    }
    auto d0 = X.distance(alpha);
    auto dt = X.translate(shift).distance(alpha);
    bool eq;
    if (!d0.dist && !dt.dist) eq = true;  // both vanish at precision
    else if (d0.dist && dt.dist) eq = (*d0.dist == *dt.dist);
    else eq = false;
    return {d0, dt, eq};
}

// solve g(X, Y) = 0 for Y = h(X) by Newton iteration; needs g(0,0) = 0 and
// dg/dY a unit at the origin
template <class C>
truncated_series<C> hensel_parametrize(const truncated_series<C>& g) {
    if (g.vars() != 2) fail(errc::variable_mismatch, "parametrization needs a 2-variable generator");
    if (!g.coeff({0, 0, 0}).is_zero())
        fail(errc::singular_at_origin, "generator does not vanish at the origin");
    auto gy0 = g.coeff({0, 1, 0});
    if (gy0.is_zero() || *gy0.valuation() != rational(0))
        fail(errc::singular_at_origin, "dg/dY is not a unit at the origin");
    int D = g.degree_cap();
    const C& ex = g.coeffs()[0];
    auto gy = g.derivative(1);
    truncated_series<C> h(1, D, ex);
    auto X = series_variable(1, D, 0, ex);
    int steps = 0;
    for (;;) {
        auto r = compose(g, std::vector<truncated_series<C>>{X, h});
        if (r.is_zero()) break;
        auto slope = compose(gy, std::vector<truncated_series<C>>{X, h});
        h = h.sub(r.mul(slope.mul_inverse()));
        if (++steps > 40) fail(errc::residual_too_large, "newton iteration failed to settle");
    }
    // the true solution continues past the cap; with integral data and a unit
    // slope each further coefficient stays integral by the same recursion
    bool integral = g.tail_known() && g.stored_integral() &&
                    (!g.tail_bound() || *g.tail_bound() >= rational(0));
    if (integral)
        h.set_tail(rational(0));
    else
        h.set_tail_unknown();
    return h;
}

// graph subscheme X_2 = h(X_1) inside a product of two groups
template <class C>
formal_subscheme<C> graph_subscheme(const formal_group_law& l1, const formal_group_law& l2,
                                    const truncated_series<C>& h) {
    if (h.vars() != 1) fail(errc::variable_mismatch, "graph needs a 1-variable series");
    if (!h.coeff(0).is_zero()) fail(errc::nonzero_constant_term, "graph must pass the origin");
    int D = h.degree_cap();
    const C& ex = h.coeffs()[0];
    truncated_series<C> g(2, D, ex);
    for (int k = 0; k <= D; ++k) g.set_coeff({k, 0, 0}, h.coeff(k));
    g.set_coeff({0, 1, 0}, g.coeff({0, 1, 0}).sub(one_like(ex)));
    // the generator h(X_1) - X_2 inherits h's claim past the cap
    if (h.tail_known())
        g.set_tail(h.tail_bound());
    else
        g.set_tail_unknown();
    formal_subscheme<C> out;
    out.laws = {l1, l2};
    out.gens = {std::move(g)};
    return out;
}

/*
 * Stabilizer of a graph X_2 = h(X_1) in Gm^2 under translation by pairs of
 * p^r-torsion points.  (t1, t2) stabilizes iff t2 (+) h(x (-) t1) = h(x) as a
 * series over the level-r cyclotomic ring; translation is affine here, so the
 * comparison truncation D' only reflects how much of h we trust.
 */
struct stabilizer_result {
    std::vector<std::pair<long, long>> pairs;  // (c1, c2) with t_i = zeta^{c_i} - 1
    int truncation;
    long level;
};

inline stabilizer_result stabilizer_torsion(const truncated_series<padic_scalar>& h, int level,
                                            int trunc = -1) {
    if (h.vars() != 1) fail(errc::variable_mismatch, "stabilizer expects a 1-variable graph");
    long p = h.prime();
    long prec = 1;
    for (const auto& c : h.coeffs()) prec = std::max(prec, ceil_q(prec_bound(c)));
    int D = h.degree_cap();
    int Dp = trunc > 0 ? trunc : std::max(1, D / 2);
    auto tors = multiplicative_torsion(p, level, prec);
    const auto& R = tors.ring;
    long count = static_cast<long>(tors.points.size());

    // h with coefficients in the cyclotomic ring, at comparison truncation
    truncated_series<qelem> hx(1, D, R->zero());
    for (int k = 0; k <= D; ++k)
        if (!h.coeff(k).is_zero()) hx.set_coeff(k, R->embed(h.coeff(k)));
    if (h.tail_known())
        hx.set_tail(h.tail_bound());
    else
        hx.set_tail_unknown();

    stabilizer_result out;
    out.truncation = Dp;
    out.level = level;
    auto one = R->one();
    for (long c1 = 0; c1 < count; ++c1) {
        // x (-) t1 = (1 + it1) x + it1 with it1 the inverse torsion point
        const qelem& it1 = tors.points[(count - c1) % count];
        truncated_series<qelem> arg(1, D, R->zero());
        arg.set_coeff(0, it1);
        arg.set_coeff(1, one.add(it1));
        auto shifted = ps_substitute(hx, std::vector<truncated_series<qelem>>{arg});
        for (long c2 = 0; c2 < count; ++c2) {
            const qelem& t2 = tors.points[c2];
            // t2 (+) shifted = t2 + (1 + t2) shifted
            auto cand = shifted.scale(one.add(t2)).add(series_constant(1, D, t2));
            if (cand.restricted(Dp).equals(hx.restricted(Dp)))
                out.pairs.emplace_back(c1, c2);
        }
    }
    return out;
}

/*
 * Subtorus test for a graph X_2 = h(X_1) in Gm^2: the graph lies on a formal
 * subtorus iff h = [lambda] for lambda = h'(0) in Z_p, which happens iff
 * log(1 + h(x)) = lambda log(1 + x) at every stored degree.  The certificate
 * (lambda, -1) records the vanishing character combination.
 */
struct subtorus_result {
    bool special = false;
    padic_scalar lambda;
    std::pair<padic_scalar, padic_scalar> certificate;
    int defect_degree = -1;   // first degree where the character relation fails
    val_t defect_valuation;   // how badly it fails there

    subtorus_result() : lambda(), certificate{padic_scalar(), padic_scalar()} {}
};

inline subtorus_result subtorus_test(const truncated_series<padic_scalar>& h) {
    if (h.vars() != 1) fail(errc::variable_mismatch, "subtorus test expects a 1-variable graph");
    if (!h.coeff(0).is_zero())
        fail(errc::nonzero_constant_term, "graph must pass through the origin");
    long p = h.prime();
    int D = h.degree_cap();
    long prec = 1;
    for (const auto& c : h.coeffs()) prec = std::max(prec, ceil_q(prec_bound(c)));

    subtorus_result out;
    out.lambda = h.coeff(1);
    if (!out.lambda.is_zero() && *out.lambda.valuation() < rational(0)) {
        out.defect_degree = 1;
        out.defect_valuation = out.lambda.valuation();
        return out;
    }

    auto L = log1p_series(p, D, prec);
    auto lh = compose(L, std::vector<truncated_series<padic_scalar>>{h});
    auto defect = lh.sub(L.scale(out.lambda));
    for (int k = 1; k <= D; ++k) {
        if (defect.coeff(k).is_zero()) continue;
        out.defect_degree = k;
        out.defect_valuation = defect.coeff(k).valuation();
        return out;
    }
    out.special = true;
    out.certificate = {out.lambda, padic_scalar::one(p, prec).neg()};
    return out;
}

}  // namespace fball
