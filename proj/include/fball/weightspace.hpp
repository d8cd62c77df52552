#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "fball/extension.hpp"
#include "fball/formal_group.hpp"
#include "fball/parallel.hpp"
#include "fball/series.hpp"
#include "fball/subscheme.hpp"

namespace fball {

// ---------------------------------------------------------------------------
// locally algebraic points on weight space Gm^n: coordinates
// (1+gamma)^(k_i) zeta_i - 1 with zeta_i of exact p-power order; the
// topological generator is fixed to 1 + gamma = 1 + p throughout
// ---------------------------------------------------------------------------

struct locally_algebraic_weight {
    long p = 0;
    std::vector<long> exponents;  // k_i
    std::vector<int> levels;      // exact order of zeta_i is p^level
    std::vector<long> selectors;  // zeta_i = zeta_{p^level}^selector, prime to p; 0 at level 0
    long gamma = 0;               // = p, recorded for reproducibility

    int max_level() const {
        int m = 0;
        for (int l : levels) m = std::max(m, l);
        return m;
    }
    bool algebraic() const { return max_level() == 0; }
    size_t dim() const { return exponents.size(); }
};

inline locally_algebraic_weight weight_point(long p, std::vector<long> k, std::vector<int> levels,
                                             std::vector<long> selectors) {
    if (k.empty() || k.size() > 3 || levels.size() != k.size() || selectors.size() != k.size())
        fail(errc::bad_input, "weight point needs matching exponents, levels, selectors in 1..3 coordinates");
    for (size_t i = 0; i < k.size(); ++i) {
        if (levels[i] < 0 || levels[i] > 3) fail(errc::level_too_deep, "torsion level capped at 3");
        if (levels[i] == 0) {
            selectors[i] = 0;
            continue;
        }
        bigint ord = pow_z(p, levels[i]);
        long s = static_cast<long>(mod_z(bigint(selectors[i]), ord).get_si());
        // strip p-divisibility so the recorded level is the exact order
        while (levels[i] > 0 && s % p == 0) {
            s /= p;
            levels[i] -= 1;
        }
        selectors[i] = levels[i] == 0 ? 0 : s;
    }
    return locally_algebraic_weight{p, std::move(k), std::move(levels), std::move(selectors), p};
}

// coordinates of the weight in a cyclotomic ring of level >= max_level
inline std::vector<qelem> realize_weight(const std::shared_ptr<qring>& R,
                                         const locally_algebraic_weight& w) {
    if (R->prime() != w.p) fail(errc::bad_input, "ring prime differs from the weight prime");
    if (R->level() < w.max_level())
        fail(errc::level_too_deep, "ring level " + std::to_string(R->level()) +
                                       " below the weight level " + std::to_string(w.max_level()));
    auto one = R->one();
    auto zeta_top = one.add(R->gen());
    std::vector<qelem> out;
    for (size_t i = 0; i < w.dim(); ++i) {
        auto u = padic_scalar::from_integer(w.p, 1 + w.gamma, R->prec()).pow(w.exponents[i]);
        qelem c = R->embed(u);
        if (w.levels[i] > 0) {
            bigint e = bigint(w.selectors[i]) * pow_z(w.p, R->level() - w.levels[i]);
            c = c.mul(pow_elem(zeta_top, e));
        }
        out.push_back(c.sub(one));
    }
    return out;
}

// all weights are diagonal-restricted in the Hida demos; the fuller
// arithmetic predicate is out of scope, this is the parallel filter only
inline bool parallel_weight(const locally_algebraic_weight& w) {
    for (size_t i = 1; i < w.dim(); ++i)
        if (w.exponents[i] != w.exponents[0]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// the [p^k] pushforward: coordinatewise (1 + x)^(p^k) - 1
// ---------------------------------------------------------------------------

template <class C>
C pk_push_point(const C& x, long p, long kexp) {
    C one = one_like(x);
    return pow_elem(one.add(x), pow_z(p, kexp)).sub(one);
}

// on the symbolic side the exponents scale and the torsion dies level by
// level: zeta_{p^l}^s maps to zeta_{p^(l-k)}^s
inline locally_algebraic_weight pk_pushforward(const locally_algebraic_weight& w, long kexp) {
    if (kexp < 0) fail(errc::bad_input, "pushforward exponent must be >= 0");
    locally_algebraic_weight out = w;
    bigint scale = pow_z(w.p, kexp);
    for (size_t i = 0; i < w.dim(); ++i) {
        bigint e = bigint(w.exponents[i]) * scale;
        if (!e.fits_slong_p()) fail(errc::enumeration_overflow, "pushed exponent overflows");
        out.exponents[i] = e.get_si();
        if (w.levels[i] <= kexp) {
            out.levels[i] = 0;
            out.selectors[i] = 0;
        } else {
            out.levels[i] = w.levels[i] - static_cast<int>(kexp);
            out.selectors[i] =
                static_cast<long>(mod_z(bigint(w.selectors[i]), pow_z(w.p, out.levels[i])).get_si());
        }
    }
    return out;
}

// graph chart of the image curve: X2 = h(X1) maps to U2 = ([p^k] o h o
// [p^k]^(-1))(U1).  The conjugation solves [p^k](h(x)) = H([p^k](x))
// degree by degree, so H picks up denominators (bounded by p^(k deg)) unless
// the curve is [p^k]-equivariant; the tail carries no claim either way, so
// consumers must test membership through exact point arithmetic
inline truncated_series<padic_scalar> pk_push_chart(const truncated_series<padic_scalar>& h,
                                                    long kexp) {
    if (h.vars() != 1) fail(errc::variable_mismatch, "chart pushforward expects a 1-variable graph");
    if (!h.coeff(0).is_zero()) fail(errc::nonzero_constant_term, "chart must pass through the origin");
    if (kexp < 0 || kexp > 6) fail(errc::bad_input, "chart pushforward exponent capped at 6");
    if (kexp == 0) return h;
    long p = h.prime();
    int D = h.degree_cap();
    long wp = 1;
    for (const auto& c : h.coeffs()) wp = std::max(wp, ceil_q(prec_bound(c)));
    wp += kexp * (D + 1) + 4;  // the conjugation divides by p^(k d) at degree d
    auto law = formal_group_law::multiplicative(p, D, wp);
    auto pk = law.mult_by(pow_z(p, kexp), D);
    auto inner = compose(h, std::vector<truncated_series<padic_scalar>>{reversion(pk)});
    return compose(pk, std::vector<truncated_series<padic_scalar>>{inner});
}

// ---------------------------------------------------------------------------
// closure classification demo: which locally algebraic weights land on the
// curve X2 = h(X1), level by level
// ---------------------------------------------------------------------------

enum class weight_verdict { special, bounded_order, inconclusive };

inline const char* weight_verdict_name(weight_verdict v) {
    switch (v) {
        case weight_verdict::special: return "special";
        case weight_verdict::bounded_order: return "bounded-order";
        case weight_verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct weight_scan_row {
    long k1 = 0, k2 = 0;
    int l1 = 0, l2 = 0;
    long s1 = 0, s2 = 0;
    bool on_curve = false;
    val_t distance;  // v(h(x1) - x2); disengaged when the residual vanishes
};

struct weight_closure_report {
    weight_verdict verdict = weight_verdict::inconclusive;
    padic_scalar lambda;            // h'(0), the character exponent when special
    int bounded_level = -1;         // max level carrying a hit when bounded
    std::vector<long> hits_per_level;
    long scanned = 0;
    subtorus_result torus;
    std::vector<weight_scan_row> rows;  // full table, kept on request

    weight_closure_report() : lambda() {}
};

namespace detail {

struct weight_coord {
    long k;
    int level;
    long selector;
    qelem value;
};

// every (exponent, level, selector) candidate for one coordinate, realized
// in the given ring
inline std::vector<weight_coord> weight_coords(const std::shared_ptr<qring>& R, long K, int L) {
    long p = R->prime();
    auto one = R->one();
    auto zeta_top = one.add(R->gen());
    std::vector<weight_coord> out;
    auto u1 = padic_scalar::from_integer(p, 1 + p, R->prec());
    for (long k = -K; k <= K; ++k) {
        qelem base = R->embed(u1.pow(k));
        for (int l = 0; l <= L; ++l) {
            if (l == 0) {
                out.push_back({k, 0, 0, base.sub(one)});
                continue;
            }
            bigint lift = pow_z(p, R->level() - l);
            for (long s = 1; s < pow_z(p, l); ++s) {
                if (s % p == 0) continue;
                out.push_back({k, l, s, base.mul(pow_elem(zeta_top, bigint(s) * lift)).sub(one)});
            }
        }
    }
    return out;
}

}  // namespace detail

inline weight_closure_report classify_weight_closure(const truncated_series<padic_scalar>& h,
                                                     long K, int L, bool keep_rows = false,
                                                     long ring_prec = 48) {
    if (h.vars() != 1) fail(errc::variable_mismatch, "closure scan expects a 1-variable graph");
    if (!h.coeff(0).is_zero()) fail(errc::nonzero_constant_term, "chart must pass through the origin");
    if (K < 0 || K > 200) fail(errc::enumeration_overflow, "exponent box capped at 200");
    if (L < 0 || L > 3) fail(errc::level_too_deep, "level cap is 3");
    long p = h.prime();

    weight_closure_report rep;
    rep.lambda = h.coeff(1);
    rep.torus = subtorus_test(h);
    rep.hits_per_level.assign(L + 1, 0);

    auto R = make_cyclotomic_ring(p, std::max(L, 1), ring_prec);
    auto coords = detail::weight_coords(R, K, L);
    const long n = static_cast<long>(coords.size());

    struct chunk {
        std::vector<long> hits;
        std::vector<weight_scan_row> rows;
    };
    auto per_x1 = parallel_map(coords, [&](const detail::weight_coord& a) {
        chunk out;
        out.hits.assign(L + 1, 0);
        auto img = ps_evaluate(h, std::vector<qelem>{a.value}).value;
        for (const auto& b : coords) {
            auto d = img.sub(b.value);
            bool on = d.is_zero();
            int lvl = std::max(a.level, b.level);
            if (on) out.hits[lvl] += 1;
            if (keep_rows)
                out.rows.push_back({a.k, b.k, a.level, b.level, a.selector, b.selector, on,
                                    on ? val_t{} : d.valuation()});
        }
        return out;
    });
    for (const auto& c : per_x1) {
        for (int l = 0; l <= L; ++l) rep.hits_per_level[l] += c.hits[l];
        if (keep_rows) rep.rows.insert(rep.rows.end(), c.rows.begin(), c.rows.end());
        rep.scanned += n;
    }

    int top = -1;
    for (int l = 0; l <= L; ++l)
        if (rep.hits_per_level[l] > 0) top = l;
    bool gapless = top >= 0;
    for (int l = 0; l <= top; ++l)
        if (rep.hits_per_level[l] == 0) gapless = false;

    if (top == L && gapless && rep.torus.special)
        rep.verdict = weight_verdict::special;
    else if (top < L)
        rep.verdict = weight_verdict::bounded_order;
    else
        rep.verdict = weight_verdict::inconclusive;
    rep.bounded_level = top;
    return rep;
}

}  // namespace fball
