#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fball/formal_group.hpp"
#include "fball/newton_polygon.hpp"
#include "fball/parallel.hpp"
#include "fball/subscheme.hpp"

namespace fball {

// ---------------------------------------------------------------------------
// backward orbits through the Newton polygon of [p](X) - alpha
// ---------------------------------------------------------------------------

// one division step: the polygon only depends on v(alpha) and on the exact
// coefficient valuations of the [p] series
struct division_data {
    rational v_in;                      // valuation of the point being divided
    newton_polygon polygon;             // of [p](X) - alpha
    long height_index;                  // abscissa of the first unit coefficient
    rational chosen;                    // minimal preimage valuation, iterated on
    std::optional<rational> principal;  // the span-1 break at abscissa 1, if any

    // flattened multiset of preimage valuations
    std::vector<rational> valuations() const {
        std::vector<rational> out;
        for (const auto& s : polygon.segments)
            for (long i = 0; i < s.mult; ++i) out.push_back(s.root_val);
        return out;
    }
};

namespace detail {

inline truncated_series<padic_scalar> p_mult_series(const formal_group_law& law) {
    long p = law.prime();
    switch (law.kind()) {
        case fg_kind::multiplicative:
            return law.mult_by(p, static_cast<int>(p));
        case fg_kind::lubin_tate:
            return *law.lt_poly();
        case fg_kind::elliptic:
            // height can be 2, so look as far as X^(p^2)
            return law.mult_by(p, static_cast<int>(p * p));
    }
    fail(errc::unsupported_kind, "unknown formal group kind");
}

// hull ordinate at abscissa k, linear between vertices
inline rational hull_height(const newton_polygon& np, long k) {
    for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
        const auto& l = np.vertices[i];
        const auto& r = np.vertices[i + 1];
        if (k >= l.first && k <= r.first)
            return l.second +
                   (r.second - l.second) * rational(k - l.first) / rational(r.first - l.first);
    }
    return np.vertices.back().second;
}

}  // namespace detail

inline division_data division_step(const formal_group_law& law, const rational& v_alpha) {
    if (v_alpha <= 0) fail(errc::not_in_open_disk, "division needs a point of positive valuation");
    auto s = detail::p_mult_series(law);

    long height_index = -1;
    std::vector<std::pair<long, rational>> pts{{0, v_alpha}};
    std::vector<std::pair<long, rational>> fuzzy;  // coefficients zero at precision
    for (int k = 1; k <= s.degree_cap(); ++k) {
        auto c = s.coeff(k);
        if (c.is_zero()) {
            fuzzy.emplace_back(k, prec_bound(c));
            continue;
        }
        rational v = *c.valuation();
        pts.emplace_back(k, v);
        if (v == 0) {
            height_index = k;
            break;
        }
    }
    if (height_index < 0)
        fail(errc::slope_exhaustion,
             "no unit coefficient in the [p] series up to degree " +
                 std::to_string(s.degree_cap()));

    division_data out;
    out.v_in = v_alpha;
    out.polygon = lower_hull(pts);
    out.height_index = height_index;
    // a vanished coefficient sitting below the hull could change it
    for (const auto& [k, bound] : fuzzy)
        if (k < height_index && bound < detail::hull_height(out.polygon, k))
            fail(errc::polygon_degenerate, "coefficient at degree " + std::to_string(k) +
                                               " is known only above its hull height");
    out.chosen = out.polygon.segments.back().root_val;
    for (const auto& seg : out.polygon.segments)
        if (seg.principal) out.principal = seg.root_val;
    return out;
}

// iterated division, always following the minimal-valuation slope (the branch
// that keeps descending; the principal slope, when present, tracks the point
// itself drifting toward the boundary instead)
inline std::vector<division_data> division_valuations(const formal_group_law& law,
                                                      const rational& v_alpha, int steps) {
    if (steps < 1) fail(errc::bad_input, "need at least one division step");
    std::vector<division_data> out;
    rational v = v_alpha;
    for (int i = 0; i < steps; ++i) {
        out.push_back(division_step(law, v));
        v = out.back().chosen;
    }
    return out;
}

// the halving bound: every preimage valuation off the principal slope is at
// most v(alpha)/2, and so is the slope the iteration follows
inline bool halving_ok(const division_data& d) {
    if (rational(2) * d.chosen > d.v_in) return false;
    for (const auto& seg : d.polygon.segments)
        if (!seg.principal && rational(2) * seg.root_val > d.v_in) return false;
    return true;
}

// ---------------------------------------------------------------------------
// explicit p^i-division points for the multiplicative group
// ---------------------------------------------------------------------------

// 1 + x = zeta_{p^i}^twist * (1+gamma)^(1/p^i) inside the two-step tower
// Q_p[S,T]/(cyclotomic level i, T^(p^i) - (1+gamma)); the defining relations
// make [p^i](x) = gamma an exact identity, which is re-checked anyway
struct backward_point_result {
    long depth;
    bigint twist;
    padic_scalar gamma;
    std::shared_ptr<tring> ring;         // null at depth 0
    std::optional<telem> point;          // tower coordinates, depth >= 1
    std::optional<padic_scalar> scalar;  // depth-0 passthrough
    bool verified;
    bool irreducible_checked;  // polygon certificate for the Kummer modulus
};

inline backward_point_result backward_point(const formal_group_law& law,
                                            const padic_scalar& gamma, long depth,
                                            const bigint& twist = 0) {
    if (law.kind() != fg_kind::multiplicative)
        fail(errc::unsupported_kind, "backward points are built for the multiplicative group");
    if (depth < 0 || depth > 2)
        fail(errc::tower_too_deep, "backward depth is capped at 2 (tower degree p^i * phi(p^i))");
    if (gamma.is_zero() || *gamma.valuation() < 1)
        fail(errc::not_in_open_disk, "gamma must be a nonzero point over p*Z_p");

    backward_point_result out;
    out.depth = depth;
    out.twist = twist;
    out.gamma = gamma;
    out.verified = false;
    out.irreducible_checked = false;
    if (depth == 0) {
        out.scalar = gamma;
        out.verified = true;
        out.irreducible_checked = true;
        return out;
    }

    long p = law.prime();
    long prec = gamma.prec();
    bigint deg = pow_z(p, depth);
    long d = static_cast<long>(deg.get_si());

    auto inner = make_cyclotomic_ring(p, depth, prec);
    auto one_plus = gamma.add(padic_scalar::one(p, prec));
    std::vector<qelem> mod(static_cast<size_t>(d) + 1, inner->zero());
    mod[0] = inner->embed(one_plus.neg());
    mod[static_cast<size_t>(d)] = inner->one();
    auto R = make_tower_ring(inner, std::move(mod));

    qelem zc = pow_elem(inner->gen().add(inner->one()), mod_z(twist, deg));
    telem x = R->embed_coeff(zc).mul(R->gen()).sub(R->one());

    telem back = pow_elem(x.add(R->one()), deg).sub(R->one());
    out.verified = back.equals(R->embed(gamma));

    // T^(p^i) - (1+gamma) has no root over Q_p(zeta_{p^i}) when the slope
    // v(gamma)*(p-1)/p of its shifted polygon is non-integral, i.e. p ∤ v;
    // for prime-power degree that certifies irreducibility of the Kummer step
    long v = static_cast<long>(rational(*gamma.valuation()).get_num().get_si());
    out.irreducible_checked = (v % p) != 0;

    out.ring = R;
    out.point = std::move(x);
    return out;
}

// ---------------------------------------------------------------------------
// Z_p-module membership through logarithms (multiplicative coordinates)
// ---------------------------------------------------------------------------

struct membership_result {
    bool member;
    std::vector<padic_scalar> exponents;  // one per generator
    val_t residual;                       // least leftover valuation, empty when clean
    std::string reason;
};

// solve sum_j a_j * log(1+gamma_j) = log(1+Q) coordinatewise and ask for every
// a_j in Z_p.  Exact for one generator or a diagonal system; in general the
// least-valuation residual of the eliminated system is reported.  Logs kill
// torsion, so this tests membership in the torsion-free part.
inline membership_result log_membership(const std::vector<std::vector<padic_scalar>>& gens,
                                        const std::vector<padic_scalar>& point) {
    size_t n = point.size();
    size_t r = gens.size();
    if (n == 0 || r == 0) fail(errc::bad_input, "empty membership system");
    for (const auto& g : gens)
        if (g.size() != n) fail(errc::variable_mismatch, "generator dimension != point dimension");

    long p = point[0].prime();
    // rows: [ log g_1 .. log g_r | log Q ]
    std::vector<std::vector<padic_scalar>> m(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < r; ++j) m[i].push_back(log1p_point(gens[j][i]));
        m[i].push_back(log1p_point(point[i]));
    }

    std::vector<long> pivot_row(r, -1);
    size_t row = 0;
    for (size_t col = 0; col < r && row < n; ++col) {
        size_t best = n;
        val_t bv;
        for (size_t i = row; i < n; ++i) {
            if (m[i][col].is_zero()) continue;
            if (!bv || *m[i][col].valuation() < *bv) {
                bv = m[i][col].valuation();
                best = i;
            }
        }
        if (best == n) continue;  // column has no usable pivot
        std::swap(m[row], m[best]);
        for (size_t i = 0; i < n; ++i) {
            if (i == row || m[i][col].is_zero()) continue;
            auto f = m[i][col].div(m[row][col]);
            for (size_t c2 = col; c2 <= r; ++c2) m[i][c2] = m[i][c2].sub(f.mul(m[row][c2]));
        }
        pivot_row[col] = static_cast<long>(row);
        ++row;
    }

    membership_result out;
    out.member = true;
    for (size_t j = 0; j < r; ++j) {
        if (pivot_row[j] < 0) {
            // generator log vanished at precision: exponent unconstrained
            out.exponents.push_back(padic_scalar::zero(p, point[0].prec()));
            continue;
        }
        auto a = m[static_cast<size_t>(pivot_row[j])][r].div(
            m[static_cast<size_t>(pivot_row[j])][j]);
        if (!a.is_zero() && *a.valuation() < 0) {
            out.member = false;
            out.reason = "exponent " + std::to_string(j) + " is not p-integral";
        }
        out.exponents.push_back(std::move(a));
    }
    for (size_t i = row; i < n; ++i) {
        if (m[i][r].is_zero()) {
            out.residual = val_min(out.residual, val_t(prec_bound(m[i][r])));
        } else {
            out.residual = val_min(out.residual, m[i][r].valuation());
            out.member = false;
            if (out.reason.empty()) out.reason = "nonzero residual off the generator span";
        }
    }
    if (out.member && out.reason.empty()) out.reason = "exponents in Z_p";
    return out;
}

// ---------------------------------------------------------------------------
// dichotomy scan: distances from an enumerated point family to a subscheme
// ---------------------------------------------------------------------------

struct sigma_spec {
    enum class kind { torsion, finite, forward, backward };
    kind k = kind::torsion;
    int levels = 0;                                 // torsion levels / backward depth
    long box = 0;                                   // forward exponent box
    std::vector<std::vector<padic_scalar>> points;  // finite list, or the single gamma tuple
    std::vector<long> labels;                       // optional per-point labels (finite kind)

    static sigma_spec torsion(int levels) {
        sigma_spec s;
        s.k = kind::torsion;
        s.levels = levels;
        return s;
    }
    static sigma_spec finite(std::vector<std::vector<padic_scalar>> pts,
                             std::vector<long> labels = {}) {
        sigma_spec s;
        s.k = kind::finite;
        s.points = std::move(pts);
        s.labels = std::move(labels);
        return s;
    }
    static sigma_spec forward(std::vector<padic_scalar> gamma, long box) {
        sigma_spec s;
        s.k = kind::forward;
        s.points = {std::move(gamma)};
        s.box = box;
        return s;
    }
    static sigma_spec backward(std::vector<padic_scalar> gamma, int depth) {
        sigma_spec s;
        s.k = kind::backward;
        s.points = {std::move(gamma)};
        s.levels = depth;
        return s;
    }
};

struct scan_row {
    std::string id;
    long level;         // exact torsion level / forward exponent / backward depth
    long gamma_level;   // min m with [p^m](point) in Gamma, -1 when not determined
    val_t dist;         // empty: every generator vanished at working precision
    rational certified; // floor on the distance valuation when dist is empty
};

struct scan_level_summary {
    long level;
    long points;          // points of level <= this
    long on_x;            // among them, distance vanished
    val_t min_dist;       // valuation of the smallest finite distance so far
};

struct scan_result {
    std::vector<scan_row> rows;
    std::vector<scan_level_summary> levels;
    std::string verdict;  // membership-bounded | proximity-floor | inconclusive
    val_t floor;
    std::string note;
};

namespace detail {

inline constexpr long scan_cap = 20000;

template <class C>
scan_row scan_one(const formal_subscheme<C>& X, const std::vector<C>& pt, std::string id,
                  long level, long gamma_level) {
    auto d = X.distance(pt);
    scan_row row;
    row.id = std::move(id);
    row.level = level;
    row.gamma_level = gamma_level;
    row.dist = d.dist;
    row.certified = d.certified;
    return row;
}

inline long max_on_level(const scan_result& out) {
    long m = 0;
    for (const auto& r : out.rows)
        if (!r.dist) m = std::max(m, r.level);
    return m;
}

// cumulative per-level aggregation + the verdict rules:
//   on-X still growing at the top level -> inconclusive (consistent with a
//     special subscheme; the scan alone cannot certify that),
//   on-X stable and the closest finite approach unchanged -> proximity-floor,
//   on-X stable but the approach still moving -> membership-bounded.
inline void summarize_scan(scan_result& out) {
    long max_level = 0;
    for (const auto& r : out.rows) max_level = std::max(max_level, r.level);
    for (long l = 0; l <= max_level; ++l) {
        scan_level_summary s;
        s.level = l;
        s.points = 0;
        s.on_x = 0;
        for (const auto& r : out.rows) {
            if (r.level > l) continue;
            ++s.points;
            if (!r.dist) {
                ++s.on_x;
            } else {
                // smallest distance = largest valuation
                if (!s.min_dist || *r.dist > *s.min_dist) s.min_dist = r.dist;
            }
        }
        out.levels.push_back(std::move(s));
    }
    if (out.levels.size() < 2) {
        out.verdict = "inconclusive";
        out.note = "fewer than two levels scanned";
        return;
    }
    const auto& a = out.levels[out.levels.size() - 2];
    const auto& b = out.levels.back();
    if (b.on_x > a.on_x) {
        out.verdict = "inconclusive";
        out.note = "on-X points keep appearing at the top level; consistent with a special "
                   "subscheme, which this scan cannot certify";
        return;
    }
    if (b.min_dist && a.min_dist && *b.min_dist == *a.min_dist) {
        out.verdict = "proximity-floor";
        out.floor = b.min_dist;
        out.note = "empirical floor, a stand-in for the epsilon of the proximity alternative; "
                   "on-X points are confined to level <= " + std::to_string(max_on_level(out));
        return;
    }
    out.verdict = "membership-bounded";
    out.note = "on-X points are confined to level <= " + std::to_string(max_on_level(out)) +
               " but the closest approach has not stabilized";
}

}  // namespace detail

inline scan_result dichotomy_scan(const formal_subscheme<padic_scalar>& X, const sigma_spec& sig,
                                  const std::vector<std::vector<padic_scalar>>& gamma_gens = {}) {
    X.validate();
    long p = X.laws[0].prime();
    int n = X.dim_ambient();
    scan_result out;

    auto require_multiplicative = [&] {
        for (const auto& l : X.laws)
            if (l.kind() != fg_kind::multiplicative)
                fail(errc::unsupported_kind, "this sigma kind enumerates multiplicative points");
    };

    switch (sig.k) {
        case sigma_spec::kind::torsion: {
            require_multiplicative();
            int L = sig.levels;
            if (L < 1) fail(errc::bad_input, "torsion scan needs at least one level");
            bigint per = pow_z(p, L);
            bigint total = 1;
            for (int j = 0; j < n; ++j) total *= per;
            if (total > detail::scan_cap)
                fail(errc::enumeration_overflow,
                     "torsion tuple count " + total.get_str() + " exceeds the scan cap");
            auto tors = multiplicative_torsion(p, L, X.laws[0].prec());
            auto XR = lift_subscheme(X, tors.ring);
            long count = static_cast<long>(per.get_si());
            long tuples = static_cast<long>(total.get_si());
            std::vector<long> idx(static_cast<size_t>(tuples));
            for (long i = 0; i < tuples; ++i) idx[static_cast<size_t>(i)] = i;
            out.rows = parallel_map(idx, [&](long flat) {
                std::vector<qelem> pt;
                std::string id = "c=(";
                long lvl = 0;
                long rem = flat;
                for (int j = 0; j < n; ++j) {
                    long c = rem % count;
                    rem /= count;
                    pt.push_back(tors.points[static_cast<size_t>(c)]);
                    id += (j ? "," : "") + std::to_string(c);
                    if (c != 0) lvl = std::max(lvl, L - valp_z(c, p));
                }
                id += ")";
                // [p^m] kills the tuple at exactly m = lvl, and the scalar-
                // generated Gamma is torsion free, so that is the entry level
                return detail::scan_one(XR, pt, std::move(id), lvl, lvl);
            });
            break;
        }
        case sigma_spec::kind::finite: {
            if (sig.points.empty()) fail(errc::bad_input, "empty finite sigma");
            std::vector<size_t> idx(sig.points.size());
            for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            out.rows = parallel_map(idx, [&](size_t i) {
                const auto& pt = sig.points[i];
                if (static_cast<int>(pt.size()) != n)
                    fail(errc::variable_mismatch, "sigma point dimension != ambient dimension");
                long label = i < sig.labels.size() ? sig.labels[i] : static_cast<long>(i);
                long gl = -1;
                if (!gamma_gens.empty()) {
                    std::vector<padic_scalar> cur = pt;
                    for (long m = 0; m <= 6 && gl < 0; ++m) {
                        bool zero_pt = true;
                        for (const auto& c : cur) zero_pt = zero_pt && c.is_zero();
                        if (zero_pt || log_membership(gamma_gens, cur).member) gl = m;
                        for (int j = 0; j < n && gl < 0; ++j)
                            cur[static_cast<size_t>(j)] =
                                X.laws[static_cast<size_t>(j)].point_mult(
                                    p, cur[static_cast<size_t>(j)]);
                    }
                }
                return detail::scan_one(X, pt, "i=" + std::to_string(i), label, gl);
            });
            break;
        }
        case sigma_spec::kind::forward: {
            require_multiplicative();
            if (sig.box < 0 || sig.box > detail::scan_cap)
                fail(errc::enumeration_overflow, "forward box exceeds the scan cap");
            const auto& gamma = sig.points.at(0);
            if (static_cast<int>(gamma.size()) != n)
                fail(errc::variable_mismatch, "gamma dimension != ambient dimension");
            std::vector<padic_scalar> cur(gamma.size());
            for (int j = 0; j < n; ++j)
                cur[static_cast<size_t>(j)] = padic_scalar::zero(p, gamma[0].prec());
            for (long k = 0; k <= sig.box; ++k) {
                out.rows.push_back(
                    detail::scan_one(X, cur, "n=" + std::to_string(k), k, 0));
                for (int j = 0; j < n; ++j)
                    cur[static_cast<size_t>(j)] = X.laws[static_cast<size_t>(j)].point_add(
                        cur[static_cast<size_t>(j)], gamma[static_cast<size_t>(j)]);
            }
            break;
        }
        case sigma_spec::kind::backward: {
            require_multiplicative();
            const auto& gamma = sig.points.at(0);
            if (static_cast<int>(gamma.size()) != n)
                fail(errc::variable_mismatch, "gamma dimension != ambient dimension");
            for (int j = 1; j < n; ++j)
                if (!gamma[static_cast<size_t>(j)].equals(gamma[0]))
                    fail(errc::unsupported_ring,
                         "backward sigma needs a diagonal gamma (one shared tower)");
            for (int d = 1; d <= sig.levels; ++d) {
                long count = static_cast<long>(pow_z(p, d).get_si());
                bigint total = 1;
                for (int j = 0; j < n; ++j) total *= count;
                if (total > detail::scan_cap)
                    fail(errc::enumeration_overflow, "backward twist count exceeds the scan cap");
                // one tower hosts every twist at this depth
                auto base = backward_point(X.laws[0], gamma[0], d, 0);
                if (!base.verified)
                    fail(errc::valuation_mismatch, "backward point failed re-multiplication");
                auto R = base.ring;
                auto XR = lift_subscheme(X, R);
                auto inner = R->modulus()[0].ring();
                std::vector<telem> twists;
                twists.reserve(static_cast<size_t>(count));
                auto one_plus = base.point->add(R->one());
                auto zeta = R->one();
                auto zeta_inner = R->embed_coeff(inner->gen().add(inner->one()));
                for (long c = 0; c < count; ++c) {
                    twists.push_back(zeta.mul(one_plus).sub(R->one()));
                    zeta = zeta.mul(zeta_inner);
                }
                std::vector<long> idx(static_cast<size_t>(total.get_si()));
                for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<long>(i);
                auto rows = parallel_map(idx, [&](long flat) {
                    std::vector<telem> pt;
                    std::string id = "depth=" + std::to_string(d) + ",c=(";
                    long rem = flat;
                    for (int j = 0; j < n; ++j) {
                        long c = rem % count;
                        rem /= count;
                        pt.push_back(twists[static_cast<size_t>(c)]);
                        id += (j ? "," : "") + std::to_string(c);
                    }
                    id += ")";
                    return detail::scan_one(XR, pt, std::move(id), d, d);
                });
                for (auto& r : rows) out.rows.push_back(std::move(r));
            }
            break;
        }
    }
    detail::summarize_scan(out);
    return out;
}

// ---------------------------------------------------------------------------
// forward hits: the exponent box [0,K]^n against a subscheme
// ---------------------------------------------------------------------------

struct forward_hit_result {
    long hits;
    std::vector<std::vector<long>> hit_tuples;  // capped
    bigint scanned;
    bigint reference;  // (K+1)^(dim - codim), the generic-count yardstick
    bool list_truncated;
};

inline forward_hit_result forward_hits(const formal_subscheme<padic_scalar>& X,
                                       const std::vector<padic_scalar>& gamma, long K) {
    X.validate();
    int n = X.dim_ambient();
    if (static_cast<int>(gamma.size()) != n)
        fail(errc::variable_mismatch, "one generator per axis expected");
    if (K < 0 || K > 10000) fail(errc::enumeration_overflow, "box side is capped at 10^4");
    bigint total = 1;
    for (int j = 0; j < n; ++j) total *= (K + 1);
    if (total > 4000000) fail(errc::enumeration_overflow, "box volume is capped at 4*10^6");

    // per-axis tables [k](gamma_j), built by one exact group-add per step
    std::vector<std::vector<padic_scalar>> table(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto& gj = gamma[static_cast<size_t>(j)];
        auto cur = padic_scalar::zero(X.laws[0].prime(), gj.prec());
        auto& col = table[static_cast<size_t>(j)];
        col.reserve(static_cast<size_t>(K) + 1);
        for (long k = 0; k <= K; ++k) {
            col.push_back(cur);
            cur = X.laws[static_cast<size_t>(j)].point_add(cur, gj);
        }
    }

    forward_hit_result out;
    out.hits = 0;
    out.scanned = total;
    long codim = std::min<long>(static_cast<long>(X.gens.size()), n);
    out.reference = 1;
    for (long j = 0; j < n - codim; ++j) out.reference *= (K + 1);
    out.list_truncated = false;

    std::vector<long> firsts(static_cast<size_t>(K) + 1);
    for (long k = 0; k <= K; ++k) firsts[static_cast<size_t>(k)] = k;
    auto partials = parallel_map(firsts, [&](long k0) {
        std::vector<std::vector<long>> local;
        std::vector<long> tup(static_cast<size_t>(n), 0);
        tup[0] = k0;
        // odometer over the remaining axes
        for (;;) {
            std::vector<padic_scalar> pt;
            pt.reserve(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j)
                pt.push_back(table[static_cast<size_t>(j)][static_cast<size_t>(tup[static_cast<size_t>(j)])]);
            if (X.distance(pt).vanishes()) local.push_back(tup);
            int j = 1;
            while (j < n && tup[static_cast<size_t>(j)] == K) {
                tup[static_cast<size_t>(j)] = 0;
                ++j;
            }
            if (j >= n) break;
            ++tup[static_cast<size_t>(j)];
        }
        return local;
    });
    for (auto& loc : partials) {
        for (auto& t : loc) {
            ++out.hits;
            if (out.hit_tuples.size() < 100000)
                out.hit_tuples.push_back(std::move(t));
            else
                out.list_truncated = true;
        }
    }
    return out;
}

}  // namespace fball
