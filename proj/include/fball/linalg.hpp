#pragma once

#include <vector>

#include "fball/bigint.hpp"
#include "fball/errors.hpp"

namespace fball {
namespace detail {

/*
 * Gaussian elimination over Z/p^M with min-valuation column pivoting.  Row
 * operations use integral multipliers only (the pivot has minimal valuation
 * in its column), so the product of pivot valuations is exactly v_p(det).
 * Each pivot of valuation w costs w certified digits on the remaining block;
 * when the budget runs out before a pivot can be certified nonzero the
 * determinant's valuation is not knowable at this precision.
 */
inline long det_valuation_mod(long p, long M, std::vector<std::vector<bigint>> a) {
    const long n = static_cast<long>(a.size());
    if (n == 0) return 0;
    long mcur = M;
    long detv = 0;
    bigint pm = pow_z(p, mcur);
    for (long k = 0; k < n; ++k) {
        if (mcur <= 0)
            fail(errc::norm_precision_loss, "precision budget exhausted during elimination");
        long best = -1, bestv = mcur;
        for (long i = k; i < n; ++i) {
            bigint r = mod_z(a[i][k], pm);
            if (r == 0) continue;
            long v = valp_z(r, p);
            if (v < bestv) {
                bestv = v;
                best = i;
            }
        }
        if (best < 0)
            fail(errc::norm_precision_loss,
                 "column vanishes mod p^" + std::to_string(mcur));
        std::swap(a[k], a[best]);
        detv += bestv;
        long mnext = mcur - bestv;
        bigint pmn = pow_z(p, mnext);
        bigint piv_unit = mod_z(a[k][k], pm) / pow_z(p, bestv);
        bigint piv_inv = invert_z(piv_unit, pmn);
        for (long i = k + 1; i < n; ++i) {
            bigint r = mod_z(a[i][k], pm);
            if (r == 0) continue;
            bigint m = mod_z((r / pow_z(p, bestv)) * piv_inv, pmn);
            for (long j = k; j < n; ++j)
                a[i][j] = mod_z(a[i][j] - m * a[k][j], pmn);
        }
        mcur = mnext;
        pm = pmn;
    }
    return detv;
}

// Solve A x = b over Z/p^M where A has unit determinant; exact mod p^M.
inline std::vector<bigint> solve_unit_mod(long p, long M, std::vector<std::vector<bigint>> a,
                                          std::vector<bigint> b) {
    const long n = static_cast<long>(a.size());
    bigint pm = pow_z(p, M);
    for (long k = 0; k < n; ++k) {
        long best = -1;
        for (long i = k; i < n; ++i) {
            bigint r = mod_z(a[i][k], pm);
            if (r != 0 && valp_z(r, p) == 0) {
                best = i;
                break;
            }
        }
        if (best < 0)
            fail(errc::norm_precision_loss, "matrix not unimodular at this precision");
        std::swap(a[k], a[best]);
        std::swap(b[k], b[best]);
        bigint piv_inv = invert_z(mod_z(a[k][k], pm), pm);
        for (long i = k + 1; i < n; ++i) {
            bigint m = mod_z(a[i][k] * piv_inv, pm);
            if (m == 0) continue;
            for (long j = k; j < n; ++j)
                a[i][j] = mod_z(a[i][j] - m * a[k][j], pm);
            b[i] = mod_z(b[i] - m * b[k], pm);
        }
    }
    std::vector<bigint> x(n, bigint(0));
    for (long k = n - 1; k >= 0; --k) {
        bigint s = b[k];
        for (long j = k + 1; j < n; ++j) s = mod_z(s - a[k][j] * x[j], pm);
        x[k] = mod_z(s * invert_z(mod_z(a[k][k], pm), pm), pm);
    }
    return x;
}

} // namespace detail
} // namespace fball
