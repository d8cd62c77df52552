#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "fball/extension.hpp"

namespace fball {

namespace detail {

// exponent grid shared by every series with the same shape.  Indexes all
// monomials x1^e1..xn^en with e1+..+en <= D in graded lex order.
struct exp_grid {
    int n = 1;
    int D = 0;
    std::vector<std::array<int, 3>> exps;
    std::vector<int> rank;  // dense lookup keyed by (e1*(D+1) + e2)*(D+1) + e3

    int key(const std::array<int, 3>& e) const {
        return (e[0] * (D + 1) + e[1]) * (D + 1) + e[2];
    }
    int index_of(const std::array<int, 3>& e) const {
        if (!in_range(e)) fail(errc::bad_input, "exponent outside truncation grid");
        return rank[key(e)];
    }
    bool in_range(const std::array<int, 3>& e) const {
        if (e[0] < 0 || e[1] < 0 || e[2] < 0) return false;
        return e[0] + e[1] + e[2] <= D;
    }
    static int degree(const std::array<int, 3>& e) { return e[0] + e[1] + e[2]; }
    size_t size() const { return exps.size(); }
};

inline std::shared_ptr<const exp_grid> get_grid(int n, int D) {
    if (n < 1 || n > 3) fail(errc::bad_input, "series need 1..3 variables");
    if (D < 0 || (n == 1 && D > 1024) || (n > 1 && D > 64))
        fail(errc::bad_input, "truncation degree out of range");
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::shared_ptr<const exp_grid>> cache;
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find({n, D});
    if (it != cache.end()) return it->second;

    auto g = std::make_shared<exp_grid>();
    g->n = n;
    g->D = D;
    g->rank.assign(static_cast<size_t>(D + 1) * (D + 1) * (D + 1), -1);
    std::array<int, 3> e{0, 0, 0};
    for (int d = 0; d <= D; ++d) {
        if (n == 1) {
            e = {d, 0, 0};
            g->rank[g->key(e)] = static_cast<int>(g->exps.size());
            g->exps.push_back(e);
            continue;
        }
        for (e[0] = d; e[0] >= 0; --e[0]) {
            if (n == 2) {
                e[1] = d - e[0];
                g->rank[g->key(e)] = static_cast<int>(g->exps.size());
                g->exps.push_back(e);
                continue;
            }
            for (e[1] = d - e[0]; e[1] >= 0; --e[1]) {
                e[2] = d - e[0] - e[1];
                g->rank[g->key(e)] = static_cast<int>(g->exps.size());
                g->exps.push_back(e);
            }
        }
        e = {0, 0, 0};
    }
    cache.emplace(std::make_pair(n, D), g);
    return g;
}

inline padic_scalar lift_coeff(const padic_scalar&, const padic_scalar& s) { return s; }
template <class C>
ext_elem<C> lift_coeff(const ext_elem<C>& exemplar, const padic_scalar& s) {
    return exemplar.ring()->embed(s);
}
template <class C>
ext_elem<C> lift_coeff(const ext_elem<C>&, const ext_elem<C>& s) {
    return s;
}

}  // namespace detail

template <class C>
struct eval_result {
    C value;
    rational certified;  // |true - value| <= p^-certified
};

// dense truncated power series in n <= 3 variables, total degree <= D.
// Every coefficient carries its own certified precision; arithmetic folds in
// the uncertainty of coefficients that are only known to vanish approximately.
//
// Alongside the stored window each series carries a tail claim about the
// coefficients beyond the cap: either a certified lower bound on their
// valuations (nullopt meaning there are none at all, so the object is exactly
// the stored polynomial), or no claim, in which case point evaluation refuses
// to certify anything. A fresh series is the zero polynomial; builders that
// truncate an infinite object must weaken the claim themselves.
template <class C>
class truncated_series {
  public:
    truncated_series(int n, int D, const C& exemplar)
        : g_(detail::get_grid(n, D)), c_(g_->size(), zero_like(exemplar)) {}

    truncated_series(std::shared_ptr<const detail::exp_grid> g, std::vector<C> c)
        : g_(std::move(g)), c_(std::move(c)) {
        if (c_.size() != g_->size()) fail(errc::bad_input, "coefficient count mismatch");
    }

    int vars() const { return g_->n; }
    int degree_cap() const { return g_->D; }
    long prime() const { return prime_of(c_[0]); }
    const std::shared_ptr<const detail::exp_grid>& grid() const { return g_; }
    const std::vector<C>& coeffs() const { return c_; }
    bool integral_flag() const { return integral_; }

    // claim about coefficients beyond the cap: meaningful only when
    // tail_known(); nullopt says the tail is empty, a value bounds its
    // valuations from below
    bool tail_known() const { return tail_known_; }
    const val_t& tail_bound() const { return tail_bound_; }
    truncated_series& set_tail(val_t bound) {
        tail_known_ = true;
        tail_bound_ = std::move(bound);
        return *this;
    }
    truncated_series& set_tail_unknown() {
        tail_known_ = false;
        tail_bound_ = rational(0);
        return *this;
    }

    // cap the certified precision of every stored coefficient
    truncated_series& cap_precision(const rational& b) {
        for (C& x : c_) x = truncate_c(x, b);
        return *this;
    }

    // every stored coefficient certifiably has valuation >= 0
    bool stored_integral() const {
        for (const C& x : c_) {
            if (x.is_zero()) {
                if (prec_bound(x) < rational(0)) return false;
            } else if (*x.valuation() < rational(0)) {
                return false;
            }
        }
        return true;
    }

    const C& coeff(const std::array<int, 3>& e) const { return c_[g_->index_of(e)]; }
    const C& coeff(int e0, int e1 = 0, int e2 = 0) const { return coeff({e0, e1, e2}); }
    void set_coeff(const std::array<int, 3>& e, const C& v) {
        c_[g_->index_of(e)] = v;
        integral_ = false;
    }
    void set_coeff(int e0, const C& v) { set_coeff({e0, 0, 0}, v); }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const C& x) { return x.is_zero(); });
    }

    // marks the series as an integral ideal generator; every coefficient must
    // be certifiably integral at its current precision
    truncated_series& assert_integral() {
        for (const C& x : c_) {
            if (x.is_zero()) {
                if (prec_bound(x) < rational(0))
                    fail(errc::not_integral, "zero coefficient too fuzzy to certify");
            } else if (*x.valuation() < rational(0)) {
                fail(errc::not_integral, "coefficient with negative valuation");
            }
        }
        integral_ = true;
        return *this;
    }

    truncated_series restricted(int D) const {
        if (D > g_->D) fail(errc::bad_input, "cannot extend a truncated series");
        if (D == g_->D) return *this;
        truncated_series r(g_->n, D, c_[0]);
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = c_[g_->index_of(r.g_->exps[i])];
        r.integral_ = integral_;
        r.tail_known_ = tail_known_;
        // dropped coefficients join the tail of the restriction
        r.tail_bound_ = tail_bound_;
        for (size_t i = 0; i < c_.size(); ++i) {
            const auto& e = g_->exps[i];
            if (e[0] + e[1] + e[2] > D) r.tail_bound_ = val_min(r.tail_bound_, size_of(c_[i]));
        }
        return r;
    }

    truncated_series neg() const {
        truncated_series r = *this;
        for (C& x : r.c_) x = x.neg();
        return r;
    }

    truncated_series add(const truncated_series& o) const {
        check_vars(o);
        if (g_->D != o.g_->D) {
            int D = std::min(g_->D, o.g_->D);
            return restricted(D).add(o.restricted(D));
        }
        truncated_series r = *this;
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i].add(o.c_[i]);
        r.integral_ = integral_ && o.integral_;
        r.tail_known_ = tail_known_ && o.tail_known_;
        r.tail_bound_ = val_min(tail_bound_, o.tail_bound_);
        return r;
    }

    truncated_series sub(const truncated_series& o) const { return add(o.neg()); }

    truncated_series scale(const C& s) const {
        truncated_series r = *this;
        for (C& x : r.c_) x = x.mul(s);
        r.integral_ = false;
        if (tail_bound_) r.tail_bound_ = *tail_bound_ + size_of(s);
        return r;
    }

    // min over coefficients; approximate zeros contribute their bound since
    // nothing below it can be ruled out
    val_t min_valuation() const {
        val_t m;
        for (const C& x : c_)
            m = val_min(m, x.is_zero() ? val_t(prec_bound(x)) : x.valuation());
        return m;
    }

    truncated_series mul(const truncated_series& o) const {
        check_vars(o);
        int D = std::min(g_->D, o.g_->D);
        if (g_->D != D || o.g_->D != D) return restricted(D).mul(o.restricted(D));
        truncated_series r(g_->n, D, c_[0]);

        // per-coefficient size data: valuation for nonzero entries, certified
        // bound for approximate zeros
        auto sizes = [](const std::vector<C>& v) {
            std::vector<std::pair<bool, rational>> s;
            s.reserve(v.size());
            for (const C& x : v)
                s.emplace_back(x.is_zero(),
                               x.is_zero() ? prec_bound(x) : rational(*x.valuation()));
            return s;
        };
        auto s1 = sizes(c_), s2 = sizes(o.c_);

        // a pair with an approximately-zero factor contributes only to the
        // precision cap of its own target exponent, never a global penalty;
        // pairs past the cap spill into the tail bound instead
        std::vector<std::optional<rational>> caps(r.c_.size());
        val_t spill;
        for (size_t i = 0; i < c_.size(); ++i) {
            const auto& ei = g_->exps[i];
            for (size_t j = 0; j < o.c_.size(); ++j) {
                const auto& ej = o.g_->exps[j];
                std::array<int, 3> e{ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]};
                if (!r.g_->in_range(e)) {
                    spill = val_min(spill, val_t(s1[i].second + s2[j].second));
                    continue;
                }
                int k = r.g_->index_of(e);
                if (!s1[i].first && !s2[j].first) {
                    r.c_[k] = r.c_[k].add(c_[i].mul(o.c_[j]));
                } else {
                    rational b = s1[i].second + s2[j].second;
                    if (!caps[k] || b < *caps[k]) caps[k] = b;
                }
            }
        }
        for (size_t k = 0; k < r.c_.size(); ++k)
            if (caps[k]) r.c_[k] = truncate_c(r.c_[k], *caps[k]);
        r.integral_ = integral_ && o.integral_;
        r.tail_known_ = tail_known_ && o.tail_known_;
        // either factor's tail times the whole other factor also lands there
        auto stored_min = [](const std::vector<std::pair<bool, rational>>& s) {
            val_t m;
            for (const auto& [z, v] : s) m = val_min(m, val_t(v));
            return m;
        };
        r.tail_bound_ = val_min(
            spill, val_shift(tail_bound_, val_min(stored_min(s2), o.tail_bound_)));
        r.tail_bound_ = val_min(
            r.tail_bound_, val_shift(o.tail_bound_, val_min(stored_min(s1), tail_bound_)));
        return r;
    }

    bool equals(const truncated_series& o) const { return sub(o).is_zero(); }

    // d/dx_var
    truncated_series derivative(int var) const {
        check_var_index(var);
        if (!tail_known_)
            fail(errc::tail_too_short, "derivative of a series with unclaimed tail");
        truncated_series r(g_->n, g_->D, c_[0]);
        long p = prime();
        for (size_t i = 0; i < c_.size(); ++i) {
            std::array<int, 3> e = g_->exps[i];
            if (e[var] == 0) continue;
            long k = e[var];
            e[var] -= 1;
            long prec = std::max<long>(ceil_q(prec_bound(c_[i])), 1) + 1;
            r.c_[r.g_->index_of(e)] = scale_c(c_[i], padic_scalar::from_integer(p, k, prec));
        }
        // coefficients one past the cap differentiate onto the top stored
        // degree, so the tail bound caps what those slots may claim
        if (tail_bound_) {
            r.tail_bound_ = tail_bound_;
            for (size_t i = 0; i < r.c_.size(); ++i) {
                const auto& e = r.g_->exps[i];
                if (e[0] + e[1] + e[2] == g_->D)
                    r.c_[i] = truncate_c(r.c_[i], *tail_bound_);
            }
        }
        return r;
    }

    // formal antiderivative in x_var with zero constant of integration;
    // monomials pushed past the cap are dropped (they sit above the truncation
    // order of the result by construction)
    truncated_series integrate(int var) const {
        check_var_index(var);
        truncated_series r(g_->n, g_->D, c_[0]);
        long p = prime();
        val_t pushed;
        for (size_t i = 0; i < c_.size(); ++i) {
            std::array<int, 3> e = g_->exps[i];
            e[var] += 1;
            if (!g_->in_range(e)) {
                pushed = val_min(pushed, val_t(size_of(c_[i]) - rational(valp_z(e[var], p))));
                continue;
            }
            long prec = std::max<long>(ceil_q(prec_bound(c_[i])), 1) + valp_z(e[var], p) + 2;
            r.c_[r.g_->index_of(e)] =
                scale_c(c_[i], padic_scalar::from_ratio(p, 1, e[var], prec));
        }
        // a nonzero tail picks up 1/k factors of unbounded depth, so only an
        // absent tail survives integration with a claim
        if (!tail_known_ || tail_bound_)
            r.set_tail_unknown();
        else
            r.tail_bound_ = pushed;
        return r;
    }

    // multiplicative inverse; needs a unit constant term
    truncated_series mul_inverse() const {
        const C& c0 = c_[0];
        if (c0.is_zero() || *c0.valuation() != rational(0))
            fail(errc::nonzero_constant_term, "series inverse needs a unit constant term");
        C c0inv = c0.inv();
        truncated_series h = scale(c0inv);
        h.c_[0] = zero_like(c0);  // h = f/c0 - 1 has min degree >= 1
        truncated_series acc(g_->n, g_->D, c_[0]);
        acc.c_[0] = one_like(c0);
        truncated_series pw = acc;
        for (int k = 1; k <= g_->D; ++k) {
            pw = pw.mul(h).neg();
            acc = acc.add(pw);
        }
        truncated_series r = acc.scale(c0inv);
        // the inverse of a unit of the integral power series ring is integral;
        // outside that case the geometric tail is out of reach
        bool unit_integral = tail_known_ && stored_integral() &&
                             (!tail_bound_ || *tail_bound_ >= rational(0));
        if (unit_integral)
            r.set_tail(rational(0));
        else
            r.set_tail_unknown();
        return r;
    }

    std::string str(const std::vector<std::string>& names = {"X", "Y", "Z"}) const {
        std::string out;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + c_[i].str() + ")";
            for (int v = 0; v < g_->n; ++v) {
                int e = g_->exps[i][v];
                if (e == 0) continue;
                out += "*" + names[v];
                if (e > 1) out += "^" + std::to_string(e);
            }
        }
        return out.empty() ? "0" : out;
    }

  private:
    void check_vars(const truncated_series& o) const {
        if (g_->n != o.g_->n) fail(errc::variable_mismatch, "different variable sets");
    }
    void check_var_index(int var) const {
        if (var < 0 || var >= g_->n) fail(errc::variable_mismatch, "no such variable");
    }

    // valuation for nonzero coefficients, certified bound for approximate
    // zeros: the least anything hiding in the slot can weigh
    static rational size_of(const C& x) {
        return x.is_zero() ? prec_bound(x) : rational(*x.valuation());
    }
    static val_t val_shift(const val_t& a, const val_t& b) {
        if (!a || !b) return std::nullopt;
        return *a + *b;
    }

    std::shared_ptr<const detail::exp_grid> g_;
    std::vector<C> c_;
    bool integral_ = false;
    bool tail_known_ = true;
    val_t tail_bound_;
};

template <class C>
truncated_series<C> series_constant(int n, int D, const C& value) {
    truncated_series<C> r(n, D, value);
    r.set_coeff({0, 0, 0}, value);
    return r;
}

// x_var as a series
template <class C>
truncated_series<C> series_variable(int n, int D, int var, const C& exemplar) {
    truncated_series<C> r(n, D, exemplar);
    std::array<int, 3> e{0, 0, 0};
    e[var] = 1;
    r.set_coeff(e, one_like(exemplar));
    return r;
}

namespace detail {

// Horner over the last active variable; recursion peels variables off f.
// Constant terms are added with their own (possibly finite) precision so the
// fuzz of approximate zeros keeps propagating through later multiplications.
template <class S, class T>
truncated_series<T> compose_rec(const truncated_series<S>& f,
                                const std::vector<truncated_series<T>>& args, int m) {
    const truncated_series<T>& g = args[m - 1];
    int n = g.vars(), D = g.degree_cap();
    const T& ex = g.coeffs()[0];
    truncated_series<T> acc(n, D, ex);
    if (m == 1) {
        for (int k = f.degree_cap(); k >= 0; --k) {
            acc = acc.mul(g);
            acc = acc.add(series_constant(n, D, lift_coeff(ex, f.coeff(k, 0, 0))));
        }
        return acc;
    }
    for (int b = f.degree_cap(); b >= 0; --b) {
        acc = acc.mul(g);
        truncated_series<S> fb(f.vars(), f.degree_cap(), f.coeffs()[0]);
        for (size_t i = 0; i < f.coeffs().size(); ++i) {
            auto e = f.grid()->exps[i];
            if (e[m - 1] != b) continue;
            e[m - 1] = 0;
            fb.set_coeff(e, f.coeffs()[i]);
        }
        acc = acc.add(compose_rec(fb, args, m - 1));
    }
    return acc;
}

// stored coefficients and tail together: the least valuation any part of the
// true object can have
template <class C>
val_t content_floor(const truncated_series<C>& a) {
    val_t m = a.min_valuation();
    if (a.tail_known()) m = val_min(m, a.tail_bound());
    return m;
}

template <class C>
void weaken_tail(truncated_series<C>& r, const val_t& b) {
    if (r.tail_known()) r.set_tail(val_min(r.tail_bound(), b));
}

}  // namespace detail

// substitute args into f; every arg needs a vanishing constant term so the
// composite stays exact modulo the truncation order.  The zero flag on the
// constant slot is taken as an assertion that the true constant term is zero,
// exactly as written; only then does f's tail stay clear of stored degrees.
template <class S, class C>
truncated_series<C> compose(const truncated_series<S>& f,
                            const std::vector<truncated_series<C>>& args) {
    if (static_cast<int>(args.size()) != f.vars())
        fail(errc::variable_mismatch, "argument count differs from variable count");
    for (const auto& a : args) {
        if (a.grid() != args[0].grid())
            fail(errc::variable_mismatch, "composition arguments on different grids");
        if (!a.coeff(0, 0, 0).is_zero())
            fail(errc::nonzero_constant_term, "composition argument has a constant term");
    }
    // terms of f above the output cap only produce monomials above it
    int Df = std::min(f.degree_cap(), args[0].degree_cap());
    truncated_series<S> fr = f.restricted(Df);
    truncated_series<C> out = detail::compose_rec(fr, args, f.vars());
    bool known = fr.tail_known();
    for (const auto& a : args) known = known && a.tail_known();
    if (!known) return out.set_tail_unknown();
    // f's tail rides through arguments of degree >= 1, so it lands past the
    // cap, as do the arguments' own tails against f's stored support
    if (fr.tail_bound()) {
        val_t mu;
        for (const auto& a : args) mu = val_min(mu, detail::content_floor(a));
        if (mu && *mu < rational(0)) return out.set_tail_unknown();
        detail::weaken_tail(out, fr.tail_bound());
    }
    val_t mf = detail::content_floor(fr);
    rational mf0 = (mf && *mf < rational(0)) ? *mf : rational(0);
    for (const auto& a : args)
        if (a.tail_bound()) detail::weaken_tail(out, val_t(*a.tail_bound() + mf0));
    return out;
}

// polynomial substitution: like compose but the arguments may carry constant
// terms.  Constants pull anything f hides beyond its cap back down into
// stored degrees, so f needs a tail claim, and the claim caps what the stored
// result coefficients may assert.
template <class S, class C>
truncated_series<C> ps_substitute(const truncated_series<S>& f,
                                  const std::vector<truncated_series<C>>& args) {
    if (static_cast<int>(args.size()) != f.vars())
        fail(errc::variable_mismatch, "argument count differs from variable count");
    for (const auto& a : args)
        if (a.grid() != args[0].grid())
            fail(errc::variable_mismatch, "substitution arguments on different grids");
    truncated_series<C> out = detail::compose_rec(f, args, f.vars());
    if (!f.tail_known())
        fail(errc::tail_too_short, "substitution into a series with unclaimed tail");
    if (f.tail_bound()) {
        val_t mu, cmin;
        for (const auto& a : args) {
            mu = val_min(mu, detail::content_floor(a));
            const C& c0 = a.coeff(0, 0, 0);
            cmin = val_min(cmin, val_t(c0.is_zero() ? prec_bound(c0) : rational(*c0.valuation())));
        }
        if (mu && *mu < rational(0))
            fail(errc::tail_too_short,
                 "cannot bound a series tail against arguments outside the unit disk");
        // a tail term of degree k > Df reaches stored degree d only through
        // k - d constant factors, so the caps are graded by degree
        for (size_t i = 0; i < out.coeffs().size(); ++i) {
            const auto& e = out.grid()->exps[i];
            long forced = f.degree_cap() + 1 - detail::exp_grid::degree(e);
            rational cap = *f.tail_bound();
            if (forced > 0 && cmin) cap += rational(forced) * *cmin;
            out.set_coeff(e, truncate_c(out.coeff(e), cap));
        }
        detail::weaken_tail(out, f.tail_bound());
    }
    bool known = true;
    for (const auto& a : args) known = known && a.tail_known();
    if (!known) return out.set_tail_unknown();
    val_t mf = detail::content_floor(f);
    rational mf0 = (mf && *mf < rational(0)) ? *mf : rational(0);
    for (const auto& a : args)
        if (a.tail_bound()) detail::weaken_tail(out, val_t(*a.tail_bound() + mf0));
    return out;
}

// plug a point with positive valuation coordinates into the series.  The
// certified bound folds the truncation tail (degree D+1 and up) and the fuzz
// of approximately-zero coefficients.
template <class S, class C>
eval_result<C> ps_evaluate(const truncated_series<S>& f, const std::vector<C>& coords,
                           std::optional<rational> need = std::nullopt) {
    if (static_cast<int>(coords.size()) != f.vars())
        fail(errc::variable_mismatch, "coordinate count differs from variable count");
    val_t vmin;
    for (const C& x : coords) {
        val_t v = x.is_zero() ? val_t(prec_bound(x)) : x.valuation();
        if (*v <= rational(0))
            fail(errc::not_in_open_disk, "coordinate valuation must be certifiably positive");
        vmin = val_min(vmin, v);
    }

    int D = f.degree_cap();
    if (!f.tail_known())
        fail(errc::tail_too_short, "series tail carries no claim; evaluation cannot be certified");
    val_t tail;  // valuation floor of the omitted tail terms
    if (f.tail_bound()) tail = *f.tail_bound() + rational(D + 1) * *vmin;
    if (need && tail && *tail < *need)
        fail(errc::tail_too_short, "truncation order cannot certify the requested bound");

    std::vector<std::vector<C>> pw(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) {
        pw[i].reserve(D + 1);
        pw[i].push_back(one_like(coords[i]));
        for (int k = 1; k <= D; ++k) pw[i].push_back(pw[i].back().mul(coords[i]));
    }

    C acc = zero_like(coords[0]);
    val_t fuzz = tail;
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        const S& cf = f.coeffs()[i];
        auto e = f.grid()->exps[i];
        if (cf.is_zero()) {
            fuzz = val_min(fuzz, val_t(prec_bound(cf) +
                                       rational(detail::exp_grid::degree(e)) * *vmin));
            continue;
        }
        C term = scale_c(pw[0][e[0]], cf);
        for (int v = 1; v < f.vars(); ++v)
            if (e[v] > 0) term = term.mul(pw[v][e[v]]);
        acc = acc.add(term);
    }
    rational certified = *val_min(fuzz, val_t(prec_bound(acc)));
    if (need && certified < *need)
        fail(errc::tail_too_short, "evaluation lost too much precision for the target");
    return {truncate_c(acc, certified), certified};
}

// log(1+X) as a 1-variable series; the dropped coefficients 1/k have
// valuations unbounded below, so the tail carries no claim
inline truncated_series<padic_scalar> log1p_series(long p, int D, long prec) {
    truncated_series<padic_scalar> r(1, D, padic_scalar::zero(p, prec));
    for (long k = 1; k <= D; ++k) {
        long pk = prec + valp_z(k, p) + 1;
        r.set_coeff(static_cast<int>(k),
                    padic_scalar::from_ratio(p, k % 2 == 1 ? 1 : -1, k, pk));
    }
    r.set_tail_unknown();
    return r;
}

// exp(X) - 1 as a 1-variable series (constant term dropped); same unclaimed
// tail as the log, with 1/k! in place of 1/k
inline truncated_series<padic_scalar> expm1_series(long p, int D, long prec) {
    truncated_series<padic_scalar> r(1, D, padic_scalar::zero(p, prec));
    bigint fact = 1;
    for (long k = 1; k <= D; ++k) {
        fact *= k;
        long pk = prec + valp_z(fact, p) + 1;
        r.set_coeff(static_cast<int>(k), padic_scalar::from_ratio(p, 1, fact, pk));
    }
    r.set_tail_unknown();
    return r;
}

namespace detail {

// last index whose log-series term can still reach above the bound B:
// terms x^k/k have valuation k*v - v_p(k); for v_p(k) = m the term matters
// only if p^m <= k <= (B+m)/v, so scan m until p^m outruns the window
inline long log_tail_cutoff(long p, const rational& v, const rational& B) {
    long K = 0;
    bigint pm = 1;
    for (long m = 0;; ++m) {
        rational lim = (B + rational(m)) / v;
        long hi = lim >= rational(0) ? floor_q(lim) : -1;
        if (hi >= 0 && pm <= hi) K = std::max(K, hi);
        // the window is closed for good once p^m clears it and the exponential
        // increment outruns the linear growth of (B+m)/v
        if (pm > hi && rational(pm) * rational(p - 1) * v > rational(1)) break;
        pm *= p;
        if (m > 256) fail(errc::convergence_violation, "log tail cutoff did not close");
    }
    return K;
}

// least valuation any omitted log-type term x^k/u_k (with u_k a unit times k)
// can have for k > K when v(x) >= v: min over k > K of k*v - v_p(k)
inline rational log_tail_floor(long p, const rational& v, long K) {
    if (v <= rational(0)) fail(errc::not_in_open_disk, "log tail needs positive valuation");
    rational best = rational(K + 1) * v;
    bigint pm = 1;
    for (long m = 1; m <= 256; ++m) {
        pm *= p;
        bigint k = (bigint(K) / pm + 1) * pm;  // least multiple of p^m past K
        rational cand = rational(k) * v - rational(m);
        if (cand < best) best = cand;
        // k*v - m >= p^m*v - m, which only grows once p^m*v clears 1
        if (rational(pm) * v >= rational(1) && rational(pm) * v - rational(m) > best)
            return best;
    }
    fail(errc::convergence_violation, "log tail floor did not close");
}

}  // namespace detail

// pointwise log(1+x); needs v(x) > 0
template <class C>
C log1p_point(const C& x) {
    if (x.is_zero()) {
        rational b = prec_bound(x);
        if (b <= rational(0))
            fail(errc::not_in_open_disk, "log argument not certifiably in the open unit disk");
        // below 1/(p-1) the term x^k/k for k = p^m can dip under v(x) itself
        return truncate_c(x, detail::log_tail_floor(prime_of(x), b, 0));
    }
    rational vx = *x.valuation();
    if (vx <= rational(0)) fail(errc::not_in_open_disk, "log needs positive valuation");
    long p = prime_of(x);
    rational target = prec_bound(x);
    long K = detail::log_tail_cutoff(p, vx, target);
    C acc = zero_like(x);
    C pw = one_like(x);
    long tprec = std::max<long>(ceil_q(target), 1);
    for (long k = 1; k <= K; ++k) {
        pw = pw.mul(x);
        acc = acc.add(scale_c(pw, padic_scalar::from_ratio(p, (k % 2 == 1) ? 1 : -1, k,
                                                           tprec + valp_z(k, p) + 2)));
    }
    return truncate_c(acc, std::min(target, prec_bound(acc)));
}

// pointwise exp(x) - 1; needs v(x) > 1/(p-1)
template <class C>
C expm1_point(const C& x) {
    if (x.is_zero()) {
        long p = prime_of(x);
        if (prec_bound(x) <= rational(1, p - 1))
            fail(errc::convergence_violation, "exp argument not certifiably in the convergence disk");
        return x;
    }
    long p = prime_of(x);
    rational vx = *x.valuation();
    rational margin = vx - rational(1, p - 1);
    if (margin <= rational(0))
        fail(errc::convergence_violation, "exp needs valuation above 1/(p-1)");
    rational target = prec_bound(x);
    // v_p(k!) <= (k-1)/(p-1), so term k has valuation >= k*v - (k-1)/(p-1)
    // >= k*margin; safe cutoff at B/margin
    long K = std::max<long>(1, floor_q(target / margin) + 1);
    C acc = zero_like(x);
    C pw = one_like(x);
    bigint fact = 1;
    long tprec = std::max<long>(ceil_q(target), 1);
    for (long k = 1; k <= K; ++k) {
        pw = pw.mul(x);
        fact *= k;
        acc = acc.add(
            scale_c(pw, padic_scalar::from_ratio(p, 1, fact, tprec + valp_z(fact, p) + 2)));
    }
    return truncate_c(acc, std::min(target, prec_bound(acc)));
}

// compositional inverse of a 1-variable series with zero constant term.  The
// linear coefficient may be a non-unit; quotient precision then honestly
// degrades with each division.
inline truncated_series<padic_scalar> reversion(const truncated_series<padic_scalar>& f) {
    if (f.vars() != 1) fail(errc::variable_mismatch, "reversion is one-variable only");
    if (!f.coeff(0).is_zero()) fail(errc::nonzero_constant_term, "reversion needs f(0) = 0");
    const padic_scalar& a1 = f.coeff(1);
    if (a1.is_zero()) fail(errc::singular_at_origin, "reversion needs a nonzero linear term");
    int D = f.degree_cap();
    padic_scalar a1inv = a1.inv();
    truncated_series<padic_scalar> g(1, D, f.coeffs()[0]);
    g.set_coeff(1, a1inv);
    for (int m = 2; m <= D; ++m) {
        // f(g) = X + eps with eps supported in degrees >= m; kill degree m
        auto comp = compose(f, std::vector<truncated_series<padic_scalar>>{g});
        g.set_coeff(m, comp.coeff(m).neg().mul(a1inv));
    }
    // Lagrange inversion keeps coefficients in Z_p[1/a1], so a unit linear
    // term and an integral f give an integral inverse
    bool integral = f.tail_known() && f.stored_integral() &&
                    (!f.tail_bound() || *f.tail_bound() >= rational(0)) &&
                    *a1.valuation() == rational(0);
    if (integral)
        g.set_tail(rational(0));
    else
        g.set_tail_unknown();
    return g;
}

}  // namespace fball
