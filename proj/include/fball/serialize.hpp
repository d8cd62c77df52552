#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fball/counterexample.hpp"
#include "fball/errors.hpp"
#include "fball/formal_group.hpp"
#include "fball/scalar.hpp"
#include "fball/series.hpp"
#include "fball/subscheme.hpp"

namespace fball {

// ordered_json keeps insertion order, so dumps are reproducible byte for byte
using json = nlohmann::ordered_json;

namespace detail {

inline const json& jfield(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(errc::bad_input, std::string("missing field '") + key + "'");
    return *it;
}

inline bigint parse_z(const std::string& s) {
    try {
        return bigint(s);
    } catch (const std::invalid_argument&) {
        fail(errc::bad_input, "bad integer literal '" + s + "'");
    }
}

inline rational parse_q(const std::string& s) {
    try {
        rational q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        fail(errc::bad_input, "bad rational literal '" + s + "'");
    }
}

}  // namespace detail

// "inf" encodes an empty valuation claim (zero to precision / empty tail)
inline std::string val_json_str(const val_t& v) { return v ? v->get_str() : "inf"; }

inline val_t val_from_str(const std::string& s) {
    if (s == "inf") return std::nullopt;
    return detail::parse_q(s);
}

// scalar as {v, unit, prec}; zero to precision carries unit "0" and v = prec
inline json scalar_json(const padic_scalar& x) {
    json j;
    if (x.is_zero()) {
        j["v"] = x.prec();
        j["unit"] = "0";
    } else {
        j["v"] = x.exact_valuation();
        j["unit"] = x.unit().get_str();
    }
    j["prec"] = x.prec();
    return j;
}

inline padic_scalar scalar_from_json(long p, const json& j) {
    long prec = detail::jfield(j, "prec").get<long>();
    std::string u = detail::jfield(j, "unit").get<std::string>();
    if (u == "0") return padic_scalar::zero(p, prec);
    long v = detail::jfield(j, "v").get<long>();
    return padic_scalar::from_unit(p, v, detail::parse_z(u), prec);
}

// series as {p, n, D, prec, terms, tail}.  terms lists every slot with a
// nonzero coefficient, plus any zero slot whose precision differs from the
// default "prec"; exps is trimmed to the variable count.  tail is "exact"
// (nothing beyond the cap), "unknown" (no claim), or a rational lower bound
// on the valuations beyond the cap.
inline json series_json(const truncated_series<padic_scalar>& s) {
    const auto& g = *s.grid();
    long p = s.coeff({0, 0, 0}).prime();
    long dflt = -1;
    for (size_t i = 0; i < g.size(); ++i)
        if (s.coeff(g.exps[i]).is_zero()) {
            long q = s.coeff(g.exps[i]).prec();
            if (dflt < 0 || q < dflt) dflt = q;
        }
    if (dflt < 0)
        for (size_t i = 0; i < g.size(); ++i)
            dflt = std::max(dflt, s.coeff(g.exps[i]).prec());

    json j;
    j["p"] = p;
    j["n"] = g.n;
    j["D"] = g.D;
    j["prec"] = dflt;
    json terms = json::array();
    for (size_t i = 0; i < g.size(); ++i) {
        const auto& c = s.coeff(g.exps[i]);
        if (c.is_zero() && c.prec() == dflt) continue;
        json t;
        json exps = json::array();
        for (int k = 0; k < g.n; ++k) exps.push_back(g.exps[i][k]);
        t["exps"] = exps;
        auto cj = scalar_json(c);
        t["val"] = cj["v"];
        t["unit"] = cj["unit"];
        t["prec"] = cj["prec"];
        terms.push_back(t);
    }
    j["terms"] = terms;
    if (!s.tail_known())
        j["tail"] = "unknown";
    else if (!s.tail_bound())
        j["tail"] = "exact";
    else
        j["tail"] = s.tail_bound()->get_str();
    return j;
}

inline truncated_series<padic_scalar> series_from_json(const json& j) {
    long p = detail::jfield(j, "p").get<long>();
    int n = detail::jfield(j, "n").get<int>();
    int D = detail::jfield(j, "D").get<int>();
    long dflt = detail::jfield(j, "prec").get<long>();
    truncated_series<padic_scalar> s(n, D, padic_scalar::zero(p, dflt));
    for (const auto& t : detail::jfield(j, "terms")) {
        const auto& ej = detail::jfield(t, "exps");
        if (static_cast<int>(ej.size()) != n)
            fail(errc::bad_input, "term exponent arity does not match the series");
        std::array<int, 3> e{0, 0, 0};
        for (int k = 0; k < n; ++k) e[k] = ej[k].get<int>();
        json cj;
        cj["v"] = detail::jfield(t, "val");
        cj["unit"] = detail::jfield(t, "unit");
        cj["prec"] = detail::jfield(t, "prec");
        s.set_coeff(e, scalar_from_json(p, cj));
    }
    std::string tail = detail::jfield(j, "tail").get<std::string>();
    if (tail == "unknown")
        s.set_tail_unknown();
    else if (tail == "exact")
        s.set_tail(std::nullopt);
    else
        s.set_tail(detail::parse_q(tail));
    return s;
}

// law as parameters plus the adder payload; reads rebuild through the
// factories from the parameters, so the adder in the file is informational
inline json law_json(const formal_group_law& L) {
    json j;
    j["kind"] = fg_kind_name(L.kind());
    j["p"] = L.prime();
    j["prec"] = L.prec();
    j["D"] = L.degree_cap();
    if (L.kind() == fg_kind::lubin_tate && L.lt_poly()) j["f"] = series_json(*L.lt_poly());
    if (L.kind() == fg_kind::elliptic) {
        j["a"] = L.curve_a()->lift().get_str();
        j["b"] = L.curve_b()->lift().get_str();
    }
    j["adder"] = series_json(L.adder());
    return j;
}

inline formal_group_law law_from_json(const json& j) {
    std::string kind = detail::jfield(j, "kind").get<std::string>();
    long p = detail::jfield(j, "p").get<long>();
    long prec = detail::jfield(j, "prec").get<long>();
    int D = detail::jfield(j, "D").get<int>();
    if (kind == "multiplicative") return formal_group_law::multiplicative(p, D, prec);
    if (kind == "lubin_tate") {
        std::optional<truncated_series<padic_scalar>> f;
        if (j.contains("f")) f = series_from_json(j["f"]);
        return formal_group_law::lubin_tate(p, D, prec, f);
    }
    if (kind == "elliptic")
        return formal_group_law::elliptic(
            p, D, prec, detail::parse_z(detail::jfield(j, "a").get<std::string>()),
            detail::parse_z(detail::jfield(j, "b").get<std::string>()));
    fail(errc::bad_input, "unknown law kind '" + kind + "'");
}

inline json subscheme_json(const formal_subscheme<padic_scalar>& S) {
    json j;
    json ambient = json::array();
    for (const auto& L : S.laws) ambient.push_back(law_json(L));
    j["ambient"] = ambient;
    json gens = json::array();
    for (const auto& g : S.gens) gens.push_back(series_json(g));
    j["generators"] = gens;
    return j;
}

inline formal_subscheme<padic_scalar> subscheme_from_json(const json& j) {
    formal_subscheme<padic_scalar> S;
    for (const auto& lj : detail::jfield(j, "ambient")) S.laws.push_back(law_from_json(lj));
    for (const auto& gj : detail::jfield(j, "generators")) S.gens.push_back(series_from_json(gj));
    S.validate();
    return S;
}

namespace detail {

inline json scalar_vec_json(const std::vector<padic_scalar>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar_json(x));
    return a;
}

inline std::vector<padic_scalar> scalar_vec_from_json(long p, const json& a) {
    std::vector<padic_scalar> v;
    for (const auto& x : a) v.push_back(scalar_from_json(p, x));
    return v;
}

}  // namespace detail

// full interpolation state; everything exact, big integers and rationals as
// decimal strings
inline json cex_state_json(const cex_state& st) {
    json j;
    j["law"] = law_json(st.law);
    j["alpha1"] = scalar_json(st.alpha1);
    j["alpha2"] = scalar_json(st.alpha2);
    j["v"] = st.v;
    j["n_out"] = st.n_out;
    j["n_int"] = st.n_int;
    j["j_target"] = st.j_target;
    j["stage"] = st.stage;
    j["phi"] = detail::scalar_vec_json(st.phi);
    j["psi"] = detail::scalar_vec_json(st.psi);
    json ni = json::array(), mi = json::array();
    for (const auto& n : st.n_idx) ni.push_back(n.get_str());
    for (const auto& m : st.m_idx) mi.push_back(m.get_str());
    j["n_idx"] = ni;
    j["m_idx"] = mi;
    j["roots"] = detail::scalar_vec_json(st.roots);
    j["images"] = detail::scalar_vec_json(st.images);
    j["corrections"] = detail::scalar_vec_json(st.corrections);
    j["targets"] = detail::scalar_vec_json(st.targets);
    json sl = json::array(), pl = json::array();
    for (const auto& r : st.slopes) sl.push_back(r.get_str());
    for (const auto& r : st.psi_ledger) pl.push_back(r.get_str());
    j["slopes"] = sl;
    j["psi_ledger"] = pl;
    json cv = json::array();
    for (const auto& row : st.correction_vals) {
        json r = json::array();
        for (const auto& v : row) r.push_back(val_json_str(v));
        cv.push_back(r);
    }
    j["correction_vals"] = cv;
    return j;
}

inline cex_state cex_state_from_json(const json& j) {
    auto law = law_from_json(detail::jfield(j, "law"));
    long p = law.prime();
    cex_state st{std::move(law), scalar_from_json(p, detail::jfield(j, "alpha1")),
                 scalar_from_json(p, detail::jfield(j, "alpha2"))};
    st.v = detail::jfield(j, "v").get<long>();
    st.n_out = detail::jfield(j, "n_out").get<long>();
    st.n_int = detail::jfield(j, "n_int").get<long>();
    st.j_target = detail::jfield(j, "j_target").get<int>();
    st.stage = detail::jfield(j, "stage").get<int>();
    st.phi = detail::scalar_vec_from_json(p, detail::jfield(j, "phi"));
    st.psi = detail::scalar_vec_from_json(p, detail::jfield(j, "psi"));
    for (const auto& s : detail::jfield(j, "n_idx"))
        st.n_idx.push_back(detail::parse_z(s.get<std::string>()));
    for (const auto& s : detail::jfield(j, "m_idx"))
        st.m_idx.push_back(detail::parse_z(s.get<std::string>()));
    st.roots = detail::scalar_vec_from_json(p, detail::jfield(j, "roots"));
    st.images = detail::scalar_vec_from_json(p, detail::jfield(j, "images"));
    st.corrections = detail::scalar_vec_from_json(p, detail::jfield(j, "corrections"));
    st.targets = detail::scalar_vec_from_json(p, detail::jfield(j, "targets"));
    for (const auto& s : detail::jfield(j, "slopes"))
        st.slopes.push_back(detail::parse_q(s.get<std::string>()));
    for (const auto& s : detail::jfield(j, "psi_ledger"))
        st.psi_ledger.push_back(detail::parse_q(s.get<std::string>()));
    for (const auto& rj : detail::jfield(j, "correction_vals")) {
        std::vector<val_t> row;
        for (const auto& s : rj) row.push_back(val_from_str(s.get<std::string>()));
        st.correction_vals.push_back(std::move(row));
    }
    return st;
}

// csv rows; fields are exact decimal/rational strings and never contain commas
inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << fields[i];
    }
    os << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    write_csv_row(os, header);
    for (const auto& r : rows) write_csv_row(os, r);
}

}  // namespace fball
