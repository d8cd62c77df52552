#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fball/fball.hpp"

using namespace fball;
namespace fs = std::filesystem;

namespace {

// exit 1 = a mathematical check failed, exit 2 = the inputs were no good
int exit_code_for(errc c) {
    switch (c) {
        case errc::bad_input:
        case errc::bad_modulus:
        case errc::not_eisenstein:
        case errc::unsupported_ring:
        case errc::unsupported_kind:
        case errc::variable_mismatch:
        case errc::nonzero_constant_term:
        case errc::not_in_open_disk:
        case errc::not_integral:
        case errc::tail_too_short:
        case errc::precision_exhausted:
        case errc::tower_too_deep:
        case errc::level_too_deep:
        case errc::enumeration_overflow:
            return 2;
        default:
            return 1;
    }
}

void write_text(const fs::path& p, const std::string& s) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) fail(errc::bad_input, "cannot write " + p.string());
    os << s;
}

void emit_doc(const fs::path& dir, const std::string& name, const json& j) {
    write_text(dir / name, j.dump(2) + "\n");
    std::cout << "wrote " << (dir / name).string() << "\n";
}

void emit_table(const fs::path& dir, const std::string& name,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    write_csv(os, header, rows);
    write_text(dir / name, os.str());
    std::cout << "wrote " << (dir / name).string() << "\n";
}

json load_doc(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(errc::bad_input, "cannot read " + path);
    json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        fail(errc::bad_input, std::string("json parse: ") + e.what());
    }
    return j;
}

// attach the shared config/output plumbing to a leaf subcommand
void wire(CLI::App* cmd, std::string& out_dir, std::string& cfg_path) {
    cmd->add_option("--config", cfg_path, "json config file; flags override its keys");
    cmd->add_option("--out", out_dir, "output directory for artifacts")
        ->capture_default_str();
}

// a flat json object keyed by long option names; values fill in only where
// the command line gave nothing, so flags win
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    json cfg = load_doc(path);
    if (!cfg.is_object()) fail(errc::bad_input, "config must be a json object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        auto* opt = cmd->get_option_no_throw("--" + it.key());
        if (!opt) fail(errc::bad_input, "unknown config key '" + it.key() + "'");
        if (opt->count() > 0) continue;
        auto plain = [](const json& v) {
            return v.is_string() ? v.get<std::string>() : v.dump();
        };
        if (it.value().is_array())
            for (const auto& v : it.value()) opt->add_result(plain(v));
        else
            opt->add_result(plain(it.value()));
        opt->run_callback();
    }
}

json summary_head(const std::string& command, json config) {
    json j;
    j["tool"] = "fball";
    j["command"] = command;
    j["config"] = std::move(config);  // every effective parameter, defaults included
    return j;
}

// small bundled examples so the verification commands run out of the box
formal_subscheme<padic_scalar> bundled_scheme(const std::string& name, long p, int D,
                                              long prec) {
    auto L = formal_group_law::multiplicative(p, D, prec);
    formal_subscheme<padic_scalar> X;
    X.laws = {L, L};
    truncated_series<padic_scalar> g(2, D, padic_scalar::zero(p, prec));
    g.set_coeff({1, 0, 0}, padic_scalar::one(p, prec));
    g.set_coeff({0, 1, 0}, padic_scalar::one(p, prec).neg());
    if (name == "translate") g.set_coeff({0, 0, 0}, padic_scalar::from_integer(p, -p, prec));
    else if (name != "diagonal") fail(errc::bad_input, "unknown bundled scheme '" + name + "'");
    X.gens = {g};
    return X;
}

truncated_series<padic_scalar> bundled_chart(const std::string& name, long p, int D,
                                             long prec) {
    auto L = formal_group_law::multiplicative(p, D, prec);
    if (name == "diagonal") {
        truncated_series<padic_scalar> h(1, D, padic_scalar::zero(p, prec));
        h.set_coeff(1, padic_scalar::one(p, prec));
        return h;
    }
    if (name == "doubling") return L.mult_by(2, D);
    fail(errc::bad_input, "unknown bundled chart '" + name + "'");
}

std::vector<padic_scalar> parse_point(const std::vector<std::string>& words, long p,
                                      long prec) {
    std::vector<padic_scalar> pt;
    for (const auto& w : words)
        pt.push_back(padic_scalar::from_integer(p, fball::detail::parse_z(w), prec));
    return pt;
}

// ---------------------------------------------------------------------------
// cex build / cex verify
// ---------------------------------------------------------------------------

struct cex_build_params {
    long p = 3;
    std::string alpha = "3";
    std::string alpha2;  // empty means same as alpha
    int stages = 6;
    long prec = 60;
    std::string kind = "multiplicative";
    int degree = 16;
    std::string out = ".";
    std::string config;
};

int run_cex_build(const cex_build_params& P) {
    fg_kind kind;
    if (P.kind == "multiplicative") kind = fg_kind::multiplicative;
    else if (P.kind == "lubin_tate") kind = fg_kind::lubin_tate;
    else fail(errc::bad_input, "kind must be multiplicative or lubin_tate");
    bigint a1 = fball::detail::parse_z(P.alpha);
    bigint a2 = P.alpha2.empty() ? a1 : fball::detail::parse_z(P.alpha2);

    auto st = cex_run(kind, P.p, a1, a2, P.prec, P.stages, P.degree);
    auto rep = cex_verify(st, P.prec);
    auto cover = line_cover_check(st.pairs());
    if (!cover.ok)
        fail(errc::construction_diverged, "interpolation pairs admit a covering line");

    json cfg;
    cfg["p"] = P.p;
    cfg["alpha"] = P.alpha;
    cfg["alpha2"] = P.alpha2.empty() ? P.alpha : P.alpha2;
    cfg["stages"] = P.stages;
    cfg["prec"] = P.prec;
    cfg["kind"] = P.kind;
    cfg["degree"] = P.degree;
    auto summary = summary_head("cex build", cfg);
    summary["stage"] = st.stage;
    summary["n_int"] = st.n_int;
    json pairs = json::array();
    for (const auto& [n, m] : st.pairs()) {
        json pr;
        pr["n"] = n.get_str();
        pr["m"] = m.get_str();
        pairs.push_back(pr);
    }
    summary["pairs"] = pairs;
    json slopes = json::array();
    for (const auto& r : st.slopes) slopes.push_back(r.get_str());
    summary["slopes"] = slopes;
    json ledger = json::array();
    for (const auto& r : st.psi_ledger) ledger.push_back(r.get_str());
    summary["psi_ledger"] = ledger;
    rational worst = rep.residual_floor.at(0);
    for (const auto& r : rep.residual_floor) worst = std::min(worst, rational(r));
    summary["residual_min"] = worst.get_str();
    summary["worst_pair"] = rep.worst_pair;
    summary["cauchy_ok"] = rep.cauchy_ok;
    summary["collinear_triples"] = cover.collinear.size();
    summary["ok"] = true;

    fs::path dir(P.out);
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < rep.residual_floor.size(); ++i)
        rows.push_back({std::to_string(i + 1), st.n_idx[i].get_str(), st.m_idx[i].get_str(),
                        rep.residual_floor[i].get_str(),
                        rep.residual_zero[i] ? "true" : "false"});
    emit_table(dir, "cex_residuals.csv",
               {"pair", "n", "m", "residual_floor", "zero_to_precision"}, rows);
    emit_doc(dir, "cex_state.json", cex_state_json(st));
    emit_doc(dir, "cex_phi.json", series_json(rep.phi_xy));
    emit_doc(dir, "cex_build_summary.json", summary);
    std::cout << "residual floor >= " << worst.get_str() << " at all " << st.stage
              << " pairs\n";
    return 0;
}

struct cex_verify_params {
    std::string state;
    long prec = 0;  // 0 means the state's own target
    std::string out = ".";
    std::string config;
};

int run_cex_verify(const cex_verify_params& P) {
    auto st = cex_state_from_json(load_doc(P.state));
    long n_out = P.prec > 0 ? P.prec : st.n_out;
    auto rep = cex_verify(st, n_out);
    auto cover = line_cover_check(st.pairs());

    json cfg;
    cfg["state"] = P.state;
    cfg["prec"] = n_out;
    auto summary = summary_head("cex verify", cfg);
    summary["stage"] = st.stage;
    rational worst = rep.residual_floor.at(0);
    for (const auto& r : rep.residual_floor) worst = std::min(worst, rational(r));
    summary["residual_min"] = worst.get_str();
    summary["worst_pair"] = rep.worst_pair;
    summary["cauchy_ok"] = rep.cauchy_ok;
    summary["line_cover_ok"] = cover.ok;
    summary["ok"] = true;

    fs::path dir(P.out);
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < rep.residual_floor.size(); ++i)
        rows.push_back({std::to_string(i + 1), st.n_idx[i].get_str(), st.m_idx[i].get_str(),
                        rep.residual_floor[i].get_str(),
                        rep.residual_zero[i] ? "true" : "false"});
    emit_table(dir, "cex_residuals.csv",
               {"pair", "n", "m", "residual_floor", "zero_to_precision"}, rows);
    emit_doc(dir, "cex_verify_summary.json", summary);
    std::cout << "state verifies to precision " << n_out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// scan dichotomy / orbit forward
// ---------------------------------------------------------------------------

struct scan_params {
    long p = 3;
    std::string scheme_file;
    std::string curve = "diagonal";
    std::string sigma = "torsion";
    int levels = 3;
    long box = 12;
    std::vector<std::string> gamma;
    int degree = 8;
    long prec = 40;
    std::string out = ".";
    std::string config;
};

void emit_scan(const fs::path& dir, const std::string& stem, const scan_result& sc,
               json summary) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : sc.rows)
        rows.push_back({r.id, std::to_string(r.level), std::to_string(r.gamma_level),
                        val_json_str(r.dist), r.certified.get_str(),
                        r.dist ? "false" : "true"});
    emit_table(dir, stem + "_rows.csv",
               {"id", "level", "gamma_level", "dist", "certified", "on_x"}, rows);
    std::vector<std::vector<std::string>> lv;
    for (const auto& s : sc.levels)
        lv.push_back({std::to_string(s.level), std::to_string(s.points),
                      std::to_string(s.on_x), val_json_str(s.min_dist)});
    emit_table(dir, stem + "_levels.csv", {"level", "points", "on_x", "min_dist"}, lv);
    summary["verdict"] = sc.verdict;
    summary["floor"] = val_json_str(sc.floor);
    summary["note"] = sc.note;
    summary["rows"] = sc.rows.size();
    summary["ok"] = true;
    emit_doc(dir, stem + "_summary.json", summary);
    std::cout << "verdict: " << sc.verdict << "\n";
}

int run_scan(const scan_params& P, bool forward_only) {
    formal_subscheme<padic_scalar> X =
        P.scheme_file.empty() ? bundled_scheme(P.curve, P.p, P.degree, P.prec)
                              : subscheme_from_json(load_doc(P.scheme_file));
    long p = X.laws[0].prime();

    std::vector<std::string> gw = P.gamma;
    if (gw.empty()) gw.assign(static_cast<size_t>(X.dim_ambient()), std::to_string(p));
    auto gamma = parse_point(gw, p, X.laws[0].prec());

    sigma_spec sig;
    std::string sigma = forward_only ? "forward" : P.sigma;
    if (sigma == "torsion") sig = sigma_spec::torsion(P.levels);
    else if (sigma == "forward") sig = sigma_spec::forward(gamma, P.box);
    else if (sigma == "backward") sig = sigma_spec::backward(gamma, P.levels);
    else fail(errc::bad_input, "sigma must be torsion, forward, or backward");

    auto sc = dichotomy_scan(X, sig);

    json cfg;
    cfg["p"] = p;
    cfg["scheme"] = P.scheme_file.empty() ? P.curve : P.scheme_file;
    cfg["sigma"] = sigma;
    cfg["levels"] = P.levels;
    cfg["box"] = P.box;
    json gj = json::array();
    for (const auto& w : gw) gj.push_back(w);
    cfg["gamma"] = gj;
    cfg["degree"] = P.degree;
    cfg["prec"] = P.prec;
    emit_scan(fs::path(P.out), forward_only ? "orbit" : "scan", sc,
              summary_head(forward_only ? "orbit forward" : "scan dichotomy", cfg));
    return 0;
}

// ---------------------------------------------------------------------------
// subtorus check
// ---------------------------------------------------------------------------

struct subtorus_params {
    long p = 3;
    std::string chart_file;
    std::string curve = "diagonal";
    int degree = 8;
    long prec = 40;
    std::string out = ".";
    std::string config;
};

int run_subtorus(const subtorus_params& P) {
    auto h = P.chart_file.empty() ? bundled_chart(P.curve, P.p, P.degree, P.prec)
                                  : series_from_json(load_doc(P.chart_file));
    auto t = subtorus_test(h);

    json cfg;
    cfg["p"] = h.prime();
    cfg["chart"] = P.chart_file.empty() ? P.curve : P.chart_file;
    cfg["degree"] = h.degree_cap();
    cfg["prec"] = P.prec;
    auto summary = summary_head("subtorus check", cfg);
    summary["special"] = t.special;
    summary["lambda"] = scalar_json(t.lambda);
    summary["defect_degree"] = t.defect_degree;
    summary["defect_valuation"] = val_json_str(t.defect_valuation);
    summary["certificate"] = json::array({scalar_json(t.certificate.first),
                                          scalar_json(t.certificate.second)});
    summary["ok"] = true;

    fs::path dir(P.out);
    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k <= h.degree_cap(); ++k) {
        auto cj = scalar_json(h.coeff(k));
        rows.push_back({std::to_string(k), cj["v"].dump(), cj["unit"].get<std::string>(),
                        std::to_string(h.coeff(k).prec())});
    }
    emit_table(dir, "subtorus_chart.csv", {"degree", "v", "unit", "prec"}, rows);
    emit_doc(dir, "subtorus_summary.json", summary);
    std::cout << (t.special ? "special: one-parameter subtorus, lambda = " +
                                  t.lambda.decimal_str()
                            : "not a subtorus character relation")
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// newton polygon
// ---------------------------------------------------------------------------

struct polygon_params {
    long p = 3;
    std::string alpha_val = "1";
    int steps = 3;
    std::string kind = "multiplicative";
    std::string a = "1";
    std::string b = "1";
    int degree = 0;  // 0 picks a cap wide enough for the height
    long prec = 40;
    std::string out = ".";
    std::string config;
};

int run_polygon(const polygon_params& P) {
    int D = P.degree;
    if (D == 0) D = std::max(16L, P.p * P.p + 2);
    formal_group_law law = [&] {
        if (P.kind == "multiplicative")
            return formal_group_law::multiplicative(P.p, D, P.prec);
        if (P.kind == "lubin_tate") return formal_group_law::lubin_tate(P.p, D, P.prec);
        if (P.kind == "elliptic")
            return formal_group_law::elliptic(P.p, D, P.prec, fball::detail::parse_z(P.a),
                                              fball::detail::parse_z(P.b));
        fail(errc::bad_input, "kind must be multiplicative, lubin_tate, or elliptic");
    }();

    auto chain = division_valuations(law, fball::detail::parse_q(P.alpha_val), P.steps);

    json cfg;
    cfg["p"] = P.p;
    cfg["alpha_val"] = P.alpha_val;
    cfg["steps"] = P.steps;
    cfg["kind"] = P.kind;
    if (P.kind == "elliptic") {
        cfg["a"] = P.a;
        cfg["b"] = P.b;
    }
    cfg["degree"] = D;
    cfg["prec"] = P.prec;
    auto summary = summary_head("newton polygon", cfg);

    std::vector<std::vector<std::string>> rows;
    json steps = json::array();
    bool halving = true;
    for (size_t i = 0; i < chain.size(); ++i) {
        const auto& d = chain[i];
        bool ok = halving_ok(d);
        halving = halving && ok;
        for (size_t s = 0; s < d.polygon.segments.size(); ++s) {
            const auto& seg = d.polygon.segments[s];
            rows.push_back({std::to_string(i + 1), d.v_in.get_str(), std::to_string(s),
                            seg.root_val.get_str(), std::to_string(seg.mult),
                            seg.principal ? "true" : "false", d.chosen.get_str(),
                            ok ? "true" : "false"});
        }
        json st;
        st["v_in"] = d.v_in.get_str();
        st["chosen"] = d.chosen.get_str();
        st["principal"] = d.principal ? d.principal->get_str() : "none";
        st["height_index"] = d.height_index;
        st["halving_ok"] = ok;
        steps.push_back(st);
    }
    summary["steps"] = steps;
    summary["halving_ok"] = halving;
    summary["ok"] = halving;

    fs::path dir(P.out);
    emit_table(dir, "polygon_slopes.csv",
               {"step", "v_in", "segment", "root_val", "mult", "principal", "chosen",
                "halving_ok"},
               rows);
    emit_doc(dir, "polygon_summary.json", summary);
    std::cout << "division chain:";
    for (const auto& d : chain) std::cout << " " << d.chosen.get_str();
    std::cout << "\n";
    if (!halving)
        fail(errc::convergence_violation, "a division step broke the halving bound");
    return 0;
}

// ---------------------------------------------------------------------------
// weights classify
// ---------------------------------------------------------------------------

struct weights_params {
    long p = 3;
    std::string chart_file;
    std::string curve = "diagonal";
    long k_box = 6;
    int levels = 2;
    int degree = 8;
    long prec = 48;
    std::string out = ".";
    std::string config;
};

int run_weights(const weights_params& P) {
    auto h = P.chart_file.empty() ? bundled_chart(P.curve, P.p, P.degree, P.prec)
                                  : series_from_json(load_doc(P.chart_file));
    auto rep = classify_weight_closure(h, P.k_box, P.levels, true, P.prec);

    json cfg;
    cfg["p"] = h.prime();
    cfg["chart"] = P.chart_file.empty() ? P.curve : P.chart_file;
    cfg["k_box"] = P.k_box;
    cfg["levels"] = P.levels;
    cfg["degree"] = h.degree_cap();
    cfg["prec"] = P.prec;
    auto summary = summary_head("weights classify", cfg);
    summary["verdict"] = weight_verdict_name(rep.verdict);
    summary["lambda"] = scalar_json(rep.lambda);
    summary["bounded_level"] = rep.bounded_level;
    json hits = json::array();
    for (long hcount : rep.hits_per_level) hits.push_back(hcount);
    summary["hits_per_level"] = hits;
    summary["scanned"] = rep.scanned;
    summary["torus_special"] = rep.torus.special;
    summary["ok"] = true;

    fs::path dir(P.out);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rep.rows)
        rows.push_back({std::to_string(r.k1), std::to_string(r.k2), std::to_string(r.l1),
                        std::to_string(r.l2), std::to_string(r.s1), std::to_string(r.s2),
                        r.on_curve ? "true" : "false", val_json_str(r.distance)});
    emit_table(dir, "weights.csv", {"k1", "k2", "l1", "l2", "s1", "s2", "on_curve", "dist"},
               rows);
    emit_doc(dir, "weights_summary.json", summary);
    std::cout << "verdict: " << weight_verdict_name(rep.verdict) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact p-adic formal group toolkit"};
    app.require_subcommand(1);

    // cex
    auto* cex = app.add_subcommand("cex", "counterexample interpolation engine");
    cex->require_subcommand(1);
    cex_build_params cb;
    auto* cexb = cex->add_subcommand("build", "run the interpolation and certify it");
    cexb->add_option("--p", cb.p, "odd prime")->capture_default_str();
    cexb->add_option("--alpha", cb.alpha, "first seed point")->capture_default_str();
    cexb->add_option("--alpha2", cb.alpha2, "second seed point (default: same as --alpha)");
    cexb->add_option("--stages", cb.stages, "interpolation stages")->capture_default_str();
    cexb->add_option("--prec", cb.prec, "certified output precision")->capture_default_str();
    cexb->add_option("--kind", cb.kind, "formal group kind")->capture_default_str();
    cexb->add_option("--degree", cb.degree, "truncation cap for exported series")
        ->capture_default_str();
    wire(cexb, cb.out, cb.config);

    cex_verify_params cv;
    auto* cexv = cex->add_subcommand("verify", "re-check a dumped interpolation state");
    cexv->add_option("--state", cv.state, "state json from cex build")->required();
    cexv->add_option("--prec", cv.prec, "target precision (default: the state's own)");
    wire(cexv, cv.out, cv.config);

    // scan
    auto* scan = app.add_subcommand("scan", "distance scans against a subscheme");
    scan->require_subcommand(1);
    scan_params sp;
    auto* scand = scan->add_subcommand("dichotomy", "enumerate a point family and rank distances");
    scand->add_option("--p", sp.p, "odd prime (bundled schemes)")->capture_default_str();
    scand->add_option("--subscheme", sp.scheme_file, "subscheme json document");
    scand->add_option("--curve", sp.curve, "bundled scheme: diagonal | translate")
        ->capture_default_str();
    scand->add_option("--sigma", sp.sigma, "family: torsion | forward | backward")
        ->capture_default_str();
    scand->add_option("--levels", sp.levels, "torsion levels / backward depth")
        ->capture_default_str();
    scand->add_option("--box", sp.box, "forward orbit length")->capture_default_str();
    scand->add_option("--gamma", sp.gamma, "orbit seed, one integer per coordinate");
    scand->add_option("--degree", sp.degree, "truncation cap (bundled schemes)")
        ->capture_default_str();
    scand->add_option("--prec", sp.prec, "working precision (bundled schemes)")
        ->capture_default_str();
    wire(scand, sp.out, sp.config);

    // orbit
    auto* orbit = app.add_subcommand("orbit", "group orbits through a subscheme");
    orbit->require_subcommand(1);
    scan_params op;
    auto* orbitf = orbit->add_subcommand("forward", "walk n*gamma and measure distances");
    orbitf->add_option("--p", op.p, "odd prime (bundled schemes)")->capture_default_str();
    orbitf->add_option("--subscheme", op.scheme_file, "subscheme json document");
    orbitf->add_option("--curve", op.curve, "bundled scheme: diagonal | translate")
        ->capture_default_str();
    orbitf->add_option("--box", op.box, "orbit length")->capture_default_str();
    orbitf->add_option("--gamma", op.gamma, "orbit seed, one integer per coordinate");
    orbitf->add_option("--degree", op.degree, "truncation cap (bundled schemes)")
        ->capture_default_str();
    orbitf->add_option("--prec", op.prec, "working precision (bundled schemes)")
        ->capture_default_str();
    wire(orbitf, op.out, op.config);

    // subtorus
    auto* sub = app.add_subcommand("subtorus", "subtorus character tests");
    sub->require_subcommand(1);
    subtorus_params tp;
    auto* subc = sub->add_subcommand("check", "test a graph chart for the character relation");
    subc->add_option("--p", tp.p, "odd prime (bundled charts)")->capture_default_str();
    subc->add_option("--chart", tp.chart_file, "1-variable series json document");
    subc->add_option("--curve", tp.curve, "bundled chart: diagonal | doubling")
        ->capture_default_str();
    subc->add_option("--degree", tp.degree, "truncation cap (bundled charts)")
        ->capture_default_str();
    subc->add_option("--prec", tp.prec, "working precision (bundled charts)")
        ->capture_default_str();
    wire(subc, tp.out, tp.config);

    // newton
    auto* newton = app.add_subcommand("newton", "valuation polygons of division polynomials");
    newton->require_subcommand(1);
    polygon_params pp;
    auto* poly = newton->add_subcommand("polygon", "iterated division through the polygon");
    poly->add_option("--p", pp.p, "odd prime")->capture_default_str();
    poly->add_option("--alpha-val", pp.alpha_val, "valuation of the point being divided")
        ->capture_default_str();
    poly->add_option("--steps", pp.steps, "division iterations")->capture_default_str();
    poly->add_option("--kind", pp.kind, "formal group kind")->capture_default_str();
    poly->add_option("--a", pp.a, "elliptic a")->capture_default_str();
    poly->add_option("--b", pp.b, "elliptic b")->capture_default_str();
    poly->add_option("--degree", pp.degree, "truncation cap, 0 = automatic")
        ->capture_default_str();
    poly->add_option("--prec", pp.prec, "working precision")->capture_default_str();
    wire(poly, pp.out, pp.config);

    // weights
    auto* weights = app.add_subcommand("weights", "weight space scans");
    weights->require_subcommand(1);
    weights_params wp;
    auto* wc = weights->add_subcommand("classify", "scan locally algebraic weights on a chart");
    wc->add_option("--p", wp.p, "odd prime (bundled charts)")->capture_default_str();
    wc->add_option("--chart", wp.chart_file, "1-variable series json document");
    wc->add_option("--curve", wp.curve, "bundled chart: diagonal | doubling")
        ->capture_default_str();
    wc->add_option("--k-box", wp.k_box, "algebraic exponent box")->capture_default_str();
    wc->add_option("--levels", wp.levels, "finite-order level cap")->capture_default_str();
    wc->add_option("--degree", wp.degree, "truncation cap (bundled charts)")
        ->capture_default_str();
    wc->add_option("--prec", wp.prec, "working precision")->capture_default_str();
    wire(wc, wp.out, wp.config);

    int rc = 0;
    cexb->callback([&] { apply_config(cexb, cb.config); rc = run_cex_build(cb); });
    cexv->callback([&] { apply_config(cexv, cv.config); rc = run_cex_verify(cv); });
    scand->callback([&] { apply_config(scand, sp.config); rc = run_scan(sp, false); });
    orbitf->callback([&] { apply_config(orbitf, op.config); rc = run_scan(op, true); });
    subc->callback([&] { apply_config(subc, tp.config); rc = run_subtorus(tp); });
    poly->callback([&] { apply_config(poly, pp.config); rc = run_polygon(pp); });
    wc->callback([&] { apply_config(wc, wp.config); rc = run_weights(wp); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
