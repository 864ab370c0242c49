#include "sslab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "sslab/duality.hpp"
#include "sslab/extremizers.hpp"
#include "sslab/flows.hpp"
#include "sslab/local_stability.hpp"
#include "sslab/profile_io.hpp"
#include "sslab/scalar_inequalities.hpp"

namespace sslab {

namespace {

using json = nlohmann::json;

struct Output {
    std::string format = "json";
    std::string json_path;
    std::string csv_path;
};

struct Result {
    json report;
    int code = 0;
};

json header(const std::string& command) {
    return json{{"tool", "sslab"}, {"version", std::string(kVersion)}, {"command", command}};
}

ZonalFunction lifted_input(const LoadedProfile& in, int L) {
    if (const auto* z = std::get_if<ZonalFunction>(&in)) return *z;
    const auto& r = std::get<RadialInput>(in);
    const auto ctx = make_context(r.profile.n(), r.s, L);
    return ZonalFunction::from_function(ctx, [&](double t) { return r.profile.lifted(t); });
}

json context_json(const SphereContext& ctx) {
    return json{{"n", ctx.n()}, {"s", ctx.s()}, {"L", ctx.L()}, {"Q", ctx.Q()}};
}

json violation_json(const ViolationReport& v) {
    return json{{"grid", v.grid},           {"points", v.points},   {"violations", v.count},
                {"worst_residual", v.worst_residual}, {"worst_r", v.worst_r}, {"worst_p", v.worst_p},
                {"tolerance", v.tolerance}, {"certified", v.certified()}};
}

// ---------------------------------------------------------------- subcommands

struct ConstantsArgs {
    std::int64_t n = 4;
    double s = 1.0;
    int lmax = 8;
};

Result run_constants(const ConstantsArgs& a) {
    const ProblemParams pp(a.n, a.s);
    if (a.lmax < 0) throw DomainError("lmax must be nonnegative");
    Result res{header("constants")};
    auto& r = res.report;
    r["params"] = {{"n", a.n}, {"s", a.s}, {"lmax", a.lmax}};
    r["p"] = pp.p();
    r["q"] = pp.q();
    r["theta"] = pp.theta();
    r["sharp_constant"] = sharp_constant(pp);
    r["sharp_constant_gamma_form"] = sharp_constant_gamma_form(pp);
    r["comparability_bound"] = comparability_bound(pp);
    json rows = json::array();
    for (int l = 0; l <= a.lmax; ++l) {
        json row{{"l", l}, {"eigenvalue", funk_hecke_eigenvalue(pp, l)}};
        try {
            if (a.n > std::numeric_limits<int>::max()) throw std::overflow_error("n too large");
            row["multiplicity"] = multiplicity(static_cast<int>(a.n), l);
        } catch (const std::overflow_error&) {
            row["multiplicity"] = multiplicity_real(static_cast<double>(a.n), l);
        }
        rows.push_back(row);
    }
    r["rows"] = rows;
    return res;
}

struct CertifyArgs {
    double p0 = 1.75;
    double gamma = 1.0 / 32.0;
    double M = 1.0;
    double eps = 0.125;
    std::int64_t N = 0;
    int r_points = 20000;
    int p_points = 21;
    double r_max = 1e3;
    double tolerance = 1e-10;
};

Result run_certify(const CertifyArgs& a) {
    SplitParams sp;
    sp.p0 = a.p0;
    sp.gamma = a.gamma;
    sp.M = a.M;
    sp.eps = a.eps;
    if (!(a.p0 > 1.0 && a.p0 < 2.0)) throw DomainError("p0 must lie in (1,2)");
    if (a.r_points < 10 || a.p_points < 2) throw DomainError("grids need at least 10 radii and 2 exponents");
    sp.N = a.N > 0 ? a.N : select_N(a.p0, a.M, a.eps);
    sp.validate();
    const auto k = build_constants(sp);

    CertificationGrid cubic{-1.0, a.r_max, a.r_points, linspace(1.0, 2.0, a.p_points), {}};
    const auto split_grid = corner_grid(sp, a.r_max, a.r_points, linspace(a.p0, 2.0, a.p_points));
    const auto c1 = certify_cubic_bound(cubic, a.tolerance);
    const auto c2 = certify_split_bound(sp, k, split_grid, a.tolerance);
    const auto c3 = certify_qestimate(sp, k, split_grid, a.tolerance);

    Result res{header("certify-scalar")};
    auto& r = res.report;
    r["params"] = {{"p0", sp.p0}, {"gamma", sp.gamma}, {"M", sp.M}, {"eps", sp.eps}, {"N", sp.N},
                   {"r_points", a.r_points}, {"p_points", a.p_points}, {"r_max", a.r_max}};
    r["constants"] = {{"C1_MN", k.C1_MN}, {"C1_N", k.C1_N}, {"C2_MN", k.C2_MN}, {"C3_MN", k.C3_MN},
                      {"C_M", k.C_M},     {"C_MN", k.C_MN}, {"C_qest", k.C_qest}};
    r["cubic_bound"] = violation_json(c1);
    r["split_bound"] = violation_json(c2);
    r["q_estimate"] = violation_json(c3);
    r["rows"] = json::array({json{{"inequality", "cubic_bound"}, {"violations", c1.count}, {"worst", c1.worst_residual}},
                             json{{"inequality", "split_bound"}, {"violations", c2.count}, {"worst", c2.worst_residual}},
                             json{{"inequality", "q_estimate"}, {"violations", c3.count}, {"worst", c3.worst_residual}}});
    res.code = (c1.certified() && c2.certified() && c3.certified()) ? 0 : 1;
    return res;
}

struct InputArgs {
    std::string input;
    std::string side = "hls";
    int L = 48;
};

Result run_deficit(const InputArgs& a) {
    if (a.side != "hls" && a.side != "sobolev") throw DomainError("side must be hls or sobolev");
    const auto f = lifted_input(load_profile(a.input), a.L);
    const auto d = a.side == "hls" ? hls_deficit(f) : sobolev_deficit(f);
    Result res{header("deficit")};
    auto& r = res.report;
    r["params"] = context_json(f.context());
    r["params"]["side"] = a.side;
    r["params"]["input"] = a.input;
    r["lp_norm_sq"] = d.lp_norm_sq;
    r["quadratic_form"] = d.quadratic_form;
    r["deficit"] = d.deficit;
    r["relative_deficit"] = d.lp_norm_sq > 0.0 ? d.deficit / d.lp_norm_sq : 0.0;
    return res;
}

Result run_project(const InputArgs& a) {
    const auto g = lifted_input(load_profile(a.input), a.L);
    const auto dec = project_Hminus_s(g);
    const auto cmp = comparability_check(g);
    Result res{header("project")};
    auto& r = res.report;
    r["params"] = context_json(g.context());
    r["params"]["input"] = a.input;
    r["phi"] = {{"c", dec.phi.c}, {"tau", dec.phi.tau}};
    r["hs_distance_sq"] = dec.hs_distance_sq;
    r["lp_distance"] = dec.lp_distance;
    r["orthogonality"] = {dec.ortho_residuals.first, dec.ortho_residuals.second};
    r["boundary_hit"] = dec.boundary_hit;
    r["tied"] = dec.tied.size();
    r["comparability"] = {{"unique", cmp.unique}, {"ratio", cmp.ratio}, {"bound", cmp.bound},
                          {"within_bound", cmp.within_bound}, {"message", cmp.message}};
    res.code = cmp.within_bound ? 0 : 1;
    return res;
}

struct LocalArgs {
    double s = 1.0;
    std::int64_t n = 0;
    int samples = 20;
    std::uint64_t seed = 1;
    int degree = 6;
    int L = 16;
    double eps1 = 1.0 / 16.0;
    double eps2 = 1.0 / 8.0;
};

Result run_local(const LocalArgs& a) {
    if (a.samples < 1) throw DomainError("samples must be positive");
    auto cp = make_certificate_params(ProblemParams(std::max<std::int64_t>(a.n, 1000), a.s), a.eps1, a.eps2);
    const std::int64_t n = a.n > 0 ? a.n : cp.n0;
    const ProblemParams pp(n, a.s);
    cp = make_certificate_params(pp, a.eps1, a.eps2);
    const auto ctx = make_context(n, a.s, a.L);
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    const bool scaled = !(cp.delta0 > 1e-300);

    Result res{header("local-check")};
    auto& r = res.report;
    r["params"] = {{"n", n},         {"s", a.s},         {"samples", a.samples}, {"seed", a.seed},
                   {"degree", a.degree}, {"L", a.L},     {"eps1", a.eps1},       {"eps2", a.eps2}};
    r["certificate"] = {{"K", cp.K},         {"n0", cp.n0},           {"log10_delta0", cp.log10_delta0},
                        {"C_qest", cp.C_qest}, {"C_coercive", cp.C_coercive}, {"gamma", cp.gamma},
                        {"M", cp.M},           {"scaled_mode", scaled}};
    json rows = json::array();
    int bad = 0;
    for (int i = 0; i < a.samples; ++i) {
        const double u = unit(rng);
        DeficitBreakdown d;
        if (scaled) {
            const auto shape = random_admissible(ctx, rng, a.degree, 1e-4, cp.gamma, cp.M);
            d = deficit_breakdown_scaled(shape, cp, cp.log10_delta0 + std::log10(u));
        } else {
            const auto rr = random_admissible(ctx, rng, a.degree, u * cp.delta0, cp.gamma, cp.M);
            d = deficit_breakdown(rr, cp);
        }
        const bool ok = d.I1 >= -1e-10 && d.I2 >= -1e-10 && d.I3 >= -1e-10 && d.slack() >= -1e-9;
        bad += ok ? 0 : 1;
        rows.push_back({{"sample", i}, {"I1", d.I1}, {"I2", d.I2}, {"I3", d.I3}, {"coercive", d.coercive},
                        {"deficit", d.deficit}, {"slack", d.slack()}, {"ok", ok}});
    }
    r["rows"] = rows;
    r["violations"] = bad;
    res.code = bad == 0 ? 0 : 1;
    return res;
}

struct FlowArgs {
    std::string start = "bump";
    std::string input;
    std::int64_t n = 3;
    double s = 0.5;
    int k = 40;
    int L = 48;
};

Result run_flow(const FlowArgs& a) {
    std::optional<RadialProfile> f;
    double s = a.s;
    if (!a.input.empty()) {
        const auto in = load_profile(a.input);
        const auto* r = std::get_if<RadialInput>(&in);
        if (!r) throw DomainError("flow input must be a radial profile");
        f = r->profile;
        s = r->s;
    } else {
        const ProblemParams pp(a.n, a.s);
        f = make_start_profile(start_profile_from_string(a.start), a.n, pp.p());
    }
    FlowOptions opt;
    opt.L = a.L;
    const auto trace = competing_iteration(*f, s, a.k, opt);
    const auto mono = monotonicity_check(trace);
    const auto decay = residual_decay_check(trace);

    Result res{header("flow")};
    auto& r = res.report;
    r["params"] = {{"n", trace.n}, {"s", s}, {"k", a.k}, {"L", a.L}, {"start", a.input.empty() ? a.start : a.input}};
    json rows = json::array();
    double drift = 0.0;
    for (const auto& rec : trace.records) {
        drift = std::max(drift, std::abs(rec.norm / trace.start_norm - 1.0));
        rows.push_back({{"k", rec.k},
                        {"norm", rec.norm},
                        {"form", rec.form},
                        {"dist_h", rec.dist_h / trace.start_norm},
                        {"r_norm", rec.r_norm / trace.start_norm}});
    }
    r["rows"] = rows;
    const double final_dist = trace.records.back().dist_h / trace.start_norm;
    r["summary"] = {{"norm_drift", drift},         {"monotone", mono.nondecreasing},
                    {"monotone_message", mono.message}, {"final_dist_h", final_dist},
                    {"final_r_norm", decay.final_fraction}, {"triangle_ok", decay.triangle_ok}};
    const bool ok = drift <= 1e-6 && mono.nondecreasing && final_dist <= 0.01 && decay.below_target;
    res.code = ok ? 0 : 1;
    return res;
}

struct SweepArgs {
    std::string family = "degree2";
    std::vector<std::int64_t> ns{20, 30, 40, 60};
    double s = 1.0;
    double eps = 1e-3;
    int L = 16;
};

double two_bubble_quotient(std::int64_t n, double s, int L) {
    const ProblemParams pp(n, s);
    const auto ctx = make_context(n, s, L);
    const auto G = stereographic_lift(
        ctx, [&](double rho) { return bubble(rho, 1.0 / 3.0, n, pp.p()) + bubble(rho, 3.0, n, pp.p()); }, pp.p());
    const auto d = hls_deficit(G);
    const auto dec = project_Hminus_s(G);
    const double dist_sq = std::min(dec.lp_distance * dec.lp_distance, d.lp_norm_sq);
    return d.deficit / dist_sq;
}

Result run_sweep(const SweepArgs& a) {
    if (a.ns.empty()) throw DomainError("need at least one dimension");
    Result res{header("quotient-sweep")};
    auto& r = res.report;
    r["params"] = {{"family", a.family}, {"ns", a.ns}, {"s", a.s}, {"eps", a.eps}, {"L", a.L}};
    json rows = json::array();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto n : a.ns) {
        double qv = 0.0;
        if (a.family == "degree2") {
            const auto ctx = make_context(n, a.s, a.L);
            qv = local_stability_ratio(ZonalFunction::harmonic(ctx, 2, a.eps));
        } else if (a.family == "sobolev-degree2") {
            qv = sobolev_linearized_quotient(make_context(n, a.s, a.L), 2, a.eps);
        } else if (a.family == "two-bubbles") {
            qv = two_bubble_quotient(n, a.s, std::max(a.L, 32));
        } else {
            throw DomainError("family must be degree2, sobolev-degree2 or two-bubbles");
        }
        const double scaled = qv * static_cast<double>(n);
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
        rows.push_back({{"n", n}, {"quotient", qv}, {"n_times_quotient", scaled}});
    }
    r["rows"] = rows;
    r["band"] = {{"min", lo}, {"max", hi}, {"ratio", hi / lo}};
    res.code = lo > 0.0 ? 0 : 1;
    return res;
}

struct DualityArgs {
    std::string input;
    int count = 100;
    std::uint64_t seed = 1;
    std::int64_t n = 4;
    double s = 1.0;
    int L = 16;
    int degree = 8;
    double tolerance = 1e-9;
};

Result run_duality(const DualityArgs& a) {
    std::vector<ZonalFunction> fs;
    if (!a.input.empty()) {
        fs.push_back(lifted_input(load_profile(a.input), a.L));
    } else {
        if (a.count < 1) throw DomainError("count must be positive");
        const auto ctx = make_context(a.n, a.s, a.L);
        std::mt19937_64 rng(a.seed);
        for (int i = 0; i < a.count; ++i) fs.push_back(random_band_limited(ctx, rng, std::min(a.degree, a.L)));
    }
    Result res{header("duality-check")};
    auto& r = res.report;
    r["params"] = {{"input", a.input}, {"count", fs.size()}, {"seed", a.seed}, {"n", fs.front().context().n()},
                   {"s", fs.front().context().s()}, {"L", fs.front().context().L()}, {"tolerance", a.tolerance}};
    json rows = json::array();
    double worst_l = 0.0, worst_t = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto pair = dual_density(fs[i]);
        const auto l = legendre_identity_check(pair);
        const auto t = deficit_transfer_check(pair);
        worst_l = std::max(worst_l, l.residual);
        worst_t = std::max(worst_t, t.residual);
        rows.push_back({{"draw", i}, {"legendre_residual", l.residual}, {"transfer_residual", t.residual}});
    }
    r["rows"] = rows;
    r["worst_legendre_residual"] = worst_l;
    r["worst_transfer_residual"] = worst_t;
    res.code = (worst_l <= a.tolerance && worst_t <= a.tolerance) ? 0 : 1;
    return res;
}

void emit(const Output& o, const json& report, std::ostream& out) {
    emit_report(report, o.format, out);
    if (!o.json_path.empty()) save_json(report, o.json_path);
    if (!o.csv_path.empty()) {
        std::ofstream csv(o.csv_path);
        if (!csv) throw std::runtime_error("cannot write " + o.csv_path);
        csv << to_csv(report.value("rows", json::array()));
    }
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for sharp Sobolev and HLS stability on the sphere", "sslab"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Output output;
    std::function<Result()> action;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", output.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", output.json_path, "also write the JSON report here");
        sub->add_option("--csv", output.csv_path, "also write the table as CSV here");
    };

    ConstantsArgs ca;
    auto* c = app.add_subcommand("constants", "exponents, sharp constant and Funk-Hecke spectrum");
    c->add_option("--n", ca.n)->required();
    c->add_option("--s", ca.s)->required();
    c->add_option("--lmax", ca.lmax);
    add_output(c);
    c->callback([&] { action = [&] { return run_constants(ca); }; });

    CertifyArgs cr;
    auto* cs = app.add_subcommand("certify-scalar", "grid certification of the pointwise inequalities");
    cs->add_option("--p0", cr.p0);
    cs->add_option("--gamma", cr.gamma);
    cs->add_option("--M", cr.M);
    cs->add_option("--eps", cr.eps);
    cs->add_option("--N", cr.N, "split level; 0 selects it");
    cs->add_option("--r-points", cr.r_points);
    cs->add_option("--p-points", cr.p_points);
    cs->add_option("--r-max", cr.r_max);
    cs->add_option("--tolerance", cr.tolerance);
    add_output(cs);
    cs->callback([&] { action = [&] { return run_certify(cr); }; });

    InputArgs da;
    auto* d = app.add_subcommand("deficit", "HLS or Sobolev deficit of a profile");
    d->add_option("--input", da.input)->required();
    d->add_option("--side", da.side)->check(CLI::IsMember({"hls", "sobolev"}));
    d->add_option("--L", da.L, "band limit for radial inputs");
    add_output(d);
    d->callback([&] { action = [&] { return run_deficit(da); }; });

    InputArgs pa;
    auto* pj = app.add_subcommand("project", "nearest extremizer in the dual Sobolev metric");
    pj->add_option("--input", pa.input)->required();
    pj->add_option("--L", pa.L, "band limit for radial inputs");
    add_output(pj);
    pj->callback([&] { action = [&] { return run_project(pa); }; });

    LocalArgs la;
    auto* lc = app.add_subcommand("local-check", "certificate terms on random admissible perturbations");
    lc->add_option("--s", la.s);
    lc->add_option("--n", la.n, "dimension; 0 uses the certified threshold");
    lc->add_option("--samples", la.samples);
    lc->add_option("--seed", la.seed);
    lc->add_option("--degree", la.degree);
    lc->add_option("--L", la.L);
    lc->add_option("--eps1", la.eps1);
    lc->add_option("--eps2", la.eps2);
    add_output(lc);
    lc->callback([&] { action = [&] { return run_local(la); }; });

    FlowArgs fa;
    auto* fl = app.add_subcommand("flow", "competing symmetries iteration with diagnostics");
    fl->add_option("--start", fa.start)->check(CLI::IsMember({"bump", "two-bubbles", "plateau"}));
    fl->add_option("--input", fa.input, "radial profile JSON instead of a named start");
    fl->add_option("--n", fa.n);
    fl->add_option("--s", fa.s);
    fl->add_option("--k", fa.k);
    fl->add_option("--L", fa.L);
    add_output(fl);
    fl->callback([&] { action = [&] { return run_flow(fa); }; });

    SweepArgs sa;
    auto* qs = app.add_subcommand("quotient-sweep", "stability quotient across dimensions");
    qs->add_option("--family", sa.family)->check(CLI::IsMember({"degree2", "sobolev-degree2", "two-bubbles"}));
    qs->add_option("--ns", sa.ns)->delimiter(',');
    qs->add_option("--s", sa.s);
    qs->add_option("--eps", sa.eps);
    qs->add_option("--L", sa.L);
    add_output(qs);
    qs->callback([&] { action = [&] { return run_sweep(sa); }; });

    DualityArgs ua;
    auto* du = app.add_subcommand("duality-check", "Legendre and deficit-transfer identities");
    du->add_option("--input", ua.input);
    du->add_option("--count", ua.count);
    du->add_option("--seed", ua.seed);
    du->add_option("--n", ua.n);
    du->add_option("--s", ua.s);
    du->add_option("--L", ua.L);
    du->add_option("--degree", ua.degree);
    du->add_option("--tolerance", ua.tolerance);
    add_output(du);
    du->callback([&] { action = [&] { return run_duality(ua); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        const Result res = action();
        emit(output, res.report, out);
        return res.code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sslab
