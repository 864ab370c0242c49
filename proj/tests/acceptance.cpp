// End-to-end acceptance run: one line per criterion, exit code 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sslab/constants.hpp"
#include "sslab/duality.hpp"
#include "sslab/extremizers.hpp"
#include "sslab/flows.hpp"
#include "sslab/local_stability.hpp"
#include "sslab/scalar_inequalities.hpp"
#include "sslab/sphere.hpp"

using namespace sslab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome funk_hecke_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (auto [n, s] : {std::pair{3, 0.5}, {4, 1.0}, {6, 1.5}, {6, 2.5}}) {
        const auto ctx = make_context(n, s, 8);
        for (int l = 0; l <= 8; ++l) {
            const auto G = ZonalFunction::harmonic(ctx, l);
            const auto spectral = apply_P2s(G);
            const auto kernel = kernel_P2s_oracle(G);
            double err = 0.0, scale = 0.0;
            for (int i = 0; i < ctx->Q(); ++i) {
                err = std::max(err, std::abs(kernel.nodal()[i] - spectral.nodal()[i]));
                scale = std::max(scale, std::abs(spectral.nodal()[i]));
            }
            worst = std::max(worst, err / scale);
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-8 && secs <= 60.0, fmt("worst relative gap %.2e, %.1f s", worst, secs)};
}

Outcome extremizer_equality() {
    const auto ctx = make_context(4, 1.0, 96);
    double worst_def = 0.0, worst_el = 0.0;
    for (double c : linspace(0.25, 4.0, 9)) {
        for (double tau : linspace(-0.6, 0.6, 9)) {
            const auto d = hls_deficit(extremizer_profile({c, tau}, ctx));
            worst_def = std::max(worst_def, std::abs(d.deficit) / d.lp_norm_sq);
            worst_el = std::max(worst_el, euler_lagrange_residual({c, tau}, ctx));
        }
    }
    return {worst_def <= 1e-9 && worst_el <= 1e-7,
            fmt("max deficit/|g|^2 %.2e, max EL residual %.2e", worst_def, worst_el)};
}

Outcome linearized_hls() {
    const auto ctx = make_context(4, 1.0, 16);
    const double coeff = linearized_deficit_coefficient(ctx, Side::HLS, 2, 1e-3);
    const double expect = (ctx->params().p() - 1.0) - funk_hecke_eigenvalue(ctx->params(), 2);
    const double rel = std::abs(coeff / expect - 1.0);
    return {std::abs(expect - 1.0 / 6.0) < 1e-12 && rel <= 0.01,
            fmt("coefficient %.8f vs 1/6, relative gap %.2e", coeff, rel)};
}

Outcome linearized_sobolev() {
    std::string detail;
    bool ok = true;
    for (std::int64_t n : {10, 20, 40}) {
        const double s = 1.0;
        const double q = sobolev_linearized_quotient(make_context(n, s, 16), 2, 1e-3);
        const double expect = 4.0 * s / (n + 2.0 * s + 2.0);
        const double rel = std::abs(q / expect - 1.0);
        ok = ok && rel <= 0.01;
        detail += fmt("n=%lld n*q=%.5f (rel %.1e) ", static_cast<long long>(n), n * q, rel);
    }
    return {ok, detail};
}

Outcome scalar_certification() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sp = default_split_params();
    const auto k = build_constants(sp);
    const CertificationGrid cubic{-1.0, 1e3, 100000, linspace(1.0, 2.0, 21), {}};
    const auto split_grid = corner_grid(sp, 1e3, 100000, linspace(sp.p0, 2.0, 21));
    const auto c1 = certify_cubic_bound(cubic, 1e-10);
    const auto c2 = certify_split_bound(sp, k, split_grid, 1e-10);
    const auto c3 = certify_qestimate(sp, k, split_grid, 1e-10);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c1.certified() && c2.certified() && c3.certified() && secs <= 120.0;
    return {ok, fmt("violations %lld/%lld/%lld over %lld+%lld+%lld points, N=%lld, %.1f s",
                    static_cast<long long>(c1.count), static_cast<long long>(c2.count),
                    static_cast<long long>(c3.count), static_cast<long long>(c1.points),
                    static_cast<long long>(c2.points), static_cast<long long>(c3.points),
                    static_cast<long long>(sp.N), secs)};
}

Outcome split_form_nonnegative() {
    std::mt19937_64 rng(11);
    double worst = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (auto [n, s] : {std::pair<std::int64_t, double>{30, 1.0}, {20, 1.2}}) {
        const auto cp = make_certificate_params(ProblemParams(n, s));
        const auto ctx = make_context(n, s, 16);
        for (int i = 0; i < 500; ++i) {
            const auto r = random_admissible(ctx, rng, 8, 0.0, cp.gamma, cp.M);
            const double e = split_form_excess(r, cp.gamma, cp.M);
            worst = std::min(worst, e);
            bad += e >= -1e-9 ? 0 : 1;
        }
    }
    return {bad == 0, fmt("violations %d of 1000, smallest excess %.2e", bad, worst)};
}

Outcome certificate_nonnegativity() {
    const double s = 1.0;
    const auto probe = make_certificate_params(ProblemParams(1000, s));
    const auto sel = select_K_n0(s, probe.C_qest, probe.sigma0);
    const std::int64_t n = sel.n0;
    const auto cp = make_certificate_params(ProblemParams(n, s));
    const auto ctx = make_context(n, s, 16);
    const bool scaled = !(cp.delta0 > 1e-300);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    double min_i = std::numeric_limits<double>::infinity(), min_slack = min_i;
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const double u = unit(rng);
        DeficitBreakdown d;
        if (scaled) {
            const auto shape = random_admissible(ctx, rng, 6, 1e-4, cp.gamma, cp.M);
            d = deficit_breakdown_scaled(shape, cp, cp.log10_delta0 + std::log10(u));
        } else {
            d = deficit_breakdown(random_admissible(ctx, rng, 6, u * cp.delta0, cp.gamma, cp.M), cp);
        }
        min_i = std::min({min_i, d.I1, d.I2, d.I3});
        min_slack = std::min(min_slack, d.slack());
        const bool ok = d.I1 >= -1e-10 && d.I2 >= -1e-10 && d.I3 >= -1e-10 && d.slack() >= -1e-9;
        bad += ok ? 0 : 1;
    }
    return {bad == 0 && sel.verified,
            fmt("n0=%lld K0=%lld log10 delta0=%.4g%s, violations %d/200, min I %.2e, min slack %.2e",
                static_cast<long long>(n), static_cast<long long>(sel.K0), cp.log10_delta0,
                scaled ? " (scaled)" : "", bad, min_i, min_slack)};
}

Outcome one_over_n_scaling() {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::int64_t n : {20, 30, 40, 60}) {
        const auto ctx = make_context(n, 1.0, 16);
        const double v = local_stability_ratio(ZonalFunction::harmonic(ctx, 2, 1e-3)) * static_cast<double>(n);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo > 0.0 && hi / lo <= 3.0, fmt("n*ratio in [%.4f, %.4f], max/min %.3f", lo, hi, hi / lo)};
}

Outcome flow_diagnostics() {
    const std::int64_t n = 3;
    const double s = 0.5;
    const ProblemParams pp(n, s);
    bool ok = true;
    std::string detail;
    for (auto kind : {StartProfile::Bump, StartProfile::TwoBubbles, StartProfile::Plateau}) {
        const auto f = make_start_profile(kind, n, pp.p());
        const auto trace = competing_iteration(f, s, 40, FlowOptions{});
        double drift = 0.0;
        for (const auto& rec : trace.records) drift = std::max(drift, std::abs(rec.norm / trace.start_norm - 1.0));
        const auto mono = monotonicity_check(trace, 1e-9);
        const auto decay = residual_decay_check(trace, 0.05);
        const double dist = trace.records.back().dist_h / trace.start_norm;
        const bool good = drift <= 1e-6 && mono.nondecreasing && dist <= 0.01 && decay.below_target;
        ok = ok && good;
        detail += fmt("%s: drift %.1e, %s, dist_h %.1e, r %.1e; ", to_string(kind).c_str(), drift,
                      mono.nondecreasing ? "monotone" : "NOT monotone", dist, decay.final_fraction);
    }
    return {ok, detail};
}

Outcome duality_identities() {
    const auto coarse = make_context(4, 1.0, 16);
    const auto fine = make_context(4, 1.0, 32);
    std::mt19937_64 rng(1);
    double worst = 0.0;
    int not_halving = 0;
    for (int i = 0; i < 100; ++i) {
        const auto Fc = random_band_limited(coarse, rng, 8);
        std::vector<double> cf(fine->L() + 1, 0.0);
        std::copy(Fc.coefficients().begin(), Fc.coefficients().end(), cf.begin());
        const auto Ff = ZonalFunction::from_coefficients(fine, cf);
        const auto pc = dual_density(Fc), pf = dual_density(Ff);
        const double lc = legendre_identity_check(pc).residual, tc = deficit_transfer_check(pc).residual;
        const double lf = legendre_identity_check(pf).residual, tf = deficit_transfer_check(pf).residual;
        worst = std::max({worst, lc, tc, lf, tf});
        if (!refinement_halving(lc, lf).halves || !refinement_halving(tc, tf).halves) ++not_halving;
    }
    return {worst <= 1e-9 && not_halving == 0,
            fmt("worst residual %.2e, non-halving draws %d/100", worst, not_halving)};
}

Outcome comparability() {
    int tie_fail = 0, probe_fail = 0, ties_seen = 0, reverse_fail = 0;
    double worst_reverse = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(7);
    for (auto [n, s] : {std::pair<std::int64_t, double>{4, 1.0}, {3, 0.5}}) {
        const auto ctx = make_context(n, s, 48);
        // well-separated mirror bumps; closer ones merge into one symmetric minimizer
        for (double tau : {0.9, 0.95, 0.97}) {
            const auto rep = comparability_check((unit_profile(ctx, tau) + unit_profile(ctx, -tau)) * 0.5);
            ++ties_seen;
            if (rep.unique || !rep.within_bound) ++tie_fail;
        }
    }
    const auto ctx = make_context(4, 1.0, 32);
    std::uniform_real_distribution<double> tau_d(-0.95, 0.95), w(0.2, 1.0);
    std::normal_distribution<double> z;
    for (int i = 0; i < 1000; ++i) {
        // two-bump mixtures and perturbed extremizers both produce near-ties
        ZonalFunction g = unit_profile(ctx, tau_d(rng)) * w(rng) + unit_profile(ctx, tau_d(rng)) * w(rng);
        if (i % 2 == 1) {
            std::vector<double> c(ctx->L() + 1, 0.0);
            for (int l = 2; l <= 6; ++l) c[l] = 0.05 * z(rng) / l;
            g = g + ZonalFunction::from_coefficients(ctx, c);
        }
        const auto rep = comparability_check(g);
        if (!rep.unique) ++ties_seen;
        if (!rep.within_bound) ++probe_fail;
    }
    const auto rctx = make_context(4, 1.0, 64);
    std::uniform_real_distribution<double> c_d(0.1, 3.0), t_d(-0.8, 0.8);
    for (int i = 0; i < 1000; ++i) {
        const double v = reverse_bound_check({c_d(rng), t_d(rng)}, {c_d(rng), t_d(rng)}, rctx);
        worst_reverse = std::min(worst_reverse, v);
        if (v < -1e-9) ++reverse_fail;
    }
    return {tie_fail == 0 && probe_fail == 0 && reverse_fail == 0,
            fmt("tie failures %d, probe failures %d/1000, ties seen %d, reverse violations %d/1000 (min %.2e)",
                tie_fail, probe_fail, ties_seen, reverse_fail, worst_reverse)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"funk-hecke multipliers match the kernel integral", funk_hecke_consistency},
        {"extremizers have zero deficit and solve the EL equation", extremizer_equality},
        {"linearized HLS deficit coefficient", linearized_hls},
        {"linearized Sobolev quotient for degree 2", linearized_sobolev},
        {"scalar inequality certification", scalar_certification},
        {"split form excess is nonnegative", split_form_nonnegative},
        {"certificate terms are nonnegative at n0", certificate_nonnegativity},
        {"degree-2 stability ratio scales like 1/n", one_over_n_scaling},
        {"competing symmetries flow diagnostics", flow_diagnostics},
        {"duality identities and refinement", duality_identities},
        {"comparability of tied minimizers and reverse bound", comparability},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
