#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gegenbauer.hpp>

#include "sslab/sphere.hpp"

using namespace sslab;
using doctest::Approx;

namespace {

// Orthonormal zonal basis from the Gegenbauer polynomials and their closed-form norms.
double gegenbauer_normalized(int n, int l, double t) {
    const double lam = 0.5 * (n - 1);
    const double log_norm_sq = std::log(std::numbers::pi) + (1.0 - 2.0 * lam) * std::log(2.0) +
                               std::lgamma(l + 2.0 * lam) - std::lgamma(l + 1.0) - std::log(l + lam) -
                               2.0 * std::lgamma(lam);
    const double log_mass = std::lgamma(0.5) + std::lgamma(lam + 0.5) - std::lgamma(lam + 1.0);
    return boost::math::gegenbauer(l, lam, t) * std::exp(-0.5 * (log_norm_sq - log_mass));
}

}  // namespace

TEST_CASE("zonal basis matches normalized Gegenbauer polynomials") {
    for (int n : {3, 4, 6, 11}) {
        const auto ctx = make_context(n, 0.5, 10);
        for (int l = 0; l <= 10; ++l) {
            for (double t : {-0.93, -0.4, 0.0, 0.27, 0.81, 1.0}) {
                const auto b = ctx->eval_basis(t);
                CHECK(b[l] == Approx(gegenbauer_normalized(n, l, t)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("basis is orthonormal under the node weights") {
    const auto ctx = make_context(5, 1.0, 24);
    for (int a = 0; a <= 24; a += 3) {
        for (int b = 0; b <= 24; b += 4) {
            const auto fa = ZonalFunction::harmonic(ctx, a);
            const auto fb = ZonalFunction::harmonic(ctx, b);
            CHECK(inner_nodal(fa, fb) == Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("analysis and synthesis are inverse on band-limited data") {
    const auto ctx = make_context(7, 1.5, 20);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    std::vector<double> c(21);
    for (double& v : c) v = z(rng);
    const auto f = ZonalFunction::from_coefficients(ctx, c);
    const auto g = ZonalFunction::from_nodal(ctx, std::vector<double>(f.nodal().begin(), f.nodal().end()));
    for (int l = 0; l <= 20; ++l) CHECK(g.coefficient(l) == Approx(c[l]).epsilon(1e-12).scale(1.0));
    CHECK(g.source() == ZonalFunction::Source::Nodal);
    CHECK(f.source() == ZonalFunction::Source::Spectral);
    // spectral evaluation agrees with the stored nodal values
    for (int i = 0; i < ctx->Q(); i += 17) CHECK(f(ctx->nodes()[i]) == Approx(f.nodal()[i]).epsilon(1e-12));
}

TEST_CASE("fractional integral acts diagonally and matches the kernel integral") {
    for (auto [n, s] : {std::pair{3, 0.5}, {4, 1.0}, {6, 1.5}, {6, 2.5}}) {
        const ProblemParams pp(n, s);
        CHECK(kernel_mean_value(pp) == Approx(1.0).epsilon(1e-12));
        const auto ctx = make_context(n, s, 8);
        for (int l : {1, 2, 5}) {
            const auto G = ZonalFunction::harmonic(ctx, l);
            const auto spectral = apply_P2s(G);
            const auto kernel = kernel_P2s_oracle(G);
            CHECK(spectral.coefficient(l) == Approx(funk_hecke_eigenvalue(pp, l)).epsilon(1e-14));
            double worst = 0.0;
            for (int i = 0; i < ctx->Q(); ++i)
                worst = std::max(worst, std::abs(kernel.nodal()[i] - spectral.nodal()[i]));
            double scale = 0.0;
            for (double v : spectral.nodal()) scale = std::max(scale, std::abs(v));
            CHECK(worst / scale < 1e-8);
        }
    }
}

TEST_CASE("E inverts P and the forms are dual") {
    const auto ctx = make_context(5, 1.0, 12);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z;
    std::vector<double> c(13);
    for (double& v : c) v = z(rng);
    const auto f = ZonalFunction::from_coefficients(ctx, c);
    const auto back = apply_Es(apply_P2s(f));
    for (int l = 0; l <= 12; ++l) CHECK(back.coefficient(l) == Approx(c[l]).epsilon(1e-12).scale(1.0));
    CHECK(quadratic_form_P(apply_Es(f), apply_Es(f)) == Approx(quadratic_form_E(f)).epsilon(1e-12));
    CHECK(quadratic_form_P(f) <= inner_nodal(f, f) + 1e-12);  // eigenvalues are at most 1
}

TEST_CASE("Lebesgue norms") {
    const auto ctx = make_context(4, 1.0, 16);
    const auto one = ZonalFunction::constant(ctx, 2.5);
    CHECK(lp_norm(one, 1.3) == Approx(2.5).epsilon(1e-14));
    // |t|^p under the density (1-t^2) on S^4: E|t|^2 = 1/5
    const auto t = ZonalFunction::harmonic(ctx, 1, 1.0 / ctx->eval_basis(1.0)[1]);
    CHECK(lp_norm_pow(t, 2.0) == Approx(0.2).epsilon(1e-13));
    const auto chk = lp_norm_checked(ZonalFunction::constant(ctx, 1.0) + t * 0.5, 4.0 / 3.0);
    CHECK(chk.self_check >= 0.0);
    CHECK(chk.self_check < 1e-8);
    CHECK(lp_norm_checked(t.map([](double v) { return std::abs(v); }), 1.5).self_check < 0.0);
    CHECK_THROWS_AS(lp_norm(one, 0.5), DomainError);
}

TEST_CASE("deficits vanish on constants and are nonnegative on perturbations") {
    const auto ctx = make_context(5, 1.0, 16);
    CHECK(std::abs(hls_deficit(ZonalFunction::constant(ctx, 3.0)).deficit) < 1e-13);
    CHECK(std::abs(sobolev_deficit(ZonalFunction::constant(ctx, 3.0)).deficit) < 1e-12);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(17, 0.0);
        c[0] = 1.0;
        for (int l = 1; l <= 6; ++l) c[l] = 0.2 * z(rng) / l;
        const auto f = ZonalFunction::from_coefficients(ctx, c);
        CHECK(hls_deficit(f).deficit >= -1e-13);
        CHECK(sobolev_deficit(f).deficit >= -1e-12);
    }
    CHECK(to_string(Side::HLS) == "hls");
    CHECK(to_string(Side::Sobolev) == "sobolev");
}

TEST_CASE("stereographic correspondence") {
    for (double rho : {1e-3, 0.5, 1.0, 3.0, 200.0}) CHECK(rho_of_t(t_of_rho(rho)) == Approx(rho).epsilon(1e-12));
    CHECK(t_of_rho(1.0) == Approx(0.0).scale(1.0));
    // the standard bubble lifts to a constant and keeps its Lebesgue norm
    for (auto [n, s] : {std::pair{3, 0.5}, {4, 1.0}, {7, 1.5}}) {
        const ProblemParams pp(n, s);
        const auto ctx = make_context(n, s, 12);
        const double p = pp.p();
        auto h = [&](double rho) { return std::pow(2.0 / (1.0 + rho * rho), n / p); };
        const auto H = stereographic_lift(ctx, h, p);
        CHECK(H.min_value() == Approx(1.0).epsilon(1e-13));
        CHECK(H.max_value() == Approx(1.0).epsilon(1e-13));
        // int_{R^n} h^p = |S^n|
        CHECK(euclidean_lp_pow_via_sphere(H, p) == Approx(sphere_area(n)).epsilon(1e-12));
        const auto back = stereographic_inverse(H, p);
        for (std::size_t i = 0; i < back.rho.size(); i += 11)
            CHECK(back.values[i] == Approx(h(back.rho[i])).epsilon(1e-12));
        CHECK(conformal_weight(n, p, 1.0) == Approx(1.0).epsilon(1e-15));
    }
}
