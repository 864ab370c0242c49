#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sslab/flows.hpp"

using namespace sslab;
using doctest::Approx;

namespace {

RadialGrid small_grid() {
    RadialGrid g;
    g.count = 256;
    return g;
}

double h_value(double rho, int n, double p) { return std::pow(2.0 / (1.0 + rho * rho), n / p); }

}  // namespace

TEST_CASE("radial grid and interpolation") {
    const RadialGrid g = small_grid();
    const auto r = g.radii();
    CHECK(r.size() == 256);
    CHECK(r.front() == Approx(1e-4));
    CHECK(r.back() == Approx(1e4));
    CHECK(std::log(r[1] / r[0]) == Approx(g.log_step()));
    const std::vector<double> xs{0.0, 1.0, 2.0, 3.0}, ys{1.0, 2.0, 5.0, 10.0};  // 1 + x^2
    CHECK(lagrange(xs, ys, 1.5) == Approx(3.25).epsilon(1e-14));
}

TEST_CASE("radial profiles") {
    const int n = 3;
    const double p = 1.5;
    const auto h = RadialProfile::from_function(n, p, [&](double r) { return h_value(r, n, p); });
    CHECK(h.nonincreasing());
    CHECK(h.tail_exponent() == Approx(4.0));
    // off-node values, constant below the grid and the conformal tail above it
    for (double rho : {3.3e-3, 0.77, 1.0, 41.0}) CHECK(h(rho) == Approx(h_value(rho, n, p)).epsilon(1e-9));
    CHECK(h(1e-6) == Approx(h.values().front()));
    CHECK(h(1e6) == Approx(h_value(1e6, n, p)).epsilon(1e-6));
    // int_{R^n} h^p = |S^n|
    CHECK(h.lp_norm_pow() == Approx(sphere_area(n)).epsilon(1e-8));
    CHECK(h.scaled(2.0).lp_norm() == Approx(2.0 * h.lp_norm()).epsilon(1e-12));
    // the lifted standard profile is constant, including both poles
    for (double a : {-1.0, -0.5, 0.0, 0.9, 1.0}) CHECK(h.lifted(a) == Approx(1.0).epsilon(1e-8));

    const auto b = standard_bubble(n, p, 2.5);
    CHECK(b.lp_norm() == Approx(2.5).epsilon(1e-8));
    const auto g = RadialProfile::from_function(n, p, [](double r) { return std::exp(-r * r); });
    // Gaussian: int e^{-p r^2} over R^3 = (pi/p)^{3/2}
    CHECK(g.lp_norm_pow() == Approx(std::pow(std::numbers::pi / p, 1.5)).epsilon(1e-6));
    CHECK_FALSE(RadialProfile::from_function(n, p, [](double r) { return r < 1 ? r : 1.0 / (r * r * r * r); })
                    .nonincreasing());
}

TEST_CASE("inversion image") {
    for (double rho : {0.1, 0.9, 2.0}) {
        for (double mu : {-0.7, 0.0, 0.4}) {
            const auto img = inversion_image(rho, mu);
            const double D = rho * rho - 2.0 * rho * mu + 1.0;
            const double x1 = rho * std::sqrt(1.0 - mu * mu), xn = rho * mu;
            const double y1 = 2.0 * x1 / D, yn = (rho * rho - 1.0) / D;
            CHECK(img.rho == Approx(std::hypot(y1, yn)).epsilon(1e-14));
            CHECK(img.mu == Approx(yn / std::hypot(y1, yn)).epsilon(1e-14));
            CHECK(img.factor == Approx(2.0 / ((xn - 1.0) * (xn - 1.0) + x1 * x1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("U fixes the standard bubble and preserves norms") {
    const int n = 3;
    const double p = 1.5;
    const auto h = RadialProfile::from_function(n, p, [&](double r) { return h_value(r, n, p); }, small_grid());
    const auto Uh = apply_U(AxiSymFunction::from_radial(h, 16));
    CHECK(Uh.origin() == AxiSymFunction::Origin::ConformalImageOfRadial);
    for (int i = 0; i < 256; i += 31)
        for (int j = 0; j < 16; j += 5) CHECK(Uh.value(i, j) == Approx(h.values()[i]).epsilon(1e-8));

    const auto bump = make_start_profile(StartProfile::Bump, n, p, small_grid());
    const auto Ub = apply_U(AxiSymFunction::from_radial(bump, 64));
    CHECK(Ub.angular_variation() > 0.1);
    CHECK(Ub.lp_norm() == Approx(bump.lp_norm()).epsilon(1e-5));

    // generic path samples bilinearly; accuracy needs the default grid
    const auto generic = AxiSymFunction::from_function(
        n, p, [&](double r, double mu) { return h_value(r, n, p) * (1.0 + 0.2 * mu); }, RadialGrid{}, 32);
    const auto Ug = apply_U(generic);
    CHECK(Ug.origin() == AxiSymFunction::Origin::Generic);
    CHECK(Ug.lp_norm() == Approx(generic.lp_norm()).epsilon(1e-3));
    CHECK(Ug.out_of_grid >= 0);
}

TEST_CASE("exact distribution function of the standard bubble") {
    const int n = 3;
    const double p = 1.5;
    const auto h = RadialProfile::from_function(n, p, [&](double r) { return h_value(r, n, p); });
    const ConformalDistribution dist(h);
    CHECK(dist.t_max() == Approx(std::pow(2.0, n / p)).epsilon(1e-9));
    // |{h > t}| = omega_n (2 t^{-p/n} - 1)^{n/2}
    for (double frac : {0.9, 0.5, 0.1, 1e-3}) {
        const double t = frac * dist.t_max();
        const double expect = ball_volume(n) * std::pow(2.0 * std::pow(t, -p / n) - 1.0, 0.5 * n);
        CHECK(dist.measure_above(t) == Approx(expect).epsilon(1e-9));
    }
    CHECK(dist.measure_above(1.01 * dist.t_max()) == 0.0);
}

TEST_CASE("rearrangement") {
    const int n = 3;
    const double p = 1.5;
    RearrangeOptions opt;
    opt.levels = 256;

    SUBCASE("radial nonincreasing input is returned unchanged") {
        const auto h = RadialProfile::from_function(n, p, [&](double r) { return h_value(r, n, p); }, small_grid());
        const auto out = rearrange(AxiSymFunction::from_radial(h, 8), opt);
        for (std::size_t i = 0; i < h.values().size(); ++i) CHECK(out.profile()->values()[i] == h.values()[i]);
    }
    SUBCASE("conformal image of the bubble rearranges back to it") {
        const auto h = RadialProfile::from_function(n, p, [&](double r) { return h_value(r, n, p); }, small_grid());
        const auto out = rearrange(apply_U(AxiSymFunction::from_radial(h, 16)), opt);
        for (std::size_t i = 0; i < h.values().size(); i += 17)
            CHECK(out.profile()->values()[i] == Approx(h.values()[i]).epsilon(1e-7));
    }
    SUBCASE("a translated bubble rearranges to the centered one") {
        const double shift = 0.5;
        const auto f = AxiSymFunction::from_function(
            n, p,
            [&](double r, double mu) { return h_value(std::sqrt(r * r - 2.0 * shift * r * mu + shift * shift), n, p); },
            small_grid(), 64);
        const auto out = rearrange(f, opt);
        REQUIRE(out.origin() == AxiSymFunction::Origin::Radial);
        const auto& g = *out.profile();
        CHECK(g.nonincreasing());
        CHECK(g.lp_norm() == Approx(f.lp_norm()).epsilon(1e-3));
        for (double rho : {0.1, 0.5, 1.0, 2.0, 10.0}) CHECK(g(rho) == Approx(h_value(rho, n, p)).epsilon(2e-2));
    }
    SUBCASE("rearranging a radial profile with a bump sorts it") {
        const auto f = RadialProfile::from_function(
            n, p, [&](double r) { return h_value(r, n, p) * (1.0 + 2.0 * std::exp(-(r - 2.0) * (r - 2.0))); },
            small_grid());
        REQUIRE_FALSE(f.nonincreasing());
        const auto out = rearrange(AxiSymFunction::from_radial(f, 8), opt);
        CHECK(out.profile()->nonincreasing());
        CHECK(out.profile()->lp_norm() == Approx(f.lp_norm()).epsilon(1e-4));
    }
}

TEST_CASE("competing iteration on a short run") {
    const int n = 3;
    const double s = 0.5, p = 1.5;
    FlowOptions opt;
    opt.L = 24;
    opt.rearrange.levels = 256;
    const auto f = make_start_profile(StartProfile::Plateau, n, p, small_grid());
    const auto trace = competing_iteration(f, s, 3, opt);
    REQUIRE(trace.records.size() == 4);
    REQUIRE(trace.last.has_value());
    CHECK(trace.start_norm == Approx(f.lp_norm()));
    for (const auto& rec : trace.records) CHECK(std::abs(rec.norm / trace.start_norm - 1.0) < 1e-6);
    CHECK(monotonicity_check(trace).nondecreasing);
    CHECK(trace.records.back().dist_h < trace.records.front().dist_h);
    CHECK(residual_decay_check(trace).triangle_ok);

    CHECK_THROWS_AS(competing_iteration(f, 1.0, 1, opt), DomainError);
    CHECK_THROWS_AS(competing_iteration(f, s, -1, opt), DomainError);
}

TEST_CASE("trace diagnostics on synthetic records") {
    FlowTrace t;
    t.start_norm = 1.0;
    const double forms[] = {1.0, 1.2, 1.3, 1.25, 1.4};
    const double rs[] = {0.5, 0.2, 0.04, 0.03, 0.01};
    for (int k = 0; k < 5; ++k) t.records.push_back({k, 1.0, forms[k], 1.0, rs[k], rs[k], 0.0, 0});
    const auto mono = monotonicity_check(t);
    CHECK_FALSE(mono.nondecreasing);
    CHECK(mono.worst_index == 3);
    CHECK(mono.worst_drop == Approx(0.05));
    CHECK(mono.total_increase == Approx(0.4));
    const auto dec = residual_decay_check(t, 0.05);
    CHECK(dec.below_target);
    CHECK(dec.first_below == 2);
    CHECK(dec.stays_below);
    CHECK(dec.triangle_ok);
    t.records[1].r_norm = 3.0;  // larger than dist_h + phi_h
    CHECK_FALSE(residual_decay_check(t).triangle_ok);
    FlowTrace empty;
    CHECK(monotonicity_check(empty).message == "trace too short");
}

TEST_CASE("start profiles") {
    for (auto kind : {StartProfile::Bump, StartProfile::TwoBubbles, StartProfile::Plateau})
        CHECK(start_profile_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(start_profile_from_string("nope"), DomainError);
    CHECK(bubble(0.7, 1.0, 3, 1.5) == Approx(h_value(0.7, 3, 1.5)));
    // dilations keep the norm: lambda^{-n/p} h(rho/lambda)
    const auto a = RadialProfile::from_function(3, 1.5, [](double r) { return bubble(r, 3.0, 3, 1.5); });
    CHECK(a.lp_norm_pow() == Approx(sphere_area(3)).epsilon(1e-7));
    const auto two = make_start_profile(StartProfile::TwoBubbles, 3, 1.5);
    CHECK(two.nonincreasing());
    CHECK(two(0.0) > two(1.0));
}
