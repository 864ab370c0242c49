#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "sslab/constants.hpp"
#include "sslab/scalar_inequalities.hpp"

using namespace sslab;
using doctest::Approx;

TEST_CASE("scalar split partitions r") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 50.0);
    for (int i = 0; i < 2000; ++i) {
        const double r = u(rng);
        const auto s = split_scalar(r, 1.0 / 32.0, 1.0);
        CHECK(s.r1 + s.r2 + s.r3 == Approx(r).epsilon(1e-14).scale(1.0));
        CHECK(s.r1 <= 1.0 / 32.0);
        CHECK(s.r2 >= 0.0);
        CHECK(s.r2 <= 1.0 - 1.0 / 32.0);
        CHECK(s.r3 >= 0.0);
        // at most one of r2, r3 is active below M, and r3 starts only once r2 is full
        if (s.r3 > 0.0) CHECK(s.r2 == Approx(1.0 - 1.0 / 32.0));
        if (s.r2 > 0.0) CHECK(s.r1 == 1.0 / 32.0);
    }
    CHECK_THROWS_AS(split_scalar(-1.5, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(split_scalar(0.0, 2.0, 1.0), DomainError);
}

TEST_CASE("cubic bound residual") {
    // direct evaluation at sample points
    for (double p : {1.0, 1.3, 1.75, 2.0}) {
        for (double r : {-1.0, -0.5, 0.0, 0.3, 2.0, 40.0}) {
            const double rp = std::max(r, 0.0);
            const double expect =
                std::pow(1.0 + r, p) - 1.0 - p * r - 0.5 * p * (p - 1.0) * r * r + (2.0 - p) * rp * rp * rp;
            CHECK(cubic_bound_residual(p, r) == Approx(expect).epsilon(1e-12).scale(1.0 + std::abs(expect)));
            CHECK(cubic_bound_residual(p, r) >= -1e-12);
        }
    }
    // p = 2 is exact
    CHECK(std::abs(cubic_bound_residual(2.0, 3.7)) < 1e-12);
    CHECK_THROWS_AS(cubic_bound_residual(2.5, 0.0), DomainError);
    CHECK_THROWS_AS(cubic_bound_residual(1.5, -2.0), DomainError);
}

TEST_CASE("structural floor and tail turning points") {
    CHECK(structural_floor_N(1.75) == 2);  // 1.75 / 1.5 = 1.17
    CHECK(structural_floor_N(1.25) == 3);  // 1.25 / 0.5 = 2.5
    CHECK(structural_floor_N(1.2) == 4);   // N must exceed 3
    for (double p : {1.1, 1.5, 1.9}) {
        // stationary points of the two ratios, located by central differences
        auto tail = [p](double t) { return (p * std::pow(t, p - 1.0) - 2.0 * t) / std::pow(t, p); };
        auto curv = [p](double t) { return (0.5 * p * (p - 1.0) * std::pow(t, p - 2.0) - 1.0) / std::pow(t, p); };
        const std::pair<double, std::function<double(double)>> cases[] = {{tail_turning_point(p), tail},
                                                                          {curvature_turning_point(p), curv}};
        for (const auto& [t, f] : cases) {
            const double h = 1e-5 * t;
            const double slope = (f(t + h) - f(t - h)) / (2.0 * h);
            const double scale = std::abs(f(t)) / t;
            CHECK(std::abs(slope) < 1e-6 * scale);
        }
    }
}

TEST_CASE("constants and N selection") {
    const auto sp = default_split_params();
    CHECK(sp.gamma == Approx(1.0 / 32.0));
    CHECK(sp.M == 1.0);
    CHECK(sp.p0 == 1.75);
    const auto k = build_constants(sp);
    const double N = static_cast<double>(sp.N);
    CHECK(k.C1_MN == Approx((2.0 + N) * (2.0 + N) * std::log(2.0 + N)).epsilon(1e-13));
    CHECK(k.C1_N == Approx(N * N * std::log(N)).epsilon(1e-13));
    CHECK(k.C_MN == Approx(std::max({k.C1_MN + k.C1_N, k.C2_MN, 8.5})).epsilon(1e-13));
    CHECK(k.C_qest == Approx(5.0 * k.C_MN + 8.0 / sp.gamma).epsilon(1e-13));

    // N is the smallest integer meeting the tail condition
    auto rate = [&](double n) { return k.C_M * std::pow(n, 1.0 - sp.p0) * std::log(n); };
    CHECK(rate(N) <= sp.eps);
    CHECK(rate(N - 1.0) > sp.eps);
    // C_M dominates the tail constant at the chosen N, at every grid exponent
    for (double p : linspace(sp.p0, 2.0, 9))
        CHECK(tail_constant(p, sp.p0, sp.M, N) <= k.C_M * std::pow(N, 1.0 - sp.p0) * std::log(N) * (1.0 + 1e-12));

    SplitParams bad = sp;
    bad.N = 1;
    CHECK_THROWS_AS(build_constants(bad), DomainError);
    bad = sp;
    bad.M = 0.01;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(select_N(1.75, 1.0, 0.0), DomainError);
}

TEST_CASE("certification grid layout") {
    CertificationGrid g;
    g.r_points = 1000;
    g.r_max = 1e3;
    g.extra_r = {0.5, -2.0};
    const auto rs = g.r_values();
    CHECK(rs.front() == -1.0);
    CHECK(rs.back() == Approx(1e3));
    CHECK(std::is_sorted(rs.begin(), rs.end()));
    CHECK(std::adjacent_find(rs.begin(), rs.end()) == rs.end());
    CHECK(linspace(0.0, 1.0, 5)[3] == 0.75);
    CHECK(linspace(2.0, 3.0, 1).size() == 1);
    CHECK(g.describe().find("1000 points") != std::string::npos);
}

TEST_CASE("inequalities certify on small grids and fail with broken constants") {
    const auto sp = default_split_params();
    const auto k = build_constants(sp);
    const auto grid = corner_grid(sp, 1e3, 4000, linspace(1.0, 2.0, 11));
    const auto c1 = certify_cubic_bound(grid);
    CHECK(c1.certified());
    CHECK(c1.points == static_cast<std::int64_t>(grid.r_values().size() * 11));
    const auto c3 = certify_qestimate(sp, k, grid);
    CHECK(c3.certified());

    const auto pgrid = corner_grid(sp, 1e3, 4000, linspace(sp.p0, 2.0, 11));
    CHECK(certify_split_bound(sp, k, pgrid).certified());

    ScalarConstants broken = k;
    broken.C_qest = 0.0;
    const auto bad = certify_qestimate(sp, broken, grid);
    CHECK(bad.count > 0);
    CHECK(bad.worst_residual < -1e-10);
    CHECK(bad.worst_r > sp.gamma);
}
