#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sslab/quadrature.hpp"

using namespace sslab;
using doctest::Approx;

namespace {

double sum_rule(const QuadratureRule& r, auto&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * f(r.nodes[i]);
    return acc;
}

// int_{-1}^{1} x^{2m} (1-x^2)^a dx = B(m + 1/2, a + 1)
double even_moment(int m, double a) {
    return std::exp(std::lgamma(m + 0.5) + std::lgamma(a + 1.0) - std::lgamma(m + a + 1.5));
}

}  // namespace

TEST_CASE("Gauss-Jacobi rules integrate polynomials exactly") {
    for (double a : {0.0, 0.5, 1.0, 7.5, 28.0}) {
        const int count = 12;
        const auto r = gauss_jacobi(count, a, a);
        REQUIRE(r.nodes.size() == count);
        CHECK(std::is_sorted(r.nodes.begin(), r.nodes.end()));
        for (int m = 0; 2 * m <= 2 * count - 1; ++m) {
            const double got = sum_rule(r, [&](double x) { return std::pow(x, 2 * m); });
            CHECK(got == Approx(even_moment(m, a)).epsilon(1e-12));
            const double odd = sum_rule(r, [&](double x) { return std::pow(x, 2 * m + 1); });
            CHECK(std::abs(odd) < 1e-13);
        }
    }
}

TEST_CASE("asymmetric Jacobi weight") {
    // int (1-x)^2 (1+x)^0.5 p(x) dx for p = 1, x checked against Beta integrals
    const double a = 2.0, b = 0.5;
    const auto r = gauss_jacobi(10, a, b);
    const double mass = std::exp(jacobi_log_mass(a, b));
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == Approx(mass).epsilon(1e-13));
    // mean of x under the weight is (b - a)/(a + b + 2)
    CHECK(sum_rule(r, [](double x) { return x; }) / mass == Approx((b - a) / (a + b + 2.0)).epsilon(1e-12));
}

TEST_CASE("log mass and normalization") {
    CHECK(jacobi_log_mass(0.0, 0.0) == Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::exp(jacobi_log_mass(0.5, 0.5)) == Approx(std::numbers::pi / 2.0).epsilon(1e-14));
    // very large exponents stay finite in log form
    CHECK(std::isfinite(jacobi_log_mass(5e5, 5e5)));
    const auto r = gauss_jacobi(40, 499.0, 499.0, true);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == Approx(1.0).epsilon(1e-13));
    for (double w : r.weights) CHECK(w >= 0.0);
}

TEST_CASE("Legendre rule and affine map") {
    const auto g = gauss_legendre(8);
    CHECK(sum_rule(g, [](double x) { return std::pow(x, 14); }) == Approx(2.0 / 15.0).epsilon(1e-14));
    const auto m = mapped(g, 1.0, 3.0);
    CHECK(m.nodes.front() > 1.0);
    CHECK(m.nodes.back() < 3.0);
    CHECK(sum_rule(m, [](double x) { return x * x; }) == Approx(26.0 / 3.0).epsilon(1e-14));
    CHECK(sum_rule(m, [](double x) { return std::exp(x); }) == Approx(std::exp(3.0) - std::exp(1.0)).epsilon(1e-12));
}
