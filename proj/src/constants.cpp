#include "sslab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sslab {

ProblemParams::ProblemParams(std::int64_t n, double s) : n_(n), s_(s) {
    if (n < 3) throw DomainError("dimension n must be at least 3");
    if (!(s > 0.0) || !(s < 0.5 * static_cast<double>(n)) || !std::isfinite(s))
        throw DomainError("order s must satisfy 0 < s < n/2");
    const double nd = static_cast<double>(n);
    p_ = 2.0 * nd / (nd + 2.0 * s);
    q_ = 2.0 * nd / (nd - 2.0 * s);
    theta_ = 4.0 * s / (nd + 2.0 * s);
}

double log_sphere_area(std::int64_t n) {
    const double h = 0.5 * static_cast<double>(n + 1);
    return std::log(2.0) + h * std::log(std::numbers::pi) - std::lgamma(h);
}

double sphere_area(std::int64_t n) { return std::exp(log_sphere_area(n)); }

double ball_volume(std::int64_t n) {
    const double h = 0.5 * static_cast<double>(n);
    return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0));
}

double log_sharp_constant(const ProblemParams& pp) {
    const double n = static_cast<double>(pp.n()), s = pp.s();
    const double lg = std::lgamma(0.5 * (n + 2 * s)) - std::lgamma(0.5 * (n - 2 * s));
    return lg + (2.0 * s / n) * log_sphere_area(pp.n());
}

double sharp_constant(const ProblemParams& pp) { return std::exp(log_sharp_constant(pp)); }

double log_sharp_constant_gamma_form(const ProblemParams& pp) {
    const double n = static_cast<double>(pp.n()), s = pp.s();
    const double lg = std::lgamma(0.5 * (n + 2 * s)) - std::lgamma(0.5 * (n - 2 * s));
    const double ratio = std::lgamma(0.5 * n) - std::lgamma(n);
    return s * std::log(4.0 * std::numbers::pi) + lg + (2.0 * s / n) * ratio;
}

double sharp_constant_gamma_form(const ProblemParams& pp) { return std::exp(log_sharp_constant_gamma_form(pp)); }

double funk_hecke_eigenvalue(const ProblemParams& pp, int l) {
    if (l < 0) throw DomainError("degree must be nonnegative");
    const double a = 0.5 * static_cast<double>(pp.n()) - pp.s();
    const double b = 0.5 * static_cast<double>(pp.n()) + pp.s();
    double prod = 1.0;
    for (int j = 0; j < l; ++j) prod *= (a + j) / (b + j);
    return prod;
}

namespace {

using u128 = unsigned __int128;

// C(m, k) exactly, throwing when the result leaves 64 bits.
std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
    if (k > m) return 0;
    k = std::min(k, m - k);
    u128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (m - k + i);
        if (acc % i != 0) throw std::logic_error("binomial recurrence lost exactness");
        acc /= i;
        if (acc > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("harmonic multiplicity overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

}  // namespace

std::uint64_t multiplicity(int n, int l) {
    if (n < 2) throw DomainError("multiplicity needs n >= 2");
    if (l < 0) throw DomainError("degree must be nonnegative");
    if (l == 0) return 1;
    const auto nn = static_cast<std::uint64_t>(n);
    const auto ll = static_cast<std::uint64_t>(l);
    // (2l+n-1)/l C(l+n-2, n-1); the binomial is smaller than the result
    const u128 m = static_cast<u128>(binomial(ll + nn - 2, nn - 1)) * (2 * ll + nn - 1) / ll;
    if (m > std::numeric_limits<std::uint64_t>::max())
        throw std::overflow_error("harmonic multiplicity overflows 64 bits");
    return static_cast<std::uint64_t>(m);
}

double multiplicity_real(double n, int l) {
    if (l == 0) return 1.0;
    const double lg = std::lgamma(l + n - 1.0) - std::lgamma(l + 1.0) - std::lgamma(n);
    return (2.0 * l + n - 1.0) * std::exp(lg);
}

double comparability_bound(const ProblemParams& pp) {
    const double n = static_cast<double>(pp.n()), s = pp.s();
    return 1.0 + std::pow(2.0, 1.0 + s / n) * std::sqrt((n + 2 * s) / (n - 2 * s));
}

double delta2_log10(double gamma, std::int64_t K, double p) {
    // 1 - 3^K gamma^{-p/2} d^{p/4} = 2/3  =>  d = gamma^2 3^{-4(K+1)/p}
    return 2.0 * std::log10(gamma) - 4.0 * static_cast<double>(K + 1) / p * std::log10(3.0);
}

ThresholdSet thresholds(const ProblemParams& pp, double eps1, double eps2, std::int64_t K,
                        bool p_to_two_limit) {
    if (!(eps1 > 0.0) || eps1 > 1.0 / 16.0) throw DomainError("eps1 must lie in (0, 1/16]");
    if (!(eps2 > 0.0) || eps2 > 1.0 / 8.0) throw DomainError("eps2 must lie in (0, 1/8]");
    if (K < 1) throw DomainError("K must be at least 1");
    const double gamma = 0.5 * eps1;
    ThresholdSet t;
    t.delta1 = 98.0 * eps1 / (280.0 * 280.0);
    t.log10_delta2 = delta2_log10(gamma, K, p_to_two_limit ? 2.0 : pp.p());
    t.delta2 = std::pow(10.0, t.log10_delta2);
    t.log10_delta0 = std::min(std::log10(t.delta1), t.log10_delta2);
    t.delta0 = std::min(t.delta1, t.delta2);
    t.K = K;
    return t;
}

double constant_relation(double c_pos, const ProblemParams& pp) {
    if (c_pos < 0.0) throw DomainError("c_pos must be nonnegative");
    const double n = static_cast<double>(pp.n()), s = pp.s();
    const double gap = std::pow(2.0, (n + 2 * s) / n) - 2.0;
    return 0.5 * std::min(c_pos, std::min(gap, 1.0));
}

}  // namespace sslab
