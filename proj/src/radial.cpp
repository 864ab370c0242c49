#include "sslab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sslab/constants.hpp"

namespace sslab {

namespace {
constexpr int kStencil = 8;
}

std::vector<double> RadialGrid::radii() const {
    if (!(rho_min > 0.0) || !(rho_max > rho_min) || count < kStencil)
        throw DomainError("radial grid needs 0 < rho_min < rho_max and at least 8 nodes");
    std::vector<double> out(count);
    const double a = std::log(rho_min), b = std::log(rho_max);
    for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
    return out;
}

double RadialGrid::log_step() const { return (std::log(rho_max) - std::log(rho_min)) / (count - 1); }

double lagrange(std::span<const double> xs, std::span<const double> ys, double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double basis = 1.0;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) basis *= (x - xs[j]) / (xs[i] - xs[j]);
        acc += basis * ys[i];
    }
    return acc;
}

RadialProfile::RadialProfile(std::int64_t n, double p_exp, RadialGrid grid, std::vector<double> values)
    : n_(n), p_(p_exp), grid_(grid), rho_(grid.radii()), values_(std::move(values)) {
    if (n < 3) throw DomainError("dimension must be at least 3");
    if (!(p_exp >= 1.0)) throw DomainError("Lebesgue exponent must be at least 1");
    if (values_.size() != rho_.size()) throw std::invalid_argument("profile size does not match its grid");
    log_rho_.resize(rho_.size());
    log_values_.resize(rho_.size());
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
            throw DomainError("radial profile values must be finite and nonnegative");
        log_rho_[i] = std::log(rho_[i]);
        positive_ = positive_ && values_[i] > 0.0;
        log_values_[i] = values_[i] > 0.0 ? std::log(values_[i]) : 0.0;
    }
}

RadialProfile RadialProfile::from_function(std::int64_t n, double p_exp, const std::function<double(double)>& f,
                                           RadialGrid grid) {
    std::vector<double> v;
    for (double r : grid.radii()) v.push_back(f(r));
    return RadialProfile(n, p_exp, grid, std::move(v));
}

double RadialProfile::operator()(double rho) const {
    if (rho <= rho_.front()) return values_.front();
    if (rho >= rho_.back()) return values_.back() * std::pow(rho / rho_.back(), -tail_exponent());
    const double u = std::log(rho);
    const auto m = static_cast<int>(rho_.size());
    const int idx = static_cast<int>((u - log_rho_.front()) / grid_.log_step());
    const int start = std::clamp(idx - kStencil / 2 + 1, 0, m - kStencil);
    const std::span<const double> xs(log_rho_.data() + start, kStencil);
    if (positive_) {
        const std::span<const double> ys(log_values_.data() + start, kStencil);
        return std::exp(lagrange(xs, ys, u));
    }
    const std::span<const double> ys(values_.data() + start, kStencil);
    return std::max(0.0, lagrange(xs, ys, u));
}

double RadialProfile::lifted(double a) const {
    const double np = static_cast<double>(n_) / p_;
    if (a <= -1.0) return values_.front() * std::pow(0.5, np);
    if (a >= 1.0) return values_.back() * std::pow(rho_.back(), tail_exponent()) * std::pow(0.5, np);
    const double rho = std::sqrt((1.0 + a) / (1.0 - a));
    if (rho >= rho_.back()) {
        // tail: f_L rho_L^{2n/p} rho^{-2n/p} ((1+rho^2)/2)^{n/p} = f_L rho_L^{2n/p} (1+a)^{-n/p}
        return values_.back() * std::pow(rho_.back(), tail_exponent()) * std::pow(1.0 + a, -np);
    }
    return (*this)(rho) * std::pow(1.0 - a, -np);
}

double RadialProfile::lp_norm_pow() const {
    const double nd = static_cast<double>(n_);
    const double h = grid_.log_step();
    double acc = 0.0;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        const double w = (i == 0 || i + 1 == rho_.size()) ? 0.5 * h : h;
        acc += w * std::pow(values_[i], p_) * std::pow(rho_[i], nd);
    }
    // constant core and conformal tail integrate in closed form
    acc += std::pow(values_.front(), p_) * std::pow(rho_.front(), nd) / nd;
    acc += std::pow(values_.back(), p_) * std::pow(rho_.back(), nd) / nd;
    return sphere_area(n_ - 1) * acc;
}

double RadialProfile::lp_norm() const { return std::pow(lp_norm_pow(), 1.0 / p_); }

bool RadialProfile::nonincreasing() const {
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] > values_[i - 1]) return false;
    return true;
}

RadialProfile RadialProfile::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return RadialProfile(n_, p_, grid_, std::move(v));
}

RadialProfile standard_bubble(std::int64_t n, double p_exp, double norm, RadialGrid grid) {
    const double np = static_cast<double>(n) / p_exp;
    const double amp = norm * std::pow(sphere_area(n), -1.0 / p_exp);
    return RadialProfile::from_function(
        n, p_exp, [&](double r) { return amp * std::pow(2.0 / (1.0 + r * r), np); }, grid);
}

}  // namespace sslab
