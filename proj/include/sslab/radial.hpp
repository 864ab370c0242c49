#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sslab {

// Log-spaced radii on [rho_min, rho_max].
struct RadialGrid {
    double rho_min = 1e-4;
    double rho_max = 1e4;
    int count = 1024;

    std::vector<double> radii() const;
    double log_step() const;
};

// Barycentric-free Lagrange interpolation on an arbitrary stencil.
double lagrange(std::span<const double> xs, std::span<const double> ys, double x);

// Nonnegative radial function on R^n sampled on a log grid. Between nodes log f is
// interpolated in log rho with 8 points; below the grid f is constant and above it
// decays like rho^{-2n/p}, the tail of the conformal profile.
class RadialProfile {
public:
    RadialProfile(std::int64_t n, double p_exp, RadialGrid grid, std::vector<double> values);

    static RadialProfile from_function(std::int64_t n, double p_exp, const std::function<double(double)>& f,
                                       RadialGrid grid = {});

    std::int64_t n() const { return n_; }
    double p_exp() const { return p_; }
    const RadialGrid& grid() const { return grid_; }
    std::span<const double> radii() const { return rho_; }
    std::span<const double> values() const { return values_; }

    double operator()(double rho) const;
    // Sphere-side value f(rho(a)) ((1+rho^2)/2)^{n/p} at the cosine a, finite up to a = 1.
    double lifted(double a) const;
    // Decay exponent 2n/p of the tail.
    double tail_exponent() const { return 2.0 * static_cast<double>(n_) / p_; }

    double lp_norm_pow() const;
    double lp_norm() const;
    bool nonincreasing() const;
    RadialProfile scaled(double c) const;

private:
    std::int64_t n_;
    double p_;
    RadialGrid grid_;
    std::vector<double> rho_;
    std::vector<double> log_rho_;
    std::vector<double> values_;
    std::vector<double> log_values_;
    bool positive_ = true;
};

// Standard profile ||f||_p |S^n|^{-1/p} (2/(1+rho^2))^{n/p} with the given norm.
RadialProfile standard_bubble(std::int64_t n, double p_exp, double norm, RadialGrid grid = {});

}  // namespace sslab
