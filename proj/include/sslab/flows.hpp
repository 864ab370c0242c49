#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sslab/radial.hpp"
#include "sslab/sphere.hpp"

namespace sslab {

// Nonnegative function on R^n that depends only on rho = |x| and mu = x_n/|x|.
// Angular nodes carry normalized weights for the density (1-mu^2)^{(n-3)/2}.
class AxiSymFunction {
public:
    enum class Origin { Generic, Radial, ConformalImageOfRadial };

    AxiSymFunction(std::int64_t n, double p_exp, RadialGrid grid, int mu_count, std::vector<double> values,
                   Origin origin = Origin::Generic, std::optional<RadialProfile> profile = std::nullopt);

    static AxiSymFunction from_radial(const RadialProfile& f, int mu_count = 64);
    static AxiSymFunction from_function(std::int64_t n, double p_exp,
                                        const std::function<double(double, double)>& f, RadialGrid grid = {},
                                        int mu_count = 64);

    std::int64_t n() const { return n_; }
    double p_exp() const { return p_; }
    const RadialGrid& grid() const { return grid_; }
    std::span<const double> radii() const { return rho_; }
    std::span<const double> mu_nodes() const { return mu_; }
    std::span<const double> mu_weights() const { return mu_w_; }
    int mu_count() const { return static_cast<int>(mu_.size()); }
    double value(int i, int j) const { return values_[static_cast<std::size_t>(i) * mu_.size() + j]; }
    std::span<const double> values() const { return values_; }
    Origin origin() const { return origin_; }
    // The radial profile behind a Radial or ConformalImageOfRadial function.
    const std::optional<RadialProfile>& profile() const { return profile_; }

    // Bilinear in (log rho, mu); outside the radial grid the profile is continued as
    // constant below and by conformal decay above, and *outside is set.
    double at(double rho, double mu, bool* outside = nullptr) const;

    double lp_norm_pow() const;
    double lp_norm() const;
    // max over radii of (max_mu f - min_mu f) / max f
    double angular_variation() const;

    // Points that fell outside the radial grid when this function was produced by apply_U.
    int out_of_grid = 0;

private:
    std::int64_t n_;
    double p_;
    RadialGrid grid_;
    std::vector<double> rho_;
    std::vector<double> log_rho_;
    std::vector<double> mu_;
    std::vector<double> mu_w_;
    std::vector<double> values_;
    Origin origin_;
    std::optional<RadialProfile> profile_;
};

// Image point of x = (rho, mu) under the inversion used by U, and the factor 2/|x-e_n|^2.
struct InversionImage {
    double rho = 0.0;
    double mu = 0.0;
    double factor = 0.0;
};
InversionImage inversion_image(double rho, double mu);

// (Uf)(x) = (2/|x-e_n|^2)^{n/p} f(y). Radial inputs are evaluated exactly from their profile,
// other inputs by bilinear sampling.
AxiSymFunction apply_U(const AxiSymFunction& f);

// |{Uf > t}| for radial f, integrated on the sphere with the chord integral in closed form.
class ConformalDistribution {
public:
    explicit ConformalDistribution(const RadialProfile& f, int a_grid = 2049);

    double t_max() const { return t_max_; }
    double measure_above(double t) const;

private:
    double chord(double a, double t) const;
    double phi_full(double a) const;
    double phi_empty(double a) const;

    RadialProfile f_;
    double nd_;
    double k_;
    double np_;
    double beta_full_;
    double sphere_factor_;
    std::vector<double> a_;
    std::vector<double> full_;
    std::vector<double> empty_;
    std::vector<double> gj_nodes_;
    std::vector<double> gj_weights_;
    double t_max_ = 0.0;
};

struct RearrangeOptions {
    int levels = 512;
    double level_floor = 1e-8;  // lowest level relative to the maximum
};

// Symmetric decreasing rearrangement on the same radial grid.
AxiSymFunction rearrange(const AxiSymFunction& f, const RearrangeOptions& opt = {});

// Builds f* from the distribution function sampled on descending levels.
RadialProfile invert_distribution(std::int64_t n, double p_exp, const RadialGrid& grid,
                                  std::span<const double> levels, std::span<const double> measures);

struct FlowOptions {
    int L = 48;
    int Q = 0;
    int mu_count = 64;
    RearrangeOptions rearrange;
    double abort_drift = 1e-4;
};

struct FlowRecord {
    int k = 0;
    double norm = 0.0;       // |g_k|_p on R^n
    double form = 0.0;       // <P G_k, G_k> for the lifted iterate
    double lift_norm = 0.0;  // |G_k|_p on the sphere
    double dist_h = 0.0;     // |g_k - h|_p
    double r_norm = 0.0;     // |r_k|_p from the sphere decomposition, in R^n units
    double phi_h = 0.0;      // |phi_k - h|_p
    int out_of_grid = 0;
};

struct FlowTrace {
    std::int64_t n = 0;
    double s = 0.0;
    double p_exp = 0.0;
    double start_norm = 0.0;
    std::vector<FlowRecord> records;
    std::optional<RadialProfile> last;
};

// g_{k+1} = rearrange(U g_k) for k < k_max with diagnostics at every step.
FlowTrace competing_iteration(const RadialProfile& f, double s, int k_max, const FlowOptions& opt = {});

struct MonotonicityReport {
    bool nondecreasing = true;
    int worst_index = -1;
    double worst_drop = 0.0;
    double total_increase = 0.0;
    std::string message;
};
MonotonicityReport monotonicity_check(const FlowTrace& trace, double tol = 1e-9);

struct ResidualDecayReport {
    bool below_target = false;
    int first_below = -1;
    bool stays_below = false;
    double final_fraction = 0.0;
    bool triangle_ok = true;
};
ResidualDecayReport residual_decay_check(const FlowTrace& trace, double fraction = 0.05);

struct GlobalRatioReport {
    double deficit_over_dist = 0.0;
    double deficit_over_norm = 0.0;
    double flowed_deficit_over_norm = 0.0;
    double dist_fraction = 0.0;  // dist^2 / |f|_p^2, the delta the start realizes
    bool chain_holds = false;
};
GlobalRatioReport global_ratio_demo(const RadialProfile& f, double s, int k, const FlowOptions& opt = {});

enum class StartProfile { Bump, TwoBubbles, Plateau };
std::string to_string(StartProfile kind);
StartProfile start_profile_from_string(const std::string& name);
RadialProfile make_start_profile(StartProfile kind, std::int64_t n, double p_exp, RadialGrid grid = {});

// lambda^{-n/p} (2/(1+(rho/lambda)^2))^{n/p}
double bubble(double rho, double lambda, std::int64_t n, double p_exp);

}  // namespace sslab
