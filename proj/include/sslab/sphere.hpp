#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sslab/constants.hpp"

namespace sslab {

// Quadrature and orthonormal zonal basis on S^n for functions of t = cos(polar angle).
// Weights are probability weights for the density proportional to (1-t^2)^{(n-2)/2}.
class SphereContext {
public:
    SphereContext(ProblemParams params, int L, int Q);

    const ProblemParams& params() const { return params_; }
    std::int64_t n() const { return params_.n(); }
    double s() const { return params_.s(); }
    int L() const { return L_; }
    int Q() const { return Q_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    // G_l evaluated at every node.
    std::span<const double> basis_row(int l) const;
    double basis(int l, int i) const { return basis_[static_cast<std::size_t>(l) * Q_ + i]; }
    double eigenvalue(int l) const { return eigen_[l]; }
    std::span<const double> eigenvalues() const { return eigen_; }

    // G_0..G_{L} at an arbitrary point of [-1,1].
    std::vector<double> eval_basis(double t) const;
    // sum_l c_l G_l(t) by the three-term recurrence.
    double eval_series(std::span<const double> coeffs, double t) const;

    static int default_Q(int L);

private:
    ProblemParams params_;
    int L_;
    int Q_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> basis_;
    std::vector<double> eigen_;
    std::vector<double> sqrt_beta_;  // recurrence coefficients of the basis
};

using ContextPtr = std::shared_ptr<const SphereContext>;

// Q = 0 selects the default max(4L, 128).
ContextPtr make_context(std::int64_t n, double s, int L, int Q = 0);

// Immutable zonal function carrying both nodal values and spectral coefficients.
// The representation it was built from is authoritative; the other is derived.
class ZonalFunction {
public:
    enum class Source { Nodal, Spectral };

    static ZonalFunction from_nodal(ContextPtr ctx, std::vector<double> values);
    static ZonalFunction from_coefficients(ContextPtr ctx, std::vector<double> coeffs);
    static ZonalFunction from_function(ContextPtr ctx, const std::function<double(double)>& f);
    static ZonalFunction constant(ContextPtr ctx, double c);
    static ZonalFunction harmonic(ContextPtr ctx, int l, double amplitude = 1.0);

    const SphereContext& context() const { return *ctx_; }
    const ContextPtr& context_ptr() const { return ctx_; }
    Source source() const { return source_; }

    std::span<const double> nodal() const { return nodal_; }
    std::span<const double> coefficients() const { return coeffs_; }
    double coefficient(int l) const { return coeffs_.at(l); }

    // Spectral evaluation; exact for band-limited functions.
    double operator()(double t) const;

    double min_value() const;
    double max_value() const;

    ZonalFunction operator+(const ZonalFunction& o) const;
    ZonalFunction operator-(const ZonalFunction& o) const;
    ZonalFunction operator*(double c) const;
    // Pointwise map on the nodes; result is nodal.
    ZonalFunction map(const std::function<double(double)>& f) const;

private:
    ZonalFunction(ContextPtr ctx, std::vector<double> nodal, std::vector<double> coeffs, Source src)
        : ctx_(std::move(ctx)), nodal_(std::move(nodal)), coeffs_(std::move(coeffs)), source_(src) {}

    ContextPtr ctx_;
    std::vector<double> nodal_;
    std::vector<double> coeffs_;
    Source source_;
};

std::vector<double> analyze(const SphereContext& ctx, std::span<const double> nodal);
std::vector<double> synthesize(const SphereContext& ctx, std::span<const double> coeffs);

// Integral against the probability measure, by quadrature.
double integrate(const ZonalFunction& f);
double inner_nodal(const ZonalFunction& f, const ZonalFunction& g);
// sum_l A(l) f_l g_l
double quadratic_form_P(const ZonalFunction& f, const ZonalFunction& g);
double quadratic_form_P(const ZonalFunction& f);
// sum_l f_l g_l / A(l)
double quadratic_form_E(const ZonalFunction& f, const ZonalFunction& g);
double quadratic_form_E(const ZonalFunction& f);

struct NormResult {
    double value = 0.0;
    // |value(Q) - value(2Q)| relative to value; negative when the check was skipped.
    double self_check = -1.0;
};

double lp_norm(const ZonalFunction& f, double p);
// Norm with a Q-versus-2Q self-check. A spectral-source function is re-evaluated
// from its series; a nodal-source function skips the check.
NormResult lp_norm_checked(const ZonalFunction& f, double p);
NormResult lp_norm_checked(const std::function<double(double)>& f, const SphereContext& ctx, double p);
double lp_norm_pow(const ZonalFunction& f, double p);  // integral of |f|^p

ZonalFunction apply_P2s(const ZonalFunction& f);
ZonalFunction apply_Es(const ZonalFunction& f);

// Double-quadrature evaluation of the fractional integral with the singular kernel,
// in geodesic coordinates around each node. Inner ring sizes are configurable.
ZonalFunction kernel_P2s_oracle(const ZonalFunction& f, int radial_nodes = 64, int ring_nodes = 32);
// Kernel constant times the kernel integral; equals 1 when the constants are consistent.
double kernel_mean_value(const ProblemParams& pp);

enum class Side { HLS, Sobolev };

struct DeficitReport {
    double lp_norm_sq = 0.0;
    double quadratic_form = 0.0;
    double deficit = 0.0;
    Side side = Side::HLS;
};

DeficitReport hls_deficit(const ZonalFunction& g);
DeficitReport sobolev_deficit(const ZonalFunction& u);

std::string to_string(Side side);

// Stereographic correspondence between radial profiles on R^n and zonal functions.
// t = (rho^2-1)/(rho^2+1); the conformal weight is ((1+rho^2)/2)^{n/p}.
double rho_of_t(double t);
double t_of_rho(double rho);
double conformal_weight(std::int64_t n, double p_exp, double rho);

ZonalFunction stereographic_lift(ContextPtr ctx, const std::function<double(double)>& radial,
                                 double p_exp);

struct RadialSamples {
    std::vector<double> rho;
    std::vector<double> values;
};

// Radial profile sampled at the preimages of the context nodes.
RadialSamples stereographic_inverse(const ZonalFunction& F, double p_exp);

// Integral over R^n of |f|^p for a radial f, through the sphere side: |S^n| * int |F|^p.
double euclidean_lp_pow_via_sphere(const ZonalFunction& F, double p_exp);

}  // namespace sslab
