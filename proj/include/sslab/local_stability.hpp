#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sslab/scalar_inequalities.hpp"
#include "sslab/sphere.hpp"

namespace sslab {

struct CertificateParams {
    double eps1 = 1.0 / 16.0;
    double eps2 = 1.0 / 8.0;
    double vartheta = 0.5;
    double sigma0 = 0.125;
    double gamma = 1.0 / 32.0;
    double M = 1.0;
    std::int64_t K = 1;
    double delta0 = 0.0;
    double log10_delta0 = 0.0;
    std::int64_t n0 = 0;
    double C_qest = 0.0;
    // Proof-derived coercive constant: deficit >= C_coercive theta |r|_p^2.
    double C_coercive = 0.0;
    SplitParams split;
    ScalarConstants constants;
};

struct KSelection {
    std::int64_t K0 = 0;
    std::int64_t n0 = 0;
    double B = 0.0;  // 1 + (12/7) C_qest + sigma0
    bool verified = false;
    double worst_margin = 0.0;  // smallest display margin seen on [n0, 4 n0]
};

// (2/3)(2K/(n+2K)) - (4s/(n+2s)) B
double kn0_margin(double n, double K, double s, double B);
KSelection select_K_n0(double s, double C_qest, double sigma0 = 0.125);

// Builds the full parameter pack at the instance's own exponent. K defaults to the selected K0.
CertificateParams make_certificate_params(const ProblemParams& pp, double eps1 = 1.0 / 16.0,
                                          double eps2 = 1.0 / 8.0, std::int64_t K_override = 0);

// A_{n,s}(l) for huge n or l, through Gamma ratios.
double funk_hecke_eigenvalue_large(double n, double s, double l);

struct AdmissibilityReport {
    bool admissible = true;
    double min_value = 0.0;
    double mean = 0.0;
    double degree1 = 0.0;
    double lp_norm_sq = 0.0;
    std::vector<std::string> failures;
};

AdmissibilityReport verify_admissibility(const ZonalFunction& r, const CertificateParams& cp,
                                         bool enforce_norm_bound = true);

struct SplitFunctions {
    ZonalFunction r1;
    ZonalFunction r2;
    ZonalFunction r3;
};

SplitFunctions split_function(const ZonalFunction& r, double gamma, double M);

// sum_i <P r_i, r_i> + 2 int(r1 r2 + r2 r3 + r1 r3) - <P r, r>
double split_form_excess(const ZonalFunction& r, double gamma, double M);

struct DeficitBreakdown {
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    double coercive = 0.0;
    double total_lower_bound = 0.0;
    double deficit = 0.0;
    // pieces of the degree split of r1
    double r1_sq = 0.0;
    double r1_mean = 0.0;
    double r1_degree1 = 0.0;
    double r1_tilde_sq = 0.0;
    // values normalized by |r|_p^2 when true
    bool normalized = false;
    double log10_norm_sq = 0.0;

    double slack() const { return deficit - total_lower_bound; }
};

// Deficit of 1 + r against its division into I1, I2, I3 and the coercive term.
DeficitBreakdown deficit_breakdown(const ZonalFunction& r, const CertificateParams& cp);

// Limit lambda -> 0 of deficit_breakdown(lambda * shape) / |lambda shape|_p^2. Used when the
// admissible radius underflows double precision; then r stays below gamma and only r1 survives.
DeficitBreakdown deficit_breakdown_scaled(const ZonalFunction& shape, const CertificateParams& cp,
                                          double log10_norm_sq);

// (p-1)^{l/2} - |G_l|_{p_exp}
double duke_bound_check(int l, double p_exp, const SphereContext& ctx);

// 3^{K/2} gamma^{-p/4} delta^{p/8} |r2|_2 - |Pi_K r2|_2 with delta = |r|_p^2.
double projection_bound_check(const ZonalFunction& r, std::int64_t K, const CertificateParams& cp);

// deficit(1+r) / |r|_p^2
double local_stability_ratio(const ZonalFunction& r);
double deficit_one_plus(const ZonalFunction& r);

// (2/p)(1 - eps2 (1+vartheta) theta) - sigma0 theta
double i3_coefficient(const ProblemParams& pp, const CertificateParams& cp);

// LHS - RHS of the sufficient condition for I1 >= 0 at a given delta0.
double i1_condition_margin(double delta0, const CertificateParams& cp);
// Largest delta0 satisfying that condition.
double i1_delta_limit(const CertificateParams& cp);

// Random band-limited zonal r on degrees 2..degree with r >= -1 on the nodes.
// With target_norm_sq > 0 the result is rescaled to |r|_p^2 = target_norm_sq;
// otherwise its maximum is drawn so that the r2 and r3 branches of the split are exercised.
ZonalFunction random_admissible(ContextPtr ctx, std::mt19937_64& rng, int degree, double target_norm_sq,
                                double gamma = 1.0 / 32.0, double M = 1.0);

}  // namespace sslab
