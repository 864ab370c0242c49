#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sslab {

struct SplitParts {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
};

// r1 = min(r, gamma), r2 = min((r-gamma)_+, M-gamma), r3 = (r-M)_+.
SplitParts split_scalar(double r, double gamma, double M);

// (1+r)^p - 1 - p r - p(p-1)/2 r^2 + (2-p) (r_+)^3, nonnegative for p in [1,2], r >= -1.
double cubic_bound_residual(double p, double r);

struct SplitParams {
    double gamma = 1.0 / 32.0;
    double M = 1.0;
    double p0 = 1.75;
    double eps = 0.125;
    std::int64_t N = 2;

    void validate() const;
};

struct ScalarConstants {
    double C1_MN = 0.0;   // (1+M+N)^2 ln(1+M+N)
    double C1_N = 0.0;    // N^2 ln N
    double C2_MN = 0.0;   // max_p N^{p-3}(1+M)^3
    double C3_MN = 0.0;   // max_p of the tail constant at this N
    double C_M = 0.0;     // sup over N >= N_min of C3 / (N^{1-p0} ln N)
    double C_MN = 0.0;    // M^-2 max{C1_MN + C1_N, C2_MN, 8.5 M^3}
    double C_qest = 0.0;  // 5 C_MN + 8/gamma
    int p_grid_points = 0;
};

// Smallest integer N with N > p0/(2(p0-1)).
std::int64_t structural_floor_N(double p0);

// Tail constant at a single exponent p.
double tail_constant(double p, double p0, double M, double N);

// C_M from a sweep over N >= structural floor; the exponent grid spans [p0, 2].
double sweep_C_M(double p0, double M, int p_grid_points = 64);

ScalarConstants build_constants(const SplitParams& sp, int p_grid_points = 64);

// Smallest N above the structural floor with C_M N^{1-p0} ln N <= eps (doubling, then bisection).
std::int64_t select_N(double p0, double M, double eps, int p_grid_points = 64);

// Default certificate parameters: p0 = 7/4, gamma = eps1/2, M = max(1, 2 gamma), N from select_N.
SplitParams default_split_params(double eps1 = 1.0 / 16.0, double eps = 0.125);

// Minimizers of the auxiliary one-variable functions used to bound the tail:
// t0 for p t^{p-1} - 2t relative to t^p, t1 for p(p-1)/2 t^{p-2} - 1 relative to t^p.
double tail_turning_point(double p);
double curvature_turning_point(double p);

struct CertificationGrid {
    double r_min = -1.0;
    double r_max = 1e3;
    int r_points = 100000;
    std::vector<double> p_values;
    std::vector<double> extra_r;  // corner points added verbatim

    // Half of the points linear on [r_min, min(1, r_max)], the rest log-spaced up to r_max.
    std::vector<double> r_values() const;
    std::string describe() const;
};

std::vector<double> linspace(double lo, double hi, int count);

struct ViolationReport {
    std::string grid;
    std::int64_t points = 0;
    std::int64_t count = 0;
    double worst_residual = 0.0;
    double worst_r = 0.0;
    double worst_p = 0.0;
    double tolerance = 1e-10;

    bool certified() const { return count == 0; }
};

// Residuals LHS - RHS of the three inequalities.
double split_bound_residual(double p, double r, const SplitParams& sp, const ScalarConstants& k);
double qestimate_residual(double p, double r, const SplitParams& sp, const ScalarConstants& k);

ViolationReport certify_cubic_bound(const CertificationGrid& grid, double tolerance = 1e-10);
ViolationReport certify_split_bound(const SplitParams& sp, const ScalarConstants& k,
                                     const CertificationGrid& grid, double tolerance = 1e-10);
ViolationReport certify_qestimate(const SplitParams& sp, const ScalarConstants& k,
                                  const CertificationGrid& grid, double tolerance = 1e-10);

// Grid with the split corners gamma, M, M+N and their neighbours added.
CertificationGrid corner_grid(const SplitParams& sp, double r_max, int r_points,
                              std::vector<double> p_values);

}  // namespace sslab
