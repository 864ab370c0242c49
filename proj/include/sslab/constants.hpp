#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sslab {

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dimension n and order s with the derived Lebesgue exponents.
class ProblemParams {
public:
    ProblemParams(std::int64_t n, double s);

    std::int64_t n() const { return n_; }
    double s() const { return s_; }
    double p() const { return p_; }          // 2n/(n+2s)
    double q() const { return q_; }          // 2n/(n-2s)
    double theta() const { return theta_; }  // 2-p

private:
    std::int64_t n_;
    double s_;
    double p_;
    double q_;
    double theta_;
};

struct ThresholdSet {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta0 = 0.0;
    // base-10 logarithms, meaningful even when the values underflow
    double log10_delta2 = 0.0;
    double log10_delta0 = 0.0;
    std::int64_t K = 0;
    std::int64_t n0 = 0;
};

// Surface area of the unit sphere S^n in R^{n+1}.
double sphere_area(std::int64_t n);
double log_sphere_area(std::int64_t n);
// Volume of the unit ball in R^n.
double ball_volume(std::int64_t n);

// Overflows to inf for large n and s; the log forms stay finite.
double sharp_constant(const ProblemParams& pp);
double log_sharp_constant(const ProblemParams& pp);
// Same constant through the (4 pi)^s Gamma-ratio form; used as a cross-check.
double sharp_constant_gamma_form(const ProblemParams& pp);
double log_sharp_constant_gamma_form(const ProblemParams& pp);

double funk_hecke_eigenvalue(const ProblemParams& pp, int l);

// Exact harmonic multiplicity; throws std::overflow_error past 64 bits.
std::uint64_t multiplicity(int n, int l);
// Floating version usable for huge n.
double multiplicity_real(double n, int l);

double comparability_bound(const ProblemParams& pp);

// delta2 for a given exponent p; use p = 2 for the p-independent variant.
double delta2_log10(double gamma, std::int64_t K, double p);

ThresholdSet thresholds(const ProblemParams& pp, double eps1, double eps2, std::int64_t K,
                        bool p_to_two_limit = false);

double constant_relation(double c_pos, const ProblemParams& pp);

}  // namespace sslab
