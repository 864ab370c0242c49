#pragma once

#include <functional>
#include <vector>

namespace sslab {

struct QuadratureRule {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // sum to total_mass
};

// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta.
// Weights are scaled so they sum to the weight's total mass, or to 1 when
// normalized is set.
QuadratureRule gauss_jacobi(int count, double alpha, double beta, bool normalized = false);

// Log of the total mass 2^{a+b+1} B(a+1, b+1) of the Jacobi weight.
double jacobi_log_mass(double alpha, double beta);

QuadratureRule gauss_legendre(int count);

// Rule mapped affinely from [-1,1] onto [lo, hi] (weights rescaled).
QuadratureRule mapped(const QuadratureRule& rule, double lo, double hi);

}  // namespace sslab
