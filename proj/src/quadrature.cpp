#include "sslab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sslab/constants.hpp"

namespace sslab {

namespace {

// Three-term recurrence of the monic Jacobi polynomials: diagonal a_k and
// squared off-diagonal b_k (k >= 1).
void jacobi_recurrence(int count, double alpha, double beta, std::vector<double>& a,
                       std::vector<double>& b) {
    a.assign(count, 0.0);
    b.assign(count, 0.0);
    const double ab = alpha + beta;
    for (int k = 0; k < count; ++k) {
        const double two_k_ab = 2.0 * k + ab;
        if (k == 0) {
            a[k] = (beta - alpha) / (ab + 2.0);
        } else {
            a[k] = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
        }
        if (k == 1) {
            b[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else if (k > 1) {
            b[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                   (two_k_ab * two_k_ab * (two_k_ab + 1.0) * (two_k_ab - 1.0));
        }
    }
}

}  // namespace

double jacobi_log_mass(double alpha, double beta) {
    return (alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
           std::lgamma(alpha + beta + 2.0);
}

QuadratureRule gauss_jacobi(int count, double alpha, double beta, bool normalized) {
    if (count < 1) throw DomainError("quadrature needs at least one node");
    if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
    std::vector<double> a, b;
    jacobi_recurrence(count, alpha, beta, a, b);

    Eigen::VectorXd diag(count);
    Eigen::VectorXd off(std::max(count - 1, 0));
    for (int k = 0; k < count; ++k) diag[k] = a[k];
    for (int k = 1; k < count; ++k) off[k - 1] = std::sqrt(b[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("Gauss-Jacobi eigensolve failed");

    QuadratureRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    for (int i = 0; i < count; ++i) rule.nodes[i] = es.eigenvalues()[i];

    // Polish each node with Newton on the orthonormal polynomial of degree
    // count and take weights from the Christoffel function, which stays
    // accurate for tiny weights near the endpoints.
    for (int i = 0; i < count; ++i) {
        double x = rule.nodes[i];
        double inv_christoffel = 0.0;
        for (int iter = 0; iter < 3; ++iter) {
            double pm1 = 0.0, p0 = 1.0, dm1 = 0.0, d0 = 0.0;
            double sum = 1.0;
            for (int k = 0; k < count; ++k) {
                const double sb_next = k + 1 < count ? std::sqrt(b[k + 1]) : 0.0;
                const double sb = k > 0 ? std::sqrt(b[k]) : 0.0;
                double p1, d1;
                if (k + 1 < count) {
                    p1 = ((x - a[k]) * p0 - sb * pm1) / sb_next;
                    d1 = ((x - a[k]) * d0 + p0 - sb * dm1) / sb_next;
                    sum += p1 * p1;
                } else {
                    // unnormalized last step only feeds the Newton update
                    p1 = (x - a[k]) * p0 - sb * pm1;
                    d1 = (x - a[k]) * d0 + p0 - sb * dm1;
                }
                pm1 = p0;
                p0 = p1;
                dm1 = d0;
                d0 = d1;
            }
            inv_christoffel = sum;
            if (d0 != 0.0 && std::isfinite(p0 / d0)) {
                const double step = p0 / d0;
                if (std::abs(step) < 1e-3 * (1.0 + std::abs(x))) x -= step;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / inv_christoffel;
    }
    double total = 0.0;
    for (double w : rule.weights) total += w;
    const double target = normalized ? 1.0 : std::exp(jacobi_log_mass(alpha, beta));
    for (double& w : rule.weights) w *= target / total;
    std::vector<std::size_t> order(count);
    for (int i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return rule.nodes[l] < rule.nodes[r]; });
    QuadratureRule sorted;
    for (auto i : order) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return sorted;
}

QuadratureRule gauss_legendre(int count) { return gauss_jacobi(count, 0.0, 0.0); }

QuadratureRule mapped(const QuadratureRule& rule, double lo, double hi) {
    QuadratureRule out;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        out.nodes.push_back(mid + half * rule.nodes[i]);
        out.weights.push_back(half * rule.weights[i]);
    }
    return out;
}

}  // namespace sslab
