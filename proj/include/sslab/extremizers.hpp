#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sslab/sphere.hpp"

namespace sslab {

// Point (c, tau) on the zonal slice of the extremizer manifold.
struct Extremizer {
    double c = 1.0;
    double tau = 0.0;

    void validate() const;
};

// Exponent (n+2s)/2 of the conformal factor.
double extremizer_exponent(const ProblemParams& pp);
// c (sqrt(1-tau^2)/(1-tau t))^{(n+2s)/2}
double extremizer_value(const ProblemParams& pp, const Extremizer& e, double t);

ZonalFunction extremizer_profile(const Extremizer& e, ContextPtr ctx);
// Unit-c profile and its tau-derivative on the nodes.
ZonalFunction unit_profile(ContextPtr ctx, double tau);
ZonalFunction unit_profile_tau_derivative(ContextPtr ctx, double tau);

struct ProjectionOptions {
    double margin = 1e-6;
    int scan_points = 33;
    int max_brackets = 16;
    double tie_tolerance = 1e-9;  // relative, in objective value
};

struct ProjectionCandidate {
    Extremizer phi;
    double hs_distance_sq = 0.0;
    double lp_distance = 0.0;
};

struct DecompositionResult {
    Extremizer phi;
    ZonalFunction r;
    double hs_distance_sq = 0.0;
    double lp_distance = 0.0;
    // <P r, u_tau> and <P r, d/dtau u_tau>
    std::pair<double, double> ortho_residuals{0.0, 0.0};
    bool boundary_hit = false;
    // Every local optimum whose objective ties the best one.
    std::vector<ProjectionCandidate> tied;
};

// Nearest point of the manifold in the <P.,.> metric.
DecompositionResult project_Hminus_s(const ZonalFunction& g, const ProjectionOptions& opt = {});

// <P(g - c u_tau), g - c u_tau> with the optimal c eliminated.
double projection_objective(const ZonalFunction& g, double tau);

// Objective gain <Pg,u_xi>^2 / <Pu_xi,u_xi> for an off-axis center xi = (a, b) with
// a along the pole and b orthogonal to it; the pairing uses a ring quadrature.
double off_axis_gain(const ZonalFunction& g, double a, double b, int ring_nodes = 64);
double on_axis_gain(const ZonalFunction& g, double tau);

// Sup-norm over the nodes of P u - |u|_p^{theta} |u|^{-theta} u, divided by |c|.
double euler_lagrange_residual(const Extremizer& e, ContextPtr ctx);

struct ComparabilityReport {
    bool unique = true;
    int tied_count = 1;
    double ratio = 1.0;
    double bound = 0.0;
    bool within_bound = true;
    std::string message;
};

ComparabilityReport comparability_check(const ZonalFunction& g, const ProjectionOptions& opt = {});

// ((n+2s)/(n-2s)) 2^{2s/n} <P(v1-v2), v1-v2> - |v1-v2|_p^2
double reverse_bound_check(const Extremizer& e1, const Extremizer& e2, ContextPtr ctx);

}  // namespace sslab
