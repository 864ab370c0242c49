#pragma once

#include <random>
#include <string>

#include "sslab/extremizers.hpp"
#include "sslab/sphere.hpp"

namespace sslab {

// Sobolev-side F, its dual density G = |F|_q^{2-q} |F|^{q-1} sgn F and F1 = P G.
struct DualPair {
    ZonalFunction F;
    ZonalFunction G;
    ZonalFunction F1;
};

DualPair dual_density(const ZonalFunction& F);

struct IdentityResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs|
};

// |F|_q^2 + |G|_p^2 against 2 int F G
IdentityResidual legendre_identity_check(const DualPair& pair);
// Sobolev deficit of F against the HLS deficit of G plus <E(F - F1), F - F1>
IdentityResidual deficit_transfer_check(const DualPair& pair);

struct SobolevFromHlsReport {
    double sobolev_deficit = 0.0;
    double hls_deficit = 0.0;
    double hls_distance_sq = 0.0;  // <P(G - phi0), G - phi0>
    double sobolev_distance_sq = 0.0;  // <E(F - P phi0), F - P phi0>
    double bound = 0.0;           // (c/2) sobolev_distance_sq with c = min(c_hls, 1)
    bool premise_holds = false;   // hls_deficit >= c_hls * hls_distance_sq
    bool bound_holds = false;     // sobolev_deficit >= bound
    Extremizer phi0;
};

// Lower bound on the Sobolev deficit of F inherited from an HLS stability constant c_hls.
SobolevFromHlsReport sobolev_stability_from_hls(const ZonalFunction& F, double c_hls, double tol = 1e-12);

// Epsilon^2 coefficient of the deficit of 1 + eps G_l, Richardson-extrapolated from eps and eps/2.
double linearized_deficit_coefficient(ContextPtr ctx, Side side, int l, double eps = 1e-3);

// Sobolev deficit of 1 + eps G_l over <E eps G_l, eps G_l>, extrapolated to eps -> 0.
double sobolev_linearized_quotient(ContextPtr ctx, int l, double eps = 1e-3);

// 1 + spread * sum_{1<=l<=degree} z_l G_l / (1+l) with standard normal z_l.
ZonalFunction random_band_limited(ContextPtr ctx, std::mt19937_64& rng, int degree, double spread = 0.3);

// Residuals at (L, Q) and (2L, 2Q); below the noise floor both count as converged.
struct RefinementCheck {
    double coarse = 0.0;
    double fine = 0.0;
    bool halves = false;
};
RefinementCheck refinement_halving(double coarse, double fine, double noise_floor = 1e-13);

}  // namespace sslab
