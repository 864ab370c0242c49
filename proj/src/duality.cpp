#include "sslab/duality.hpp"

#include <algorithm>
#include <cmath>

namespace sslab {

DualPair dual_density(const ZonalFunction& F) {
    const auto& pp = F.context().params();
    const double q = pp.q();
    const double norm = lp_norm(F, q);
    if (!(norm > 0.0)) throw DomainError("dual density of the zero function");
    const double scale = std::pow(norm, 2.0 - q);
    auto G = F.map([&](double v) { return scale * std::copysign(std::pow(std::abs(v), q - 1.0), v); });
    auto F1 = apply_P2s(G);
    return DualPair{F, std::move(G), std::move(F1)};
}

IdentityResidual legendre_identity_check(const DualPair& pair) {
    const auto& pp = pair.F.context().params();
    const double nf = lp_norm(pair.F, pp.q());
    const double ng = lp_norm(pair.G, pp.p());
    IdentityResidual r;
    r.lhs = nf * nf + ng * ng;
    r.rhs = 2.0 * inner_nodal(pair.F, pair.G);
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

IdentityResidual deficit_transfer_check(const DualPair& pair) {
    const auto diff = pair.F - pair.F1;
    IdentityResidual r;
    r.lhs = sobolev_deficit(pair.F).deficit;
    r.rhs = hls_deficit(pair.G).deficit + quadratic_form_E(diff);
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

SobolevFromHlsReport sobolev_stability_from_hls(const ZonalFunction& F, double c_hls, double tol) {
    if (!(c_hls > 0.0)) throw DomainError("HLS stability constant must be positive");
    const auto pair = dual_density(F);
    const auto dec = project_Hminus_s(pair.G);
    if (dec.boundary_hit) throw std::runtime_error("projection of the dual density is degenerate");

    SobolevFromHlsReport rep;
    rep.phi0 = dec.phi;
    rep.sobolev_deficit = sobolev_deficit(F).deficit;
    rep.hls_deficit = hls_deficit(pair.G).deficit;
    rep.hls_distance_sq = dec.hs_distance_sq;
    const auto phi = extremizer_profile(dec.phi, F.context_ptr());
    const auto target = F - apply_P2s(phi);
    rep.sobolev_distance_sq = quadratic_form_E(target);
    // |a - c|^2 <= 2|a - b|^2 + 2|b - c|^2 with a = F, b = P G, c = P phi0
    const double c = std::min(c_hls, 1.0);
    rep.bound = 0.5 * c * rep.sobolev_distance_sq;
    const double scale = std::max(1.0, quadratic_form_E(F));
    rep.premise_holds = rep.hls_deficit >= c_hls * rep.hls_distance_sq - tol * scale;
    rep.bound_holds = rep.sobolev_deficit >= rep.bound - tol * scale;
    return rep;
}

namespace {

double deficit_at(const ContextPtr& ctx, Side side, int l, double eps) {
    const auto f = ZonalFunction::constant(ctx, 1.0) + ZonalFunction::harmonic(ctx, l, eps);
    return side == Side::HLS ? hls_deficit(f).deficit : sobolev_deficit(f).deficit;
}

}  // namespace

double linearized_deficit_coefficient(ContextPtr ctx, Side side, int l, double eps) {
    if (l < 0 || l > ctx->L()) throw DomainError("degree outside the context band");
    if (!(eps > 0.0)) throw DomainError("perturbation size must be positive");
    // D(eps)/eps^2 = a + b eps + O(eps^2)
    const double c1 = deficit_at(ctx, side, l, eps) / (eps * eps);
    const double c2 = deficit_at(ctx, side, l, 0.5 * eps) / (0.25 * eps * eps);
    return 2.0 * c2 - c1;
}

double sobolev_linearized_quotient(ContextPtr ctx, int l, double eps) {
    const double coeff = linearized_deficit_coefficient(ctx, Side::Sobolev, l, eps);
    return coeff * ctx->eigenvalue(l);  // <E G_l, G_l> = 1/A(l)
}

ZonalFunction random_band_limited(ContextPtr ctx, std::mt19937_64& rng, int degree, double spread) {
    if (degree < 1 || degree > ctx->L()) throw DomainError("degree must lie in [1, L]");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> c(ctx->L() + 1, 0.0);
    c[0] = 1.0;
    for (int l = 1; l <= degree; ++l) c[l] = spread * normal(rng) / (1.0 + l);
    return ZonalFunction::from_coefficients(std::move(ctx), std::move(c));
}

RefinementCheck refinement_halving(double coarse, double fine, double noise_floor) {
    RefinementCheck r{coarse, fine, false};
    r.halves = (coarse <= noise_floor && fine <= noise_floor) || fine <= 0.5 * coarse;
    return r;
}

}  // namespace sslab
