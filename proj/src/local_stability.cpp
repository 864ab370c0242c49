#include "sslab/local_stability.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sslab {

double kn0_margin(double n, double K, double s, double B) {
    return (2.0 / 3.0) * (2.0 * K / (n + 2.0 * K)) - (4.0 * s / (n + 2.0 * s)) * B;
}

KSelection select_K_n0(double s, double C_qest, double sigma0) {
    if (!(s > 0.0)) throw DomainError("order s must be positive");
    if (!(C_qest > 0.0)) throw DomainError("C_qest must be positive");
    KSelection out;
    out.B = 1.0 + (12.0 / 7.0) * C_qest + sigma0;
    // K must exceed 3 s B for any n0 to exist; twice that keeps n0 within a factor 2 of its infimum.
    const double K = std::ceil(6.0 * s * out.B);
    if (K > 9.0e15) throw std::overflow_error("K0 exceeds the integer sweep cap");
    const double n0_real = 2.0 * s * K * (out.B - 1.0 / 3.0) / (K / 3.0 - s * out.B);
    const double floor_14s = std::floor(14.0 * s) + 1.0;
    const double n0 = std::max(std::ceil(n0_real * (1.0 + 1e-12)), floor_14s);
    out.K0 = static_cast<std::int64_t>(K);
    out.n0 = static_cast<std::int64_t>(n0);

    out.worst_margin = std::numeric_limits<double>::infinity();
    const int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double n = n0 * std::pow(4.0, static_cast<double>(i) / samples);
        out.worst_margin = std::min(out.worst_margin, kn0_margin(n, K, s, out.B));
    }
    out.worst_margin = std::min(out.worst_margin, kn0_margin(2.0 * n0, K, s, out.B));
    out.verified = out.worst_margin >= 0.0;
    return out;
}

double funk_hecke_eigenvalue_large(double n, double s, double l) {
    if (l < 0) throw DomainError("degree must be nonnegative");
    if (l == 0) return 1.0;
    const double a = 0.5 * n - s;
    return boost::math::tgamma_delta_ratio(a + l, 2.0 * s) / boost::math::tgamma_delta_ratio(a, 2.0 * s);
}

CertificateParams make_certificate_params(const ProblemParams& pp, double eps1, double eps2,
                                          std::int64_t K_override) {
    CertificateParams cp;
    cp.eps1 = eps1;
    cp.eps2 = eps2;
    cp.split = default_split_params(eps1, eps2);
    cp.gamma = cp.split.gamma;
    cp.M = cp.split.M;
    cp.constants = build_constants(cp.split);
    cp.C_qest = cp.constants.C_qest;
    const KSelection sel = select_K_n0(pp.s(), cp.C_qest, cp.sigma0);
    cp.n0 = sel.n0;
    cp.K = K_override > 0 ? K_override : sel.K0;
    const ThresholdSet t = thresholds(pp, eps1, eps2, cp.K);
    cp.delta0 = t.delta0;
    cp.log10_delta0 = t.log10_delta0;
    // Minkowski gives |r|_p^2 <= 3 sum |r_i|_p^2, Hoelder bounds each by the integrals, and 2/p >= 1
    cp.C_coercive = cp.vartheta * std::min({cp.eps1, cp.C_qest, cp.eps2}) / 3.0;
    return cp;
}

AdmissibilityReport verify_admissibility(const ZonalFunction& r, const CertificateParams& cp,
                                         bool enforce_norm_bound) {
    AdmissibilityReport rep;
    const double p = r.context().params().p();
    rep.min_value = r.min_value();
    rep.mean = r.coefficient(0);
    rep.degree1 = r.context().L() >= 1 ? r.coefficient(1) : 0.0;
    rep.lp_norm_sq = std::pow(lp_norm(r, p), 2.0);
    const double scale = std::max(1.0, std::sqrt(inner_nodal(r, r)));
    if (rep.min_value < -1.0) rep.failures.push_back("r < -1 at some node");
    if (std::abs(rep.mean) > 1e-12 * scale) rep.failures.push_back("mean of r is not zero");
    if (std::abs(rep.degree1) > 1e-12 * scale) rep.failures.push_back("degree-1 component of r is not zero");
    if (enforce_norm_bound) {
        const double log_norm = rep.lp_norm_sq > 0.0 ? std::log10(rep.lp_norm_sq) : -std::numeric_limits<double>::infinity();
        if (log_norm > cp.log10_delta0 + 1e-12) rep.failures.push_back("|r|_p^2 exceeds delta0");
    }
    rep.admissible = rep.failures.empty();
    return rep;
}

SplitFunctions split_function(const ZonalFunction& r, double gamma, double M) {
    const auto parts = [&](auto pick) {
        return r.map([&](double v) { return pick(split_scalar(std::max(v, -1.0), gamma, M)); });
    };
    return SplitFunctions{parts([](const SplitParts& s) { return s.r1; }),
                          parts([](const SplitParts& s) { return s.r2; }),
                          parts([](const SplitParts& s) { return s.r3; })};
}

double split_form_excess(const ZonalFunction& r, double gamma, double M) {
    const SplitFunctions sf = split_function(r, gamma, M);
    const double diag = quadratic_form_P(sf.r1) + quadratic_form_P(sf.r2) + quadratic_form_P(sf.r3);
    const double cross = 2.0 * (inner_nodal(sf.r1, sf.r2) + inner_nodal(sf.r2, sf.r3) + inner_nodal(sf.r1, sf.r3));
    return diag + cross - quadratic_form_P(r);
}

double deficit_one_plus(const ZonalFunction& r) {
    const SphereContext& ctx = r.context();
    const double p = ctx.params().p();
    double X = 0.0;
    for (int i = 0; i < ctx.Q(); ++i) X += ctx.weights()[i] * std::expm1(p * std::log1p(r.nodal()[i]));
    const double norm_sq_minus_one = std::expm1((2.0 / p) * std::log1p(X));
    const double form_minus_one = 2.0 * r.coefficient(0) + quadratic_form_P(r);
    return norm_sq_minus_one - form_minus_one;
}

double local_stability_ratio(const ZonalFunction& r) {
    const double nsq = std::pow(lp_norm(r, r.context().params().p()), 2.0);
    if (!(nsq > 0.0)) throw DomainError("ratio needs a nonzero r");
    return deficit_one_plus(r) / nsq;
}

namespace {

void fill_r1_pieces(DeficitBreakdown& d, const ZonalFunction& r1, double scale) {
    d.r1_sq = inner_nodal(r1, r1) / scale;
    d.r1_mean = r1.coefficient(0) / std::sqrt(scale);
    d.r1_degree1 = (r1.context().L() >= 1 ? r1.coefficient(1) : 0.0) / std::sqrt(scale);
    d.r1_tilde_sq = d.r1_sq - d.r1_mean * d.r1_mean - d.r1_degree1 * d.r1_degree1;
}

}  // namespace

DeficitBreakdown deficit_breakdown(const ZonalFunction& r, const CertificateParams& cp) {
    if (r.min_value() < -1.0) throw DomainError("breakdown needs r >= -1");
    const ProblemParams& pp = r.context().params();
    const double p = pp.p(), th = pp.theta();
    const SplitFunctions sf = split_function(r, cp.gamma, cp.M);
    const double r1sq = inner_nodal(sf.r1, sf.r1);
    const double r2sq = inner_nodal(sf.r2, sf.r2);
    const double r3p = lp_norm_pow(sf.r3, p);
    const double C = cp.C_qest, v = cp.vartheta;

    DeficitBreakdown d;
    d.I1 = (p - 1.0 - (2.0 / p) * cp.eps1 * (1.0 + v) * th) * r1sq - quadratic_form_P(sf.r1) +
           cp.sigma0 * th * (r2sq + r3p);
    d.I2 = (p - 1.0 - (2.0 / p) * C * (1.0 + v) * th - cp.sigma0 * th) * r2sq - quadratic_form_P(sf.r2);
    d.I3 = ((2.0 / p) * (1.0 - cp.eps2 * (1.0 + v) * th) - cp.sigma0 * th) * r3p - quadratic_form_P(sf.r3);
    d.coercive = (2.0 / p) * v * th * (cp.eps1 * r1sq + C * r2sq + cp.eps2 * r3p);
    d.total_lower_bound = d.coercive + d.I1 + d.I2 + d.I3;
    d.deficit = deficit_one_plus(r);
    fill_r1_pieces(d, sf.r1, 1.0);
    const double nsq = std::pow(lp_norm(r, p), 2.0);
    d.log10_norm_sq = nsq > 0.0 ? std::log10(nsq) : -std::numeric_limits<double>::infinity();
    return d;
}

DeficitBreakdown deficit_breakdown_scaled(const ZonalFunction& shape, const CertificateParams& cp,
                                          double log10_norm_sq) {
    const ProblemParams& pp = shape.context().params();
    const double p = pp.p(), th = pp.theta();
    const double S = std::pow(lp_norm(shape, p), 2.0);
    if (!(S > 0.0)) throw DomainError("scaled breakdown needs a nonzero shape");
    const double sq = inner_nodal(shape, shape);
    const double form = quadratic_form_P(shape);
    DeficitBreakdown d;
    d.normalized = true;
    d.log10_norm_sq = log10_norm_sq;
    d.I1 = ((p - 1.0 - (2.0 / p) * cp.eps1 * (1.0 + cp.vartheta) * th) * sq - form) / S;
    d.I2 = 0.0;
    d.I3 = 0.0;
    d.coercive = (2.0 / p) * cp.vartheta * th * cp.eps1 * sq / S;
    d.total_lower_bound = d.coercive + d.I1;
    d.deficit = ((p - 1.0) * sq - form) / S;
    fill_r1_pieces(d, shape, S);
    return d;
}

double duke_bound_check(int l, double p_exp, const SphereContext& ctx) {
    if (!(p_exp >= 2.0)) throw DomainError("Duke bound needs p >= 2");
    const auto row = ctx.basis_row(l);
    double acc = 0.0;
    for (int i = 0; i < ctx.Q(); ++i) acc += ctx.weights()[i] * std::pow(std::abs(row[i]), p_exp);
    return std::pow(p_exp - 1.0, 0.5 * l) - std::pow(acc, 1.0 / p_exp);
}

double projection_bound_check(const ZonalFunction& r, std::int64_t K, const CertificateParams& cp) {
    if (K < 1) throw DomainError("K must be at least 1");
    const double p = r.context().params().p();
    const SplitFunctions sf = split_function(r, cp.gamma, cp.M);
    const double r2_norm = std::sqrt(inner_nodal(sf.r2, sf.r2));
    double low = 0.0;
    if (K - 1 <= r.context().L()) {
        for (std::int64_t l = 0; l < K; ++l) low += sf.r2.coefficient(static_cast<int>(l)) * sf.r2.coefficient(static_cast<int>(l));
        low = std::sqrt(low);
    } else {
        low = r2_norm;  // every computed degree lies below K
    }
    const double delta = std::pow(lp_norm(r, p), 2.0);
    if (r2_norm == 0.0) return -low;
    const double log_bound = 0.5 * static_cast<double>(K) * std::log(3.0) - 0.25 * p * std::log(cp.gamma) +
                             0.125 * p * std::log(delta) + std::log(r2_norm);
    if (log_bound > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_bound) - low;
}

double i3_coefficient(const ProblemParams& pp, const CertificateParams& cp) {
    const double p = pp.p(), th = pp.theta();
    return (2.0 / p) * (1.0 - cp.eps2 * (1.0 + cp.vartheta) * th) - cp.sigma0 * th;
}

double i1_condition_margin(double delta0, const CertificateParams& cp) {
    const double lhs = 2.0 * std::sqrt(0.125) * std::sqrt(cp.sigma0) / std::sqrt(2.0);
    const double rhs = (17.0 / 14.0 + 3.0 / 14.0 * 6.0) * std::sqrt(delta0) / cp.gamma;
    return lhs - rhs;
}

double i1_delta_limit(const CertificateParams& cp) {
    const double lhs = 2.0 * std::sqrt(0.125) * std::sqrt(cp.sigma0) / std::sqrt(2.0);
    const double root = lhs * cp.gamma / (17.0 / 14.0 + 3.0 / 14.0 * 6.0);
    return root * root;
}

ZonalFunction random_admissible(ContextPtr ctx, std::mt19937_64& rng, int degree, double target_norm_sq,
                                double gamma, double M) {
    if (degree < 2 || degree > ctx->L()) throw DomainError("degree must lie in [2, L]");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = ctx->params().p();
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> c(ctx->L() + 1, 0.0);
        for (int l = 2; l <= degree; ++l) c[l] = normal(rng) / l;
        const ZonalFunction shape = ZonalFunction::from_coefficients(ctx, c);
        const double lo = shape.min_value(), hi = shape.max_value();
        if (!(hi > 0.0) || !(lo < 0.0)) continue;
        double a;
        if (target_norm_sq > 0.0) {
            a = std::sqrt(target_norm_sq) / lp_norm(shape, p);
            if (a * lo < -1.0) continue;
        } else {
            // log-uniform peak between gamma/2 and 3M, then capped by r >= -1
            const double peak = std::exp(std::log(0.5 * gamma) + unit(rng) * (std::log(3.0 * M) - std::log(0.5 * gamma)));
            a = std::min(peak / hi, 1.0 / -lo);
        }
        return shape * a;
    }
    throw std::runtime_error("could not draw an admissible profile");
}

}  // namespace sslab
