#include "sslab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sslab/quadrature.hpp"

namespace sslab {

namespace {

double zonal_alpha(std::int64_t n) { return 0.5 * static_cast<double>(n - 2); }

std::vector<double> basis_sqrt_beta(std::int64_t n, int count) {
    const double lambda = 0.5 * static_cast<double>(n - 1);
    std::vector<double> sb(count + 1, 0.0);
    for (int k = 1; k <= count; ++k) {
        const double kk = k;
        const double beta = kk * (kk + 2.0 * lambda - 1.0) / (4.0 * (kk + lambda) * (kk + lambda - 1.0));
        sb[k] = std::sqrt(beta);
    }
    return sb;
}

double sum_pow_abs(std::span<const double> values, std::span<const double> weights, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * std::pow(std::abs(values[i]), p);
    return acc;
}

void require_same_context(const ZonalFunction& f, const ZonalFunction& g) {
    if (&f.context() != &g.context()) throw std::invalid_argument("zonal functions live on different contexts");
}

}  // namespace

int SphereContext::default_Q(int L) { return std::max(4 * L, 128); }

SphereContext::SphereContext(ProblemParams params, int L, int Q) : params_(params), L_(L), Q_(Q) {
    if (L < 0) throw DomainError("spectral cutoff L must be nonnegative");
    if (Q_ == 0) Q_ = default_Q(L);
    if (Q_ < L + 1) throw DomainError("quadrature size Q must be at least L+1");
    const double a = zonal_alpha(params_.n());
    const QuadratureRule rule = gauss_jacobi(Q_, a, a, true);
    nodes_ = rule.nodes;
    weights_ = rule.weights;
    sqrt_beta_ = basis_sqrt_beta(params_.n(), L_ + 1);

    basis_.assign(static_cast<std::size_t>(L_ + 1) * Q_, 0.0);
    for (int i = 0; i < Q_; ++i) {
        const double t = nodes_[i];
        double prev = 0.0, cur = 1.0;
        basis_[i] = 1.0;
        for (int l = 1; l <= L_; ++l) {
            const double next = (t * cur - sqrt_beta_[l - 1] * prev) / sqrt_beta_[l];
            prev = cur;
            cur = next;
            basis_[static_cast<std::size_t>(l) * Q_ + i] = cur;
        }
    }
    eigen_.resize(L_ + 1);
    for (int l = 0; l <= L_; ++l) eigen_[l] = funk_hecke_eigenvalue(params_, l);
}

std::span<const double> SphereContext::basis_row(int l) const {
    if (l < 0 || l > L_) throw std::out_of_range("degree exceeds spectral cutoff");
    return {basis_.data() + static_cast<std::size_t>(l) * Q_, static_cast<std::size_t>(Q_)};
}

std::vector<double> SphereContext::eval_basis(double t) const {
    std::vector<double> out(L_ + 1);
    double prev = 0.0, cur = 1.0;
    out[0] = 1.0;
    for (int l = 1; l <= L_; ++l) {
        const double next = (t * cur - sqrt_beta_[l - 1] * prev) / sqrt_beta_[l];
        prev = cur;
        cur = next;
        out[l] = cur;
    }
    return out;
}

double SphereContext::eval_series(std::span<const double> coeffs, double t) const {
    if (static_cast<int>(coeffs.size()) > L_ + 1) throw std::out_of_range("series longer than cutoff");
    double prev = 0.0, cur = 1.0;
    double acc = coeffs.empty() ? 0.0 : coeffs[0];
    for (std::size_t l = 1; l < coeffs.size(); ++l) {
        const double next = (t * cur - sqrt_beta_[l - 1] * prev) / sqrt_beta_[l];
        prev = cur;
        cur = next;
        acc += coeffs[l] * cur;
    }
    return acc;
}

ContextPtr make_context(std::int64_t n, double s, int L, int Q) {
    return std::make_shared<const SphereContext>(ProblemParams(n, s), L, Q);
}

std::vector<double> analyze(const SphereContext& ctx, std::span<const double> nodal) {
    if (static_cast<int>(nodal.size()) != ctx.Q()) throw std::invalid_argument("nodal size mismatch");
    const auto w = ctx.weights();
    std::vector<double> wf(ctx.Q());
    for (int i = 0; i < ctx.Q(); ++i) wf[i] = w[i] * nodal[i];
    std::vector<double> out(ctx.L() + 1, 0.0);
    for (int l = 0; l <= ctx.L(); ++l) {
        const auto row = ctx.basis_row(l);
        double acc = 0.0;
        for (int i = 0; i < ctx.Q(); ++i) acc += wf[i] * row[i];
        out[l] = acc;
    }
    return out;
}

std::vector<double> synthesize(const SphereContext& ctx, std::span<const double> coeffs) {
    if (static_cast<int>(coeffs.size()) > ctx.L() + 1)
        throw std::out_of_range("coefficient degree exceeds spectral cutoff");
    std::vector<double> out(ctx.Q(), 0.0);
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        if (coeffs[l] == 0.0) continue;
        const auto row = ctx.basis_row(static_cast<int>(l));
        for (int i = 0; i < ctx.Q(); ++i) out[i] += coeffs[l] * row[i];
    }
    return out;
}

ZonalFunction ZonalFunction::from_nodal(ContextPtr ctx, std::vector<double> values) {
    auto coeffs = analyze(*ctx, values);
    return ZonalFunction(std::move(ctx), std::move(values), std::move(coeffs), Source::Nodal);
}

ZonalFunction ZonalFunction::from_coefficients(ContextPtr ctx, std::vector<double> coeffs) {
    if (static_cast<int>(coeffs.size()) > ctx->L() + 1)
        throw std::out_of_range("coefficient degree exceeds spectral cutoff");
    coeffs.resize(ctx->L() + 1, 0.0);
    auto nodal = synthesize(*ctx, coeffs);
    return ZonalFunction(std::move(ctx), std::move(nodal), std::move(coeffs), Source::Spectral);
}

ZonalFunction ZonalFunction::from_function(ContextPtr ctx, const std::function<double(double)>& f) {
    std::vector<double> values(ctx->Q());
    for (int i = 0; i < ctx->Q(); ++i) values[i] = f(ctx->nodes()[i]);
    return from_nodal(std::move(ctx), std::move(values));
}

ZonalFunction ZonalFunction::constant(ContextPtr ctx, double c) {
    std::vector<double> coeffs(ctx->L() + 1, 0.0);
    coeffs[0] = c;
    return from_coefficients(std::move(ctx), std::move(coeffs));
}

ZonalFunction ZonalFunction::harmonic(ContextPtr ctx, int l, double amplitude) {
    if (l < 0 || l > ctx->L()) throw std::out_of_range("degree exceeds spectral cutoff");
    std::vector<double> coeffs(ctx->L() + 1, 0.0);
    coeffs[l] = amplitude;
    return from_coefficients(std::move(ctx), std::move(coeffs));
}

double ZonalFunction::operator()(double t) const { return ctx_->eval_series(coeffs_, t); }

double ZonalFunction::min_value() const { return *std::min_element(nodal_.begin(), nodal_.end()); }
double ZonalFunction::max_value() const { return *std::max_element(nodal_.begin(), nodal_.end()); }

ZonalFunction ZonalFunction::operator+(const ZonalFunction& o) const {
    require_same_context(*this, o);
    std::vector<double> nv(nodal_.size()), cv(coeffs_.size());
    for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = nodal_[i] + o.nodal_[i];
    for (std::size_t l = 0; l < cv.size(); ++l) cv[l] = coeffs_[l] + o.coeffs_[l];
    const Source src = (source_ == Source::Spectral && o.source_ == Source::Spectral) ? Source::Spectral
                                                                                      : Source::Nodal;
    return ZonalFunction(ctx_, std::move(nv), std::move(cv), src);
}

ZonalFunction ZonalFunction::operator-(const ZonalFunction& o) const { return *this + o * -1.0; }

ZonalFunction ZonalFunction::operator*(double c) const {
    std::vector<double> nv(nodal_), cv(coeffs_);
    for (double& v : nv) v *= c;
    for (double& v : cv) v *= c;
    return ZonalFunction(ctx_, std::move(nv), std::move(cv), source_);
}

ZonalFunction ZonalFunction::map(const std::function<double(double)>& f) const {
    std::vector<double> nv(nodal_.size());
    for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = f(nodal_[i]);
    return from_nodal(ctx_, std::move(nv));
}

double integrate(const ZonalFunction& f) {
    const auto w = f.context().weights();
    const auto v = f.nodal();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += w[i] * v[i];
    return acc;
}

double inner_nodal(const ZonalFunction& f, const ZonalFunction& g) {
    require_same_context(f, g);
    const auto w = f.context().weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * f.nodal()[i] * g.nodal()[i];
    return acc;
}

double quadratic_form_P(const ZonalFunction& f, const ZonalFunction& g) {
    require_same_context(f, g);
    const auto A = f.context().eigenvalues();
    double acc = 0.0;
    for (std::size_t l = 0; l < A.size(); ++l) acc += A[l] * f.coefficients()[l] * g.coefficients()[l];
    return acc;
}

double quadratic_form_P(const ZonalFunction& f) { return quadratic_form_P(f, f); }

double quadratic_form_E(const ZonalFunction& f, const ZonalFunction& g) {
    require_same_context(f, g);
    const auto A = f.context().eigenvalues();
    double acc = 0.0;
    for (std::size_t l = 0; l < A.size(); ++l) acc += f.coefficients()[l] * g.coefficients()[l] / A[l];
    return acc;
}

double quadratic_form_E(const ZonalFunction& f) { return quadratic_form_E(f, f); }

double lp_norm_pow(const ZonalFunction& f, double p) {
    if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must be at least 1");
    return sum_pow_abs(f.nodal(), f.context().weights(), p);
}

double lp_norm(const ZonalFunction& f, double p) { return std::pow(lp_norm_pow(f, p), 1.0 / p); }

namespace {

NormResult checked_from(double coarse, double fine) {
    NormResult r;
    r.value = coarse;
    const double scale = std::max(std::abs(fine), 1e-300);
    r.self_check = std::abs(coarse - fine) / scale;
    return r;
}

QuadratureRule doubled_rule(const SphereContext& ctx) {
    const double a = zonal_alpha(ctx.n());
    return gauss_jacobi(2 * ctx.Q(), a, a, true);
}

}  // namespace

NormResult lp_norm_checked(const ZonalFunction& f, double p) {
    const double coarse = lp_norm(f, p);
    if (f.source() != ZonalFunction::Source::Spectral) return NormResult{coarse, -1.0};
    const QuadratureRule fine_rule = doubled_rule(f.context());
    std::vector<double> vals(fine_rule.nodes.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f(fine_rule.nodes[i]);
    const double fine = std::pow(sum_pow_abs(vals, fine_rule.weights, p), 1.0 / p);
    return checked_from(coarse, fine);
}

NormResult lp_norm_checked(const std::function<double(double)>& f, const SphereContext& ctx, double p) {
    if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must be at least 1");
    std::vector<double> coarse_vals(ctx.Q());
    for (int i = 0; i < ctx.Q(); ++i) coarse_vals[i] = f(ctx.nodes()[i]);
    const double coarse = std::pow(sum_pow_abs(coarse_vals, ctx.weights(), p), 1.0 / p);
    const QuadratureRule fine_rule = doubled_rule(ctx);
    std::vector<double> vals(fine_rule.nodes.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f(fine_rule.nodes[i]);
    const double fine = std::pow(sum_pow_abs(vals, fine_rule.weights, p), 1.0 / p);
    return checked_from(coarse, fine);
}

ZonalFunction apply_P2s(const ZonalFunction& f) {
    std::vector<double> c(f.coefficients().begin(), f.coefficients().end());
    for (std::size_t l = 0; l < c.size(); ++l) c[l] *= f.context().eigenvalue(static_cast<int>(l));
    return ZonalFunction::from_coefficients(f.context_ptr(), std::move(c));
}

ZonalFunction apply_Es(const ZonalFunction& f) {
    std::vector<double> c(f.coefficients().begin(), f.coefficients().end());
    for (std::size_t l = 0; l < c.size(); ++l) c[l] /= f.context().eigenvalue(static_cast<int>(l));
    return ZonalFunction::from_coefficients(f.context_ptr(), std::move(c));
}

namespace {

// Kernel constant |S^n| Gamma((n+2s)/2) / (2^{2s} pi^{n/2} Gamma(s)) in log form.
double log_kernel_constant(const ProblemParams& pp) {
    const double n = static_cast<double>(pp.n()), s = pp.s();
    return log_sphere_area(pp.n()) + std::lgamma(0.5 * (n + 2 * s)) - 2 * s * std::log(2.0) -
           0.5 * n * std::log(std::numbers::pi) - std::lgamma(s);
}

// Factor turning the Gauss-Jacobi sum over x = xi.eta (weight (1-x)^{s-1}(1+x)^{(n-2)/2})
// into the kernel integral against the probability measure.
double log_radial_factor(const ProblemParams& pp) {
    const double n = static_cast<double>(pp.n()), s = pp.s();
    const double a = 0.5 * (n - 2);
    return log_kernel_constant(pp) - jacobi_log_mass(a, a) - 0.5 * (n - 2 * s) * std::log(2.0);
}

}  // namespace

double kernel_mean_value(const ProblemParams& pp) {
    const double a = 0.5 * static_cast<double>(pp.n() - 2);
    return std::exp(log_radial_factor(pp) + jacobi_log_mass(pp.s() - 1.0, a));
}

ZonalFunction kernel_P2s_oracle(const ZonalFunction& f, int radial_nodes, int ring_nodes) {
    const SphereContext& ctx = f.context();
    const ProblemParams& pp = ctx.params();
    const QuadratureRule xr = gauss_jacobi(radial_nodes, pp.s() - 1.0, 0.5 * static_cast<double>(pp.n() - 2));
    const double ring_exp = 0.5 * static_cast<double>(pp.n() - 3);
    const QuadratureRule vr = gauss_jacobi(ring_nodes, ring_exp, ring_exp, true);
    const double factor = std::exp(log_radial_factor(pp));
    const double mean = f.coefficient(0);

    std::vector<double> out(ctx.Q());
    for (int i = 0; i < ctx.Q(); ++i) {
        const double t = ctx.nodes()[i];
        const double st = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
        double acc = 0.0;
        for (std::size_t a = 0; a < xr.nodes.size(); ++a) {
            const double x = xr.nodes[a];
            const double sx = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
            double ring = 0.0;
            for (std::size_t b = 0; b < vr.nodes.size(); ++b) {
                const double y = std::clamp(x * t + sx * st * vr.nodes[b], -1.0, 1.0);
                ring += vr.weights[b] * (f(y) - mean);
            }
            acc += xr.weights[a] * ring;
        }
        // the constant mode passes through with eigenvalue 1
        out[i] = mean + factor * acc;
    }
    return ZonalFunction::from_nodal(f.context_ptr(), std::move(out));
}

DeficitReport hls_deficit(const ZonalFunction& g) {
    DeficitReport r;
    r.side = Side::HLS;
    r.lp_norm_sq = std::pow(lp_norm(g, g.context().params().p()), 2);
    r.quadratic_form = quadratic_form_P(g);
    r.deficit = r.lp_norm_sq - r.quadratic_form;
    return r;
}

DeficitReport sobolev_deficit(const ZonalFunction& u) {
    DeficitReport r;
    r.side = Side::Sobolev;
    r.lp_norm_sq = std::pow(lp_norm(u, u.context().params().q()), 2);
    r.quadratic_form = quadratic_form_E(u);
    r.deficit = r.quadratic_form - r.lp_norm_sq;
    return r;
}

std::string to_string(Side side) { return side == Side::HLS ? "hls" : "sobolev"; }

double rho_of_t(double t) {
    if (!(t >= -1.0 && t < 1.0)) throw DomainError("t must lie in [-1,1)");
    return std::sqrt((1.0 + t) / (1.0 - t));
}

double t_of_rho(double rho) {
    if (rho < 0.0) throw DomainError("radius must be nonnegative");
    const double r2 = rho * rho;
    return (r2 - 1.0) / (r2 + 1.0);
}

double conformal_weight(std::int64_t n, double p_exp, double rho) {
    return std::pow(0.5 * (1.0 + rho * rho), static_cast<double>(n) / p_exp);
}

ZonalFunction stereographic_lift(ContextPtr ctx, const std::function<double(double)>& radial, double p_exp) {
    const std::int64_t n = ctx->n();
    std::vector<double> values(ctx->Q());
    for (int i = 0; i < ctx->Q(); ++i) {
        const double rho = rho_of_t(ctx->nodes()[i]);
        const double v = radial(rho) * conformal_weight(n, p_exp, rho);
        if (!std::isfinite(v)) throw std::runtime_error("radial profile decays too slowly for the lift");
        values[i] = v;
    }
    return ZonalFunction::from_nodal(std::move(ctx), std::move(values));
}

RadialSamples stereographic_inverse(const ZonalFunction& F, double p_exp) {
    const SphereContext& ctx = F.context();
    RadialSamples out;
    out.rho.resize(ctx.Q());
    out.values.resize(ctx.Q());
    for (int i = 0; i < ctx.Q(); ++i) {
        const double rho = rho_of_t(ctx.nodes()[i]);
        out.rho[i] = rho;
        out.values[i] = F.nodal()[i] / conformal_weight(ctx.n(), p_exp, rho);
    }
    return out;
}

double euclidean_lp_pow_via_sphere(const ZonalFunction& F, double p_exp) {
    return sphere_area(F.context().n()) * lp_norm_pow(F, p_exp);
}

}  // namespace sslab
