#include "sslab/extremizers.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sslab/quadrature.hpp"

namespace sslab {

void Extremizer::validate() const {
    if (!(std::abs(tau) < 1.0)) throw DomainError("extremizer center must satisfy |tau| < 1");
    if (!std::isfinite(c)) throw DomainError("extremizer amplitude must be finite");
}

double extremizer_exponent(const ProblemParams& pp) { return 0.5 * (static_cast<double>(pp.n()) + 2.0 * pp.s()); }

double extremizer_value(const ProblemParams& pp, const Extremizer& e, double t) {
    e.validate();
    const double base = std::sqrt((1.0 - e.tau) * (1.0 + e.tau)) / (1.0 - e.tau * t);
    return e.c * std::pow(base, extremizer_exponent(pp));
}

ZonalFunction extremizer_profile(const Extremizer& e, ContextPtr ctx) {
    e.validate();
    const ProblemParams pp = ctx->params();
    std::vector<double> v(ctx->Q());
    for (int i = 0; i < ctx->Q(); ++i) v[i] = extremizer_value(pp, e, ctx->nodes()[i]);
    return ZonalFunction::from_nodal(std::move(ctx), std::move(v));
}

ZonalFunction unit_profile(ContextPtr ctx, double tau) { return extremizer_profile(Extremizer{1.0, tau}, std::move(ctx)); }

ZonalFunction unit_profile_tau_derivative(ContextPtr ctx, double tau) {
    const Extremizer e{1.0, tau};
    e.validate();
    const double k = extremizer_exponent(ctx->params());
    std::vector<double> v(ctx->Q());
    for (int i = 0; i < ctx->Q(); ++i) {
        const double t = ctx->nodes()[i];
        const double u = extremizer_value(ctx->params(), e, t);
        v[i] = u * k * (t / (1.0 - tau * t) - tau / ((1.0 - tau) * (1.0 + tau)));
    }
    return ZonalFunction::from_nodal(std::move(ctx), std::move(v));
}

namespace {

// Cached pieces of the c-eliminated objective for a fixed g.
class Objective {
public:
    explicit Objective(const ZonalFunction& g) : g_(g), ctx_(g.context_ptr()) {
        const auto A = ctx_->eigenvalues();
        pg_.resize(A.size());
        for (std::size_t l = 0; l < A.size(); ++l) pg_[l] = A[l] * g.coefficients()[l];
        gg_ = quadratic_form_P(g);
    }

    struct Eval {
        double pair = 0.0;   // <Pg, u>
        double self = 0.0;   // <Pu, u>
        double gain = 0.0;   // pair^2 / self
        double c = 0.0;
    };

    Eval at(double tau) const {
        const ZonalFunction u = unit_profile(ctx_, tau);
        return from_coeffs(u.coefficients());
    }

    Eval from_coeffs(std::span<const double> uc) const {
        const auto A = ctx_->eigenvalues();
        Eval e;
        for (std::size_t l = 0; l < A.size(); ++l) {
            e.pair += pg_[l] * uc[l];
            e.self += A[l] * uc[l] * uc[l];
        }
        e.c = e.pair / e.self;
        e.gain = e.pair * e.c;
        return e;
    }

    // <P r, du/dtau> with r = g - c* u; its zero is a stationary point.
    double stationarity(double tau) const {
        const ZonalFunction u = unit_profile(ctx_, tau);
        const ZonalFunction du = unit_profile_tau_derivative(ctx_, tau);
        const Eval e = from_coeffs(u.coefficients());
        const auto A = ctx_->eigenvalues();
        double a = 0.0, b = 0.0;
        for (std::size_t l = 0; l < A.size(); ++l) {
            a += pg_[l] * du.coefficients()[l];
            b += A[l] * u.coefficients()[l] * du.coefficients()[l];
        }
        return a - e.c * b;
    }

    double gg() const { return gg_; }
    const ContextPtr& ctx() const { return ctx_; }
    const ZonalFunction& g() const { return g_; }

private:
    const ZonalFunction& g_;
    ContextPtr ctx_;
    std::vector<double> pg_;
    double gg_ = 0.0;
};

double golden_max(const Objective& obj, double lo, double hi) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = obj.at(std::tanh(x1)).gain, f2 = obj.at(std::tanh(x2)).gain;
    for (int it = 0; it < 200 && b - a > 1e-11; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = obj.at(std::tanh(x2)).gain;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = obj.at(std::tanh(x1)).gain;
        }
    }
    return 0.5 * (a + b);
}

// Refine tau to a zero of the stationarity function when it brackets one nearby.
double polish(const Objective& obj, double tau, double tau_max) {
    for (double width : {1e-7, 1e-5, 1e-3}) {
        const double lo = std::max(-tau_max, tau - width);
        const double hi = std::min(tau_max, tau + width);
        const double flo = obj.stationarity(lo), fhi = obj.stationarity(hi);
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        if ((flo < 0.0) == (fhi < 0.0)) continue;
        std::uintmax_t iters = 100;
        auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15; };
        const auto root = boost::math::tools::toms748_solve([&](double t) { return obj.stationarity(t); }, lo, hi,
                                                            flo, fhi, tol, iters);
        const double cand = 0.5 * (root.first + root.second);
        if (obj.at(cand).gain >= obj.at(tau).gain - 1e-15 * std::abs(obj.gg())) return cand;
        return tau;
    }
    return tau;
}

ProjectionCandidate make_candidate(const Objective& obj, double tau) {
    const auto e = obj.at(tau);
    ProjectionCandidate c;
    c.phi = Extremizer{e.c, tau};
    c.hs_distance_sq = std::max(obj.gg() - e.gain, 0.0);
    const ZonalFunction r = obj.g() - unit_profile(obj.ctx(), tau) * e.c;
    c.lp_distance = lp_norm(r, obj.ctx()->params().p());
    return c;
}

}  // namespace

double projection_objective(const ZonalFunction& g, double tau) {
    const Objective obj(g);
    return obj.gg() - obj.at(tau).gain;
}

double on_axis_gain(const ZonalFunction& g, double tau) { return Objective(g).at(tau).gain; }

DecompositionResult project_Hminus_s(const ZonalFunction& g, const ProjectionOptions& opt) {
    const Objective obj(g);
    if (!(obj.gg() > 0.0)) throw DomainError("projection needs a nonzero function");
    const double tau_max = 1.0 - opt.margin;
    const double zmax = std::atanh(tau_max);
    const int m = std::max(opt.scan_points, 9);

    std::vector<double> z(m), val(m);
    for (int j = 0; j < m; ++j) {
        z[j] = -zmax + 2.0 * zmax * j / (m - 1);
        val[j] = obj.at(std::tanh(z[j])).gain;
    }
    std::vector<int> peaks;
    for (int j = 0; j < m; ++j) {
        const bool left = j == 0 || val[j] >= val[j - 1];
        const bool right = j == m - 1 || val[j] >= val[j + 1];
        if (left && right) peaks.push_back(j);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return val[a] > val[b]; });
    if (static_cast<int>(peaks.size()) > opt.max_brackets) peaks.resize(opt.max_brackets);

    struct Local {
        double tau;
        double gain;
        bool at_edge;
    };
    std::vector<Local> locals;
    for (int j : peaks) {
        const double lo = z[std::max(j - 1, 0)], hi = z[std::min(j + 1, m - 1)];
        const double zs = golden_max(obj, lo, hi);
        const bool edge = std::abs(zs) >= zmax * (1.0 - 1e-9) - 1e-10;
        double tau = std::tanh(zs);
        if (!edge) tau = polish(obj, tau, tau_max);
        locals.push_back({tau, obj.at(tau).gain, edge});
    }
    std::sort(locals.begin(), locals.end(), [](const Local& a, const Local& b) { return a.gain > b.gain; });

    DecompositionResult out{Extremizer{0.0, 0.0}, g, obj.gg(), lp_norm(g, g.context().params().p()), {0.0, 0.0}, false, {}};
    if (locals.empty() || locals.front().at_edge || !(locals.front().gain > 0.0)) {
        // degenerate branch: the best center escapes to the boundary, take c = 0
        out.boundary_hit = true;
        return out;
    }
    const double best_tau = locals.front().tau;
    const auto e = obj.at(best_tau);
    const ZonalFunction u = unit_profile(g.context_ptr(), best_tau);
    const ZonalFunction du = unit_profile_tau_derivative(g.context_ptr(), best_tau);
    out.phi = Extremizer{e.c, best_tau};
    out.r = g - u * e.c;
    out.hs_distance_sq = quadratic_form_P(out.r);
    out.lp_distance = lp_norm(out.r, g.context().params().p());
    out.ortho_residuals = {quadratic_form_P(out.r, u), quadratic_form_P(out.r, du)};

    const double scale = std::max(obj.gg(), std::numeric_limits<double>::min());
    for (const Local& l : locals) {
        if (l.at_edge) continue;
        if ((locals.front().gain - l.gain) > opt.tie_tolerance * scale) continue;
        const bool dup = std::any_of(out.tied.begin(), out.tied.end(), [&](const ProjectionCandidate& c) {
            return std::abs(c.phi.tau - l.tau) < 1e-6;
        });
        if (!dup) out.tied.push_back(make_candidate(obj, l.tau));
    }
    return out;
}

double off_axis_gain(const ZonalFunction& g, double a, double b, int ring_nodes) {
    const SphereContext& ctx = g.context();
    const double rad2 = a * a + b * b;
    if (!(rad2 < 1.0)) throw DomainError("center must lie inside the unit ball");
    const double ring_exp = 0.5 * static_cast<double>(ctx.n() - 3);
    const QuadratureRule ring = gauss_jacobi(ring_nodes, ring_exp, ring_exp, true);
    const double k = extremizer_exponent(ctx.params());
    const ZonalFunction pg = apply_P2s(g);
    double pair = 0.0;
    for (int i = 0; i < ctx.Q(); ++i) {
        const double t = ctx.nodes()[i];
        const double st = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
        double inner = 0.0;
        for (std::size_t j = 0; j < ring.nodes.size(); ++j) {
            const double dot = a * t + b * st * ring.nodes[j];
            inner += ring.weights[j] * std::pow(std::sqrt(1.0 - rad2) / (1.0 - dot), k);
        }
        pair += ctx.weights()[i] * pg.nodal()[i] * inner;
    }
    // the self-pairing depends only on |xi| by rotation invariance
    const ZonalFunction u = unit_profile(g.context_ptr(), std::sqrt(rad2));
    return pair * pair / quadratic_form_P(u);
}

double euler_lagrange_residual(const Extremizer& e, ContextPtr ctx) {
    e.validate();
    if (!(e.c > 0.0)) throw DomainError("Euler-Lagrange check needs c > 0");
    const ProblemParams pp = ctx->params();
    const ZonalFunction u = extremizer_profile(e, ctx);
    const ZonalFunction pu = apply_P2s(u);
    const double th = pp.theta();
    const double norm_pow = std::pow(lp_norm(u, pp.p()), th);
    double worst = 0.0;
    for (int i = 0; i < ctx->Q(); ++i) {
        const double ui = u.nodal()[i];
        const double rhs = norm_pow * std::pow(std::abs(ui), -th) * ui;
        worst = std::max(worst, std::abs(pu.nodal()[i] - rhs));
    }
    return worst / std::abs(e.c);
}

ComparabilityReport comparability_check(const ZonalFunction& g, const ProjectionOptions& opt) {
    const DecompositionResult d = project_Hminus_s(g, opt);
    ComparabilityReport rep;
    rep.bound = comparability_bound(g.context().params());
    rep.tied_count = static_cast<int>(d.tied.size());
    if (d.tied.size() < 2) {
        rep.unique = true;
        rep.message = "unique minimizer";
        return rep;
    }
    rep.unique = false;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& c : d.tied) {
        lo = std::min(lo, c.lp_distance);
        hi = std::max(hi, c.lp_distance);
    }
    rep.ratio = lo > 0.0 ? hi / lo : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    rep.within_bound = rep.ratio <= rep.bound;
    rep.message = std::to_string(d.tied.size()) + " tied minimizers";
    return rep;
}

double reverse_bound_check(const Extremizer& e1, const Extremizer& e2, ContextPtr ctx) {
    const ProblemParams pp = ctx->params();
    if (e1.c < 0.0 || e2.c < 0.0) throw DomainError("reverse bound needs nonnegative extremizers");
    const ZonalFunction d = extremizer_profile(e1, ctx) - extremizer_profile(e2, ctx);
    const double n = static_cast<double>(pp.n()), s = pp.s();
    const double factor = (n + 2.0 * s) / (n - 2.0 * s) * std::pow(2.0, 2.0 * s / n);
    return factor * quadratic_form_P(d) - std::pow(lp_norm(d, pp.p()), 2.0);
}

}  // namespace sslab
