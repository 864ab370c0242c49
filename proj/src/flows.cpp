#include "sslab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "sslab/extremizers.hpp"
#include "sslab/parallel.hpp"
#include "sslab/quadrature.hpp"

namespace sslab {

namespace {

template <class... Args>
std::string printf_string(const char* fmt, Args... args) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double angular_alpha(std::int64_t n) { return 0.5 * static_cast<double>(n - 3); }

double trapezoid_row(std::span<const double> rho, std::span<const double> vals, double p, double nd, double h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double w = (i == 0 || i + 1 == rho.size()) ? 0.5 * h : h;
        acc += w * std::pow(vals[i], p) * std::pow(rho[i], nd);
    }
    acc += std::pow(vals.front(), p) * std::pow(rho.front(), nd) / nd;
    acc += std::pow(vals.back(), p) * std::pow(rho.back(), nd) / nd;
    return acc;
}

std::vector<double> geometric_levels(double t_max, const RearrangeOptions& opt) {
    if (opt.levels < 16 || !(opt.level_floor > 0.0 && opt.level_floor < 1.0))
        throw DomainError("rearrangement needs at least 16 levels and a floor in (0,1)");
    std::vector<double> t(opt.levels);
    const double step = std::log(opt.level_floor) / (opt.levels - 1);
    for (int m = 0; m < opt.levels; ++m) t[m] = t_max * std::exp(step * m);
    t[0] = t_max;
    // the geometric ladder leaves a gap of a few percent below the top; fill it without
    // interleaving the two sequences, which would make the interpolation stencils irregular
    const int extra = opt.levels / 8;
    const double gap = -std::expm1(step);
    const double lo = std::log10(1e-8), hi = std::log10(0.5 * gap);
    if (hi > lo)
        for (int m = 0; m < extra; ++m) t.push_back(t_max * (1.0 - std::pow(10.0, lo + (hi - lo) * m / (extra - 1))));
    std::sort(t.begin(), t.end(), std::greater<>());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

// measure of {g > t} along one ray, per unit solid angle, with log-log linear segments;
// crossings are solved on the profile's own interpolant when one is given
double ray_measure(std::span<const double> rho, std::span<const double> g, double t, double nd, double tail_exp,
                   const RadialProfile* exact = nullptr) {
    double m = 0.0;
    if (g.front() > t) m += std::pow(rho.front(), nd) / nd;
    for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
        const bool in0 = g[i] > t, in1 = g[i + 1] > t;
        if (!in0 && !in1) continue;
        const double r0 = std::pow(rho[i], nd), r1 = std::pow(rho[i + 1], nd);
        if (in0 && in1) {
            m += (r1 - r0) / nd;
            continue;
        }
        const double l0 = std::log(std::max(g[i], 1e-300)), l1 = std::log(std::max(g[i + 1], 1e-300));
        const double frac = (std::log(t) - l0) / (l1 - l0);
        double u = std::log(rho[i]) + frac * (std::log(rho[i + 1]) - std::log(rho[i]));
        if (exact) {
            const double lt = std::log(t);
            auto gap = [&](double x) { return std::log(std::max((*exact)(std::exp(x)), 1e-300)) - lt; };
            const double a = std::log(rho[i]), b = std::log(rho[i + 1]);
            const double ga = gap(a), gb = gap(b);
            if ((ga > 0.0) != (gb > 0.0) && ga != 0.0 && gb != 0.0) {
                std::uintmax_t iters = 60;
                const auto root = boost::math::tools::toms748_solve(gap, a, b, ga, gb,
                                                                    boost::math::tools::eps_tolerance<double>(48), iters);
                u = 0.5 * (root.first + root.second);
            }
        }
        const double rs = std::exp(nd * u);
        m += in0 ? (rs - r0) / nd : (r1 - rs) / nd;
    }
    if (g.back() > t) {
        const double rs = rho.back() * std::pow(g.back() / t, 1.0 / tail_exp);
        m += (std::pow(rs, nd) - std::pow(rho.back(), nd)) / nd;
    }
    return m;
}

}  // namespace

// ---------------------------------------------------------------- AxiSymFunction

AxiSymFunction::AxiSymFunction(std::int64_t n, double p_exp, RadialGrid grid, int mu_count,
                               std::vector<double> values, Origin origin, std::optional<RadialProfile> profile)
    : n_(n), p_(p_exp), grid_(grid), rho_(grid.radii()), values_(std::move(values)), origin_(origin),
      profile_(std::move(profile)) {
    if (n < 3) throw DomainError("dimension must be at least 3");
    if (mu_count < 2) throw DomainError("need at least two angular nodes");
    const auto rule = gauss_jacobi(mu_count, angular_alpha(n), angular_alpha(n), true);
    mu_ = rule.nodes;
    mu_w_ = rule.weights;
    if (values_.size() != rho_.size() * mu_.size()) throw std::invalid_argument("value table has the wrong size");
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("axisymmetric values must be finite and nonnegative");
    log_rho_.resize(rho_.size());
    for (std::size_t i = 0; i < rho_.size(); ++i) log_rho_[i] = std::log(rho_[i]);
    if (origin_ != Origin::Generic && !profile_) throw std::invalid_argument("radial origin needs its profile");
}

AxiSymFunction AxiSymFunction::from_radial(const RadialProfile& f, int mu_count) {
    std::vector<double> v;
    v.reserve(f.values().size() * mu_count);
    for (double x : f.values())
        for (int j = 0; j < mu_count; ++j) v.push_back(x);
    return AxiSymFunction(f.n(), f.p_exp(), f.grid(), mu_count, std::move(v), Origin::Radial, f);
}

AxiSymFunction AxiSymFunction::from_function(std::int64_t n, double p_exp,
                                             const std::function<double(double, double)>& f, RadialGrid grid,
                                             int mu_count) {
    const auto rule = gauss_jacobi(mu_count, angular_alpha(n), angular_alpha(n), true);
    std::vector<double> v;
    for (double r : grid.radii())
        for (double mu : rule.nodes) v.push_back(f(r, mu));
    return AxiSymFunction(n, p_exp, grid, mu_count, std::move(v));
}

double AxiSymFunction::at(double rho, double mu, bool* outside) const {
    const auto nr = static_cast<int>(rho_.size());
    const int nm = mu_count();
    double decay = 1.0;
    double u = std::log(std::max(rho, 1e-300));
    bool out = false;
    if (u <= log_rho_.front()) {
        u = log_rho_.front();
        out = rho < rho_.front() * (1.0 - 1e-12);
    } else if (u >= log_rho_.back()) {
        decay = std::pow(rho / rho_.back(), -2.0 * static_cast<double>(n_) / p_);
        u = log_rho_.back();
        out = rho > rho_.back() * (1.0 + 1e-12);
    }
    if (outside) *outside = out;
    double x = (u - log_rho_.front()) / grid_.log_step();
    const int i = std::clamp(static_cast<int>(x), 0, nr - 2);
    x = std::clamp(x - i, 0.0, 1.0);

    int j = 0;
    double y = 0.0;
    if (mu <= mu_.front()) {
        j = 0;
    } else if (mu >= mu_.back()) {
        j = nm - 2;
        y = 1.0;
    } else {
        j = static_cast<int>(std::upper_bound(mu_.begin(), mu_.end(), mu) - mu_.begin()) - 1;
        j = std::clamp(j, 0, nm - 2);
        y = (mu - mu_[j]) / (mu_[j + 1] - mu_[j]);
    }
    const double v00 = value(i, j), v01 = value(i, j + 1), v10 = value(i + 1, j), v11 = value(i + 1, j + 1);
    const double v = (1 - x) * ((1 - y) * v00 + y * v01) + x * ((1 - y) * v10 + y * v11);
    return v * decay;
}

double AxiSymFunction::lp_norm_pow() const {
    const double nd = static_cast<double>(n_);
    const double h = grid_.log_step();
    std::vector<double> row(rho_.size());
    double acc = 0.0;
    for (int j = 0; j < mu_count(); ++j) {
        for (std::size_t i = 0; i < rho_.size(); ++i) row[i] = value(static_cast<int>(i), j);
        acc += mu_w_[j] * trapezoid_row(rho_, row, p_, nd, h);
    }
    return sphere_area(n_ - 1) * acc;
}

double AxiSymFunction::lp_norm() const { return std::pow(lp_norm_pow(), 1.0 / p_); }

double AxiSymFunction::angular_variation() const {
    double worst = 0.0;
    double top = 0.0;
    for (double v : values_) top = std::max(top, v);
    if (top == 0.0) return 0.0;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        const auto row = values_.begin() + static_cast<std::ptrdiff_t>(i * mu_.size());
        const auto [lo, hi] = std::minmax_element(row, row + static_cast<std::ptrdiff_t>(mu_.size()));
        worst = std::max(worst, *hi - *lo);
    }
    return worst / top;
}

// ---------------------------------------------------------------- U

InversionImage inversion_image(double rho, double mu) {
    const double D = rho * rho - 2.0 * rho * mu + 1.0;
    const double perp = 2.0 * rho * std::sqrt(std::max(0.0, 1.0 - mu * mu)) / D;
    const double axial = (rho * rho - 1.0) / D;
    InversionImage out;
    out.rho = std::hypot(perp, axial);
    out.mu = out.rho > 0.0 ? axial / out.rho : 1.0;
    out.factor = 2.0 / D;
    return out;
}

AxiSymFunction apply_U(const AxiSymFunction& f) {
    const double np = static_cast<double>(f.n()) / f.p_exp();
    const auto rho = f.radii();
    const auto mu = f.mu_nodes();
    std::vector<double> v(rho.size() * mu.size());
    int outside = 0;
    const bool radial = f.origin() == AxiSymFunction::Origin::Radial;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        for (std::size_t j = 0; j < mu.size(); ++j) {
            double val = 0.0;
            if (radial) {
                // sphere form: F(omega_n) (2/(1+rho^2))^{n/p}
                const double a = 2.0 * rho[i] * mu[j] / (1.0 + rho[i] * rho[i]);
                val = f.profile()->lifted(a) * std::pow(2.0 / (1.0 + rho[i] * rho[i]), np);
            } else {
                const auto img = inversion_image(rho[i], mu[j]);
                bool out = false;
                val = f.at(img.rho, img.mu, &out) * std::pow(img.factor, np);
                outside += out ? 1 : 0;
            }
            v[i * mu.size() + j] = val;
        }
    }
    if (radial)
        return AxiSymFunction(f.n(), f.p_exp(), f.grid(), f.mu_count(), std::move(v),
                              AxiSymFunction::Origin::ConformalImageOfRadial, f.profile());
    AxiSymFunction out(f.n(), f.p_exp(), f.grid(), f.mu_count(), std::move(v));
    out.out_of_grid = outside;
    return out;
}

// ---------------------------------------------------------------- exact distribution

ConformalDistribution::ConformalDistribution(const RadialProfile& f, int a_grid)
    : f_(f), nd_(static_cast<double>(f.n())), k_(angular_alpha(f.n())), np_(nd_ / f.p_exp()) {
    beta_full_ = boost::math::beta(k_ + 1.0, k_ + 1.0);
    sphere_factor_ = sphere_area(f.n() - 2);
    a_.resize(a_grid);
    full_.resize(a_grid);
    empty_.resize(a_grid);
    for (int j = 0; j < a_grid; ++j) {
        a_[j] = -std::cos(std::numbers::pi * j / (a_grid - 1));
        full_[j] = phi_full(a_[j]);
        empty_[j] = phi_empty(a_[j]);
    }
    const auto it = std::max_element(empty_.begin(), empty_.end());
    const auto jm = static_cast<int>(it - empty_.begin());
    const double lo = a_[std::max(0, jm - 1)], hi = a_[std::min(a_grid - 1, jm + 1)];
    const auto best = boost::math::tools::brent_find_minima([&](double a) { return -phi_empty(a); }, lo, hi, 52);
    t_max_ = std::max(*it, -best.second);

    const auto rule = gauss_jacobi(40, 0.0, k_, false);
    const double scale = std::pow(2.0, -k_ - 1.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        gj_nodes_.push_back(0.5 * (1.0 + rule.nodes[i]));
        gj_weights_.push_back(scale * rule.weights[i]);
    }
}

double ConformalDistribution::phi_full(double a) const {
    const double c = std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
    return f_.lifted(a) * std::pow(a * a / (1.0 + c), np_);
}

double ConformalDistribution::phi_empty(double a) const {
    const double c = std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
    return f_.lifted(a) * std::pow(1.0 + c, np_);
}

// Integral over the slice omega_n = a of the Lebesgue density where F(a)(1-b)^{n/p} > t,
// including the slice weight. With w = 1/(1-c v) the integrand is a beta density times w.
double ConformalDistribution::chord(double a, double t) const {
    const double c = std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
    if (c == 0.0) return 0.0;
    const double F = f_.lifted(a);
    if (!(F > 0.0)) return 0.0;
    const double eps = std::pow(t / F, 1.0 / np_);
    if (eps >= 1.0 + c) return 0.0;
    const double a2 = a * a;
    const double one_minus_c = a2 / (1.0 + c);
    const double two_c = 2.0 * c;
    if (eps <= one_minus_c) return std::pow(two_c, 2.0 * k_ + 1.0) * std::pow(a2, -k_ - 2.0) * beta_full_;
    const double v_minus = 1.0 / (1.0 + c);
    const double len = 1.0 / eps - v_minus;
    const double X = std::min(1.0, len * a2 / two_c);
    if (X >= 0.5) {
        const double delta = two_c / a2;
        const double b1 = boost::math::beta(k_ + 1.0, k_ + 1.0, X);
        const double b2 = boost::math::beta(k_ + 2.0, k_ + 1.0, X);
        return std::pow(two_c, 2.0 * k_ + 1.0) * std::pow(a2, -k_ - 1.0) * (v_minus * b1 + delta * b2);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < gj_nodes_.size(); ++i) {
        const double y = gj_nodes_[i];
        acc += gj_weights_[i] * std::pow(1.0 - X * y, k_) * (v_minus + len * y);
    }
    return std::pow(len, k_ + 1.0) * std::pow(two_c, k_) * acc;
}

double ConformalDistribution::measure_above(double t) const {
    if (t >= t_max_) return 0.0;
    if (!(t > 0.0)) return std::numeric_limits<double>::infinity();
    std::vector<double> cuts{a_.front(), a_.back()};
    const boost::math::tools::eps_tolerance<double> tol(50);
    auto add_roots = [&](const std::vector<double>& table, auto&& phi) {
        for (std::size_t j = 0; j + 1 < a_.size(); ++j) {
            const double d0 = table[j] - t, d1 = table[j + 1] - t;
            if (d0 == 0.0) cuts.push_back(a_[j]);
            if (d0 * d1 >= 0.0) continue;
            std::uintmax_t iters = 100;
            const auto r = boost::math::tools::toms748_solve([&](double a) { return phi(a) - t; }, a_[j], a_[j + 1],
                                                             d0, d1, tol, iters);
            cuts.push_back(0.5 * (r.first + r.second));
        }
    };
    add_roots(full_, [this](double a) { return phi_full(a); });
    add_roots(empty_, [this](double a) { return phi_empty(a); });
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 0.0) continue;
        if (phi_empty(0.5 * (lo + hi)) <= t) continue;
        total += integrator.integrate([&](double a) { return chord(a, t); }, lo, hi, 1e-13);
    }
    return sphere_factor_ * total;
}

// ---------------------------------------------------------------- rearrangement

RadialProfile invert_distribution(std::int64_t n, double p_exp, const RadialGrid& grid,
                                  std::span<const double> levels, std::span<const double> measures) {
    if (levels.size() != measures.size() || levels.size() < 8)
        throw std::invalid_argument("distribution samples are inconsistent");
    const double nd = static_cast<double>(n);
    const double omega = ball_volume(n);
    std::vector<double> w, logt;
    for (std::size_t m = 0; m < levels.size(); ++m) {
        const double wm = std::pow(measures[m] / omega, 2.0 / nd);
        if (!std::isfinite(wm)) break;
        if (!w.empty() && wm <= w.back()) continue;
        w.push_back(wm);
        logt.push_back(std::log(levels[m]));
    }
    if (w.size() < 8) throw std::runtime_error("distribution function has too few distinct levels");
    const double tail_exp = 2.0 * nd / p_exp;
    const double rho_last = std::sqrt(w.back());
    const double t_last = std::exp(logt.back());
    const double t_top = std::exp(logt.front());
    const auto radii = grid.radii();
    std::vector<double> vals(radii.size());
    const auto cnt = static_cast<std::ptrdiff_t>(w.size());
    auto segment = [&](double wr) { return std::upper_bound(w.begin(), w.end(), wr) - w.begin() - 1; };
    auto interp = [&](std::ptrdiff_t m, double wr, int width) {
        const auto start = std::clamp<std::ptrdiff_t>(m - (width / 2 - 1), 0, cnt - width);
        return lagrange(std::span<const double>(w.data() + start, width),
                        std::span<const double>(logt.data() + start, width), wr);
    };
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double wr = r * r;
        if (wr >= w.back()) {
            vals[i] = t_last * std::pow(r / rho_last, -tail_exp);
            continue;
        }
        // shrink the stencil where node spacing is very uneven, e.g. a jump from w = 0 to a
        // cluster when the maximum sits on a sphere instead of at the origin
        const auto m = segment(wr);
        int width = 8;
        for (; width > 2; width /= 2) {
            const auto start = std::clamp<std::ptrdiff_t>(m - (width / 2 - 1), 0, cnt - width);
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (auto k = start; k + 1 < start + width; ++k) {
                lo = std::min(lo, w[k + 1] - w[k]);
                hi = std::max(hi, w[k + 1] - w[k]);
            }
            if (hi <= 20.0 * lo) break;
        }
        vals[i] = std::exp(interp(m, wr, width));
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
        vals[i] = std::min(vals[i], t_top);
        if (i > 0) vals[i] = std::min(vals[i], vals[i - 1]);
    }
    return RadialProfile(n, p_exp, grid, std::move(vals));
}

AxiSymFunction rearrange(const AxiSymFunction& f, const RearrangeOptions& opt) {
    using Origin = AxiSymFunction::Origin;
    if (f.origin() == Origin::Radial && f.profile()->nonincreasing()) return f;

    const std::int64_t n = f.n();
    const double nd = static_cast<double>(n);
    const double tail_exp = 2.0 * nd / f.p_exp();
    std::vector<double> levels, measures;

    if (f.origin() == Origin::ConformalImageOfRadial) {
        const ConformalDistribution dist(*f.profile());
        levels = geometric_levels(dist.t_max(), opt);
        measures.assign(levels.size(), 0.0);
        parallel_for(levels.size(), [&](std::size_t m) { measures[m] = dist.measure_above(levels[m]); });
        auto profile = invert_distribution(n, f.p_exp(), f.grid(), levels, measures);
        return AxiSymFunction::from_radial(profile, f.mu_count());
    } else {
        // ray method: each angular node carries a log-log piecewise linear profile
        const auto rho = f.radii();
        std::vector<std::vector<double>> rays;
        std::vector<double> weights;
        if (f.origin() == Origin::Radial) {
            rays.emplace_back(f.profile()->values().begin(), f.profile()->values().end());
            weights.push_back(1.0);
        } else {
            for (int j = 0; j < f.mu_count(); ++j) {
                std::vector<double> ray(rho.size());
                for (std::size_t i = 0; i < rho.size(); ++i) ray[i] = f.value(static_cast<int>(i), j);
                rays.push_back(std::move(ray));
                weights.push_back(f.mu_weights()[j]);
            }
        }
        double t_max = 0.0;
        for (const auto& r : rays) t_max = std::max(t_max, *std::max_element(r.begin(), r.end()));
        if (!(t_max > 0.0)) throw DomainError("cannot rearrange the zero function");
        levels = geometric_levels(t_max, opt);
        measures.assign(levels.size(), 0.0);
        const double area = sphere_area(n - 1);
        parallel_for(levels.size(), [&](std::size_t m) {
            const double t = m == 0 ? levels[0] * (1.0 - 1e-15) : levels[m];
            double acc = 0.0;
            const RadialProfile* exact = f.origin() == Origin::Radial ? &*f.profile() : nullptr;
            for (std::size_t j = 0; j < rays.size(); ++j)
                acc += weights[j] * ray_measure(rho, rays[j], t, nd, tail_exp, exact);
            measures[m] = m == 0 ? 0.0 : area * acc;
        });
    }
    auto profile = invert_distribution(n, f.p_exp(), f.grid(), levels, measures);
    return AxiSymFunction::from_radial(profile, f.mu_count());
}

// ---------------------------------------------------------------- iteration

namespace {

struct LiftDiagnostics {
    double form, lift_norm, dist_h, r_norm, phi_h;
};

LiftDiagnostics lift_diagnostics(const RadialProfile& g, const ContextPtr& ctx, double h_level, double area_factor) {
    const double p = g.p_exp();
    const auto G = ZonalFunction::from_function(ctx, [&](double t) { return g.lifted(t); });
    const auto H = ZonalFunction::constant(ctx, h_level);
    LiftDiagnostics d{};
    d.form = quadratic_form_P(G);
    d.lift_norm = lp_norm(G, p);
    d.dist_h = area_factor * lp_norm(G - H, p);
    const auto dec = project_Hminus_s(G);
    d.r_norm = area_factor * dec.lp_distance;
    if (dec.boundary_hit || dec.phi.c == 0.0)
        d.phi_h = area_factor * std::abs(h_level);
    else
        d.phi_h = area_factor * lp_norm(extremizer_profile(dec.phi, ctx) - H, p);
    return d;
}

}  // namespace

FlowTrace competing_iteration(const RadialProfile& f, double s, int k_max, const FlowOptions& opt) {
    const ProblemParams pp(f.n(), s);
    if (std::abs(pp.p() - f.p_exp()) > 1e-12)
        throw DomainError("profile exponent does not match 2n/(n+2s)");
    if (k_max < 0) throw DomainError("iteration count must be nonnegative");
    const auto ctx = make_context(f.n(), s, opt.L, opt.Q);

    FlowTrace trace;
    trace.n = f.n();
    trace.s = s;
    trace.p_exp = pp.p();
    trace.start_norm = f.lp_norm();
    if (!(trace.start_norm > 0.0)) throw DomainError("start profile must be nonzero");
    const double area_factor = std::pow(sphere_area(f.n()), 1.0 / pp.p());
    const double h_level = trace.start_norm / area_factor;

    auto record = [&](const RadialProfile& g, int k, int oog) {
        FlowRecord rec;
        rec.k = k;
        rec.norm = g.lp_norm();
        const auto d = lift_diagnostics(g, ctx, h_level, area_factor);
        rec.form = d.form;
        rec.lift_norm = d.lift_norm;
        rec.dist_h = d.dist_h;
        rec.r_norm = d.r_norm;
        rec.phi_h = d.phi_h;
        rec.out_of_grid = oog;
        trace.records.push_back(rec);
        const double drift = std::abs(rec.norm / trace.start_norm - 1.0);
        if (drift > opt.abort_drift)
            throw std::runtime_error(printf_string("norm drift %.3e at iteration %d exceeds %.1e", drift, k,
                                                   opt.abort_drift));
    };

    RadialProfile g = f;
    record(g, 0, 0);
    for (int k = 1; k <= k_max; ++k) {
        const auto u = apply_U(AxiSymFunction::from_radial(g, opt.mu_count));
        const auto v = rearrange(u, opt.rearrange);
        g = *v.profile();
        record(g, k, u.out_of_grid);
    }
    trace.last = g;
    return trace;
}

MonotonicityReport monotonicity_check(const FlowTrace& trace, double tol) {
    MonotonicityReport rep;
    const auto& r = trace.records;
    if (r.size() < 2) {
        rep.message = "trace too short";
        return rep;
    }
    for (std::size_t k = 1; k < r.size(); ++k) {
        const double drop = r[k - 1].form - r[k].form;
        if (drop > rep.worst_drop) {
            rep.worst_drop = drop;
            rep.worst_index = static_cast<int>(k);
        }
        if (drop > tol * std::max(1.0, std::abs(r[k - 1].form))) rep.nondecreasing = false;
    }
    rep.total_increase = r.back().form - r.front().form;
    rep.message = rep.nondecreasing ? "nondecreasing"
                                    : printf_string("decrease of %.3e at iteration %d", rep.worst_drop, rep.worst_index);
    return rep;
}

ResidualDecayReport residual_decay_check(const FlowTrace& trace, double fraction) {
    ResidualDecayReport rep;
    if (trace.records.empty()) return rep;
    const double scale = trace.start_norm;
    for (const auto& rec : trace.records) {
        const double fr = rec.r_norm / scale;
        if (rep.first_below < 0 && fr <= fraction) rep.first_below = rec.k;
        if (rec.r_norm > rec.dist_h + rec.phi_h + 1e-9 * scale) rep.triangle_ok = false;
    }
    rep.final_fraction = trace.records.back().r_norm / scale;
    rep.below_target = rep.final_fraction <= fraction;
    rep.stays_below = rep.first_below >= 0;
    for (const auto& rec : trace.records)
        if (rep.first_below >= 0 && rec.k >= rep.first_below && rec.r_norm / scale > fraction) rep.stays_below = false;
    return rep;
}

GlobalRatioReport global_ratio_demo(const RadialProfile& f, double s, int k, const FlowOptions& opt) {
    const auto trace = competing_iteration(f, s, k, opt);
    const auto& first = trace.records.front();
    const auto& last = trace.records.back();
    const double area_factor = std::pow(sphere_area(trace.n), 1.0 / trace.p_exp);
    const double norm_sq = first.lift_norm * first.lift_norm;
    // the zero function lies in the closure of the manifold, so the distance never exceeds the norm
    const double dist = std::min(first.r_norm / area_factor, first.lift_norm);
    const double deficit = norm_sq - first.form;
    GlobalRatioReport rep;
    rep.deficit_over_dist = deficit / (dist * dist);
    rep.deficit_over_norm = deficit / norm_sq;
    rep.flowed_deficit_over_norm = (last.lift_norm * last.lift_norm - last.form) / (last.lift_norm * last.lift_norm);
    rep.dist_fraction = dist * dist / norm_sq;
    const double tol = 1e-9;
    rep.chain_holds = rep.deficit_over_dist >= rep.deficit_over_norm - tol &&
                      rep.deficit_over_norm >= rep.flowed_deficit_over_norm - tol;
    return rep;
}

// ---------------------------------------------------------------- start profiles

double bubble(double rho, double lambda, std::int64_t n, double p_exp) {
    const double np = static_cast<double>(n) / p_exp;
    const double x = rho / lambda;
    return std::pow(lambda, -np) * std::pow(2.0 / (1.0 + x * x), np);
}

std::string to_string(StartProfile kind) {
    switch (kind) {
        case StartProfile::Bump: return "bump";
        case StartProfile::TwoBubbles: return "two-bubbles";
        case StartProfile::Plateau: return "plateau";
    }
    return "unknown";
}

StartProfile start_profile_from_string(const std::string& name) {
    if (name == "bump") return StartProfile::Bump;
    if (name == "two-bubbles") return StartProfile::TwoBubbles;
    if (name == "plateau") return StartProfile::Plateau;
    throw DomainError("unknown start profile: " + name);
}

RadialProfile make_start_profile(StartProfile kind, std::int64_t n, double p_exp, RadialGrid grid) {
    const double np = static_cast<double>(n) / p_exp;
    std::function<double(double)> f;
    switch (kind) {
        case StartProfile::Bump:
            f = [=](double r) { return (1.0 + 2.0 * std::exp(-4.0 * r * r)) * std::pow(2.0 / (1.0 + r * r), np); };
            break;
        case StartProfile::TwoBubbles:
            f = [=](double r) { return bubble(r, 1.0 / 3.0, n, p_exp) + bubble(r, 3.0, n, p_exp); };
            break;
        case StartProfile::Plateau:
            f = [=](double r) { return std::pow(1.0 + std::pow(r, 8.0), -np / 4.0); };
            break;
    }
    return RadialProfile::from_function(n, p_exp, f, grid);
}

}  // namespace sslab
