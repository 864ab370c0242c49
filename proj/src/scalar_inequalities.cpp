#include "sslab/scalar_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sslab/constants.hpp"
#include "sslab/parallel.hpp"

namespace sslab {

using real = long double;

SplitParts split_scalar(double r, double gamma, double M) {
    if (!(r >= -1.0)) throw DomainError("split requires r >= -1");
    if (!(gamma > 0.0) || !(gamma < M)) throw DomainError("split requires 0 < gamma < M");
    SplitParts out;
    out.r1 = std::min(r, gamma);
    out.r2 = std::min(std::max(r - gamma, 0.0), M - gamma);
    out.r3 = std::max(r - M, 0.0);
    return out;
}

namespace {

real cubic_residual_ld(real p, real r) {
    const real th = 2.0L - p;
    const real rp = r > 0 ? r : 0.0L;
    return std::pow(1.0L + r, p) - 1.0L - p * r - 0.5L * p * (p - 1.0L) * r * r + th * rp * rp * rp;
}

}  // namespace

double cubic_bound_residual(double p, double r) {
    if (!(p >= 1.0 && p <= 2.0)) throw DomainError("exponent must lie in [1,2]");
    if (!(r >= -1.0)) throw DomainError("r must be at least -1");
    return static_cast<double>(cubic_residual_ld(p, r));
}

std::int64_t structural_floor_N(double p0) {
    if (!(p0 > 1.0 && p0 < 2.0)) throw DomainError("p0 must lie in (1,2)");
    return static_cast<std::int64_t>(std::floor(p0 / (2.0 * (p0 - 1.0)))) + 1;
}

void SplitParams::validate() const {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(M >= 2.0 * gamma)) throw DomainError("M must be at least 2 gamma");
    if (!(p0 > 1.0 && p0 < 2.0)) throw DomainError("p0 must lie in (1,2)");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (N < structural_floor_N(p0)) throw DomainError("N must exceed p0/(2(p0-1))");
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(std::max(count, 0));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

double tail_constant(double p, double p0, double M, double N) {
    const double lnN = std::log(N);
    const double mid = std::pow(N, 2.0 - p0) * lnN;
    return (1.0 + M) / N * (1.0 + 2.0 * mid) + (1.0 + M) * (1.0 + M) / (N * N) * (0.5 * (p + 1.0) + mid);
}

namespace {

double tail_constant_max(double p0, double M, double N, int p_grid_points) {
    double best = 0.0;
    for (double p : linspace(p0, 2.0, p_grid_points)) best = std::max(best, tail_constant(p, p0, M, N));
    return best;
}

double growth_max(double p0, double M, double N, int p_grid_points) {
    double best = 0.0;
    for (double p : linspace(p0, 2.0, p_grid_points))
        best = std::max(best, std::pow(N, p - 3.0) * std::pow(1.0 + M, 3.0));
    return best;
}

double tail_rate(double C_M, double p0, double N) { return C_M * std::pow(N, 1.0 - p0) * std::log(N); }

constexpr double kMaxN = 1073741824.0;  // 2^30

}  // namespace

double sweep_C_M(double p0, double M, int p_grid_points) {
    const auto floor_n = static_cast<double>(structural_floor_N(p0));
    double best = 0.0;
    auto visit = [&](double N) {
        const double ratio = tail_constant_max(p0, M, N, p_grid_points) / (std::pow(N, 1.0 - p0) * std::log(N));
        best = std::max(best, ratio);
    };
    double N = floor_n;
    for (; N <= 4096.0; N += 1.0) visit(N);
    for (; N <= kMaxN; N *= 1.05) visit(std::floor(N));
    if (!std::isfinite(best)) throw std::runtime_error("no finite C_M on the sweep range");
    return best;
}

ScalarConstants build_constants(const SplitParams& sp, int p_grid_points) {
    sp.validate();
    if (p_grid_points < 1) throw DomainError("exponent grid needs at least one point");
    const double N = static_cast<double>(sp.N);
    const double M = sp.M;
    ScalarConstants k;
    k.p_grid_points = p_grid_points;
    k.C1_MN = (1.0 + M + N) * (1.0 + M + N) * std::log(1.0 + M + N);
    k.C1_N = N * N * std::log(N);
    k.C2_MN = growth_max(sp.p0, M, N, p_grid_points);
    k.C3_MN = tail_constant_max(sp.p0, M, N, p_grid_points);
    k.C_M = sweep_C_M(sp.p0, M, p_grid_points);
    k.C_MN = std::max({k.C1_MN + k.C1_N, k.C2_MN, 8.5 * M * M * M}) / (M * M);
    k.C_qest = 5.0 * k.C_MN + 8.0 / sp.gamma;
    return k;
}

std::int64_t select_N(double p0, double M, double eps, int p_grid_points) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const double C_M = sweep_C_M(p0, M, p_grid_points);
    const auto floor_n = structural_floor_N(p0);
    auto ok = [&](std::int64_t N) { return tail_rate(C_M, p0, static_cast<double>(N)) <= eps; };
    if (ok(floor_n)) return floor_n;
    std::int64_t hi = floor_n;
    while (!ok(hi)) {
        hi *= 2;
        if (static_cast<double>(hi) > kMaxN) throw DomainError("eps unattainable below N = 2^30");
    }
    std::int64_t lo = std::max(hi / 2, floor_n);
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    if (!ok(hi)) throw std::logic_error("selected N fails the tail condition");
    return hi;
}

SplitParams default_split_params(double eps1, double eps) {
    SplitParams sp;
    sp.p0 = 1.75;
    sp.gamma = 0.5 * eps1;
    sp.M = std::max(1.0, 2.0 * sp.gamma);
    sp.eps = eps;
    sp.N = select_N(sp.p0, sp.M, eps);
    return sp;
}

double tail_turning_point(double p) { return std::pow(p / (2.0 * (p - 1.0)), 1.0 / (2.0 - p)); }
double curvature_turning_point(double p) { return std::pow(p - 1.0, 1.0 / (2.0 - p)); }

std::vector<double> CertificationGrid::r_values() const {
    std::vector<double> out;
    const double knee = std::min(1.0, r_max);
    const int lin = r_max > 1.0 ? r_points / 2 : r_points;
    out = linspace(r_min, knee, lin);
    if (r_max > 1.0) {
        const int logc = r_points - lin;
        const double a = 0.0, b = std::log(r_max);
        for (int i = 1; i <= logc; ++i) out.push_back(std::exp(a + (b - a) * i / logc));
    }
    for (double e : extra_r)
        if (e >= r_min) out.push_back(e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string CertificationGrid::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "r in [" << r_min << ", " << r_max << "] with " << r_points << " points (linear to 1, log above) plus "
       << extra_r.size() << " corner points; " << p_values.size() << " exponents";
    if (!p_values.empty()) os << " in [" << p_values.front() << ", " << p_values.back() << "]";
    return os.str();
}

CertificationGrid corner_grid(const SplitParams& sp, double r_max, int r_points, std::vector<double> p_values) {
    CertificationGrid g;
    g.r_max = r_max;
    g.r_points = r_points;
    g.p_values = std::move(p_values);
    const double N = static_cast<double>(sp.N);
    for (double c : {sp.gamma, sp.M, sp.M + N}) {
        for (double rel : {-1e-9, 0.0, 1e-9}) g.extra_r.push_back(c * (1.0 + rel));
    }
    g.extra_r.push_back(0.0);
    g.extra_r.push_back(-1.0);
    return g;
}

double split_bound_residual(double p_in, double r_in, const SplitParams& sp, const ScalarConstants& k) {
    const real p = p_in, r = r_in, th = 2.0L - p;
    const SplitParts s = split_scalar(r_in, sp.gamma, sp.M);
    const real r1 = s.r1, r2 = s.r2, r3 = s.r3, r12 = r1 + r2;
    const real N = static_cast<real>(sp.N);
    const real tail = 1.0L - static_cast<real>(k.C_M) * std::pow(N, 1.0L - sp.p0) * std::log(N) * th;
    const real loss = r <= sp.M ? (2.0L / 3.0L) * sp.gamma * th * r1 * r1 + k.C_MN * th * r2 * r2
                                : static_cast<real>(k.C_MN) * th * sp.M * sp.M;
    const real lhs = std::pow(1.0L + r, p) - 1.0L - p * r;
    const real rhs = 0.5L * p * (p - 1.0L) * r12 * r12 + 2.0L * r12 * r3 + tail * std::pow(r3, p) - loss;
    return static_cast<double>(lhs - rhs);
}

double qestimate_residual(double p_in, double r_in, const SplitParams& sp, const ScalarConstants& k) {
    const real p = p_in, r = r_in, th = 2.0L - p;
    const SplitParts s = split_scalar(r_in, sp.gamma, sp.M);
    const real r1 = s.r1, r2 = s.r2, r3 = s.r3;
    const real half = 0.5L * p * (p - 1.0L);
    const real lhs = std::pow(1.0L + r, p) - 1.0L - p * r;
    const real rhs = (half - 2.0L * sp.gamma * th) * r1 * r1 + (half - k.C_qest * th) * r2 * r2 +
                     2.0L * r1 * r2 + 2.0L * (r1 + r2) * r3 + (1.0L - sp.eps * th) * std::pow(r3, p);
    return static_cast<double>(lhs - rhs);
}

namespace {

template <class Residual>
ViolationReport certify(const CertificationGrid& grid, double tolerance, Residual&& residual) {
    const std::vector<double> rs = grid.r_values();
    std::vector<ViolationReport> parts(grid.p_values.size());
    parallel_for(grid.p_values.size(), [&](std::size_t j) {
        ViolationReport& rep = parts[j];
        rep.worst_residual = std::numeric_limits<double>::infinity();
        const double p = grid.p_values[j];
        for (double r : rs) {
            const double v = residual(p, r);
            ++rep.points;
            if (!(v >= -tolerance)) ++rep.count;
            if (!(v >= rep.worst_residual)) {
                rep.worst_residual = v;
                rep.worst_r = r;
                rep.worst_p = p;
            }
        }
    });
    ViolationReport out;
    out.grid = grid.describe();
    out.tolerance = tolerance;
    out.worst_residual = std::numeric_limits<double>::infinity();
    for (const auto& rep : parts) {
        out.points += rep.points;
        out.count += rep.count;
        if (!(rep.worst_residual >= out.worst_residual)) {
            out.worst_residual = rep.worst_residual;
            out.worst_r = rep.worst_r;
            out.worst_p = rep.worst_p;
        }
    }
    return out;
}

}  // namespace

ViolationReport certify_cubic_bound(const CertificationGrid& grid, double tolerance) {
    return certify(grid, tolerance, [](double p, double r) { return cubic_bound_residual(p, r); });
}

ViolationReport certify_split_bound(const SplitParams& sp, const ScalarConstants& k,
                                     const CertificationGrid& grid, double tolerance) {
    sp.validate();
    return certify(grid, tolerance, [&](double p, double r) { return split_bound_residual(p, r, sp, k); });
}

ViolationReport certify_qestimate(const SplitParams& sp, const ScalarConstants& k, const CertificationGrid& grid,
                                  double tolerance) {
    sp.validate();
    return certify(grid, tolerance, [&](double p, double r) { return qestimate_residual(p, r, sp, k); });
}

}  // namespace sslab
