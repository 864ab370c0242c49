#include "sslab/profile_io.hpp"

#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace sslab {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string out = "invalid profile";
    for (const auto& i : issues) out += "; " + i;
    return out;
}

template <class T>
bool fetch(const nlohmann::json& j, const char* key, T& out, std::vector<std::string>& issues) {
    if (!j.contains(key)) {
        issues.push_back(std::string(key) + ": missing");
        return false;
    }
    try {
        out = j.at(key).get<T>();
        return true;
    } catch (const nlohmann::json::exception&) {
        issues.push_back(std::string(key) + ": wrong type");
        return false;
    }
}

std::vector<double> fetch_array(const nlohmann::json& j, const char* key, std::vector<std::string>& issues) {
    std::vector<double> v;
    if (!j.contains(key) || !j.at(key).is_array()) {
        issues.push_back(std::string(key) + ": missing or not an array");
        return v;
    }
    for (std::size_t i = 0; i < j.at(key).size(); ++i) {
        const auto& e = j.at(key)[i];
        if (!e.is_number()) {
            issues.push_back(std::string(key) + "[" + std::to_string(i) + "]: not a number");
            continue;
        }
        v.push_back(e.get<double>());
    }
    return v;
}

std::string csv_cell(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

ProfileError::ProfileError(std::vector<std::string> issues)
    : DomainError(join_issues(issues)), issues_(std::move(issues)) {}

LoadedProfile parse_profile(const nlohmann::json& j) {
    std::vector<std::string> issues;
    if (!j.is_object()) throw ProfileError({"document: not a JSON object"});
    std::string kind;
    std::int64_t n = 0;
    double s = 0.0;
    fetch(j, "kind", kind, issues);
    fetch(j, "n", n, issues);
    fetch(j, "s", s, issues);
    if (!issues.empty()) throw ProfileError(issues);
    try {
        ProblemParams pp(n, s);
        (void)pp;
    } catch (const DomainError& e) {
        throw ProfileError({std::string("n, s: ") + e.what()});
    }

    if (kind == "zonal-coeffs" || kind == "zonal-nodal") {
        int L = 0, Q = 0;
        fetch(j, "L", L, issues);
        if (j.contains("Q")) fetch(j, "Q", Q, issues);
        const auto data = fetch_array(j, kind == "zonal-coeffs" ? "coefficients" : "values", issues);
        if (L < 1) issues.push_back("L: must be positive");
        if (!issues.empty()) throw ProfileError(issues);
        const auto ctx = make_context(n, s, L, Q);
        if (kind == "zonal-coeffs") {
            if (data.size() > static_cast<std::size_t>(L) + 1)
                throw ProfileError({"coefficients: more entries than L + 1"});
            std::vector<double> c(data);
            c.resize(static_cast<std::size_t>(L) + 1, 0.0);
            return ZonalFunction::from_coefficients(ctx, std::move(c));
        }
        if (data.size() != static_cast<std::size_t>(ctx->Q()))
            throw ProfileError({"values: expected " + std::to_string(ctx->Q()) + " entries"});
        return ZonalFunction::from_nodal(ctx, data);
    }
    if (kind == "radial") {
        RadialGrid grid;
        fetch(j, "rho_min", grid.rho_min, issues);
        fetch(j, "rho_max", grid.rho_max, issues);
        const auto data = fetch_array(j, "values", issues);
        if (!issues.empty()) throw ProfileError(issues);
        grid.count = static_cast<int>(data.size());
        try {
            const ProblemParams pp(n, s);
            return RadialInput{RadialProfile(n, pp.p(), grid, data), s};
        } catch (const DomainError& e) {
            throw ProfileError({std::string("values: ") + e.what()});
        }
    }
    throw ProfileError({"kind: expected zonal-coeffs, zonal-nodal or radial"});
}

LoadedProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProfileError({"path: cannot open " + path});
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ProfileError({std::string("document: ") + e.what()});
    }
    return parse_profile(j);
}

nlohmann::json profile_to_json(const ZonalFunction& f) {
    const auto& ctx = f.context();
    nlohmann::json j;
    j["n"] = ctx.n();
    j["s"] = ctx.s();
    j["L"] = ctx.L();
    j["Q"] = ctx.Q();
    if (f.source() == ZonalFunction::Source::Spectral) {
        j["kind"] = "zonal-coeffs";
        j["coefficients"] = std::vector<double>(f.coefficients().begin(), f.coefficients().end());
    } else {
        j["kind"] = "zonal-nodal";
        j["values"] = std::vector<double>(f.nodal().begin(), f.nodal().end());
    }
    return j;
}

nlohmann::json profile_to_json(const RadialProfile& f, double s) {
    nlohmann::json j;
    j["kind"] = "radial";
    j["n"] = f.n();
    j["s"] = s;
    j["rho_min"] = f.grid().rho_min;
    j["rho_max"] = f.grid().rho_max;
    j["values"] = std::vector<double>(f.values().begin(), f.values().end());
    return j;
}

void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string to_csv(const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty()) return {};
    std::vector<std::string> cols;
    for (const auto& [key, _] : rows.front().items()) cols.push_back(key);
    std::ostringstream out;
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            out << (c ? "," : "") << (row.contains(cols[c]) ? csv_cell(row.at(cols[c])) : "");
        out << '\n';
    }
    return out.str();
}

void emit_report(const nlohmann::json& report, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << report.dump(2) << '\n';
    } else if (format == "csv") {
        if (!report.contains("rows")) throw DomainError("report has no table for csv output");
        out << to_csv(report.at("rows"));
    } else {
        throw DomainError("unknown report format: " + format);
    }
}

}  // namespace sslab
