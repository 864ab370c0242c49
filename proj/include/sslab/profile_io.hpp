#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sslab/radial.hpp"
#include "sslab/sphere.hpp"

namespace sslab {

// Schema problems, one entry per offending field.
class ProfileError : public DomainError {
public:
    explicit ProfileError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct RadialInput {
    RadialProfile profile;
    double s;
};

using LoadedProfile = std::variant<ZonalFunction, RadialInput>;

// Kinds: "zonal-coeffs" (n, s, L, Q?, coefficients), "zonal-nodal" (n, s, L, Q, values on the
// context nodes) and "radial" (n, s, rho_min, rho_max, values on the log grid).
LoadedProfile parse_profile(const nlohmann::json& j);
LoadedProfile load_profile(const std::string& path);

nlohmann::json profile_to_json(const ZonalFunction& f);
nlohmann::json profile_to_json(const RadialProfile& f, double s);
void save_json(const nlohmann::json& j, const std::string& path);

// Rows of a JSON array of flat objects as CSV, columns in first-row order.
std::string to_csv(const nlohmann::json& rows);
// format is "json" or "csv"; csv needs a "rows" array in the report.
void emit_report(const nlohmann::json& report, const std::string& format, std::ostream& out);

}  // namespace sslab
