#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pid/broja.hpp"
#include "pid/decompose.hpp"
#include "pid/secrecy.hpp"
#include "pid/types.hpp"

namespace pid::cli {

inline constexpr const char* kSchema = "pid-report/1";
inline constexpr const char* kToolName = "uniqueinfo";
inline constexpr const char* kToolVersion = "0.1.0";

struct AuditLine {
    std::string invariant;
    bool pass = false;
    double residual = 0.0;
};

nlohmann::json report_skeleton(const std::string& path, const nlohmann::json& options);

nlohmann::json decomposition_block(const Decomposition& d);
nlohmann::json deficiency_block(const DeficiencyResult& r);
nlohmann::json mutual_information_block(const JointDist& j);
nlohmann::json skr_block(const SkrReport& r);
nlohmann::json channel_block(const Channel& c);

std::string render_decomposition_table(const Decomposition& d);

// The invariant audit behind `check`: Eqs. (1)-(4) identities for all three
// measures, nonnegativity, the trivial bounds, the projected-information
// identity and the sandwich inequalities. With deep=true, grid-oracle
// comparisons run too when the instance fits under the oracle size caps.
std::vector<AuditLine> audit_joint(const JointDist& j, const SolverOptions& opts, bool deep);

// Re-audits the identity equations recorded in an existing report document.
std::vector<AuditLine> audit_report(const nlohmann::json& report);

}  // namespace pid::cli
