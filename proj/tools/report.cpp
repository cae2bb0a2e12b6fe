#include "report.hpp"

#include <cmath>
#include <cstdio>

#include "pid/io.hpp"
#include "pid/measures.hpp"
#include "pid/oracle.hpp"

namespace pid::cli {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

nlohmann::json report_skeleton(const std::string& path, const nlohmann::json& options) {
    nlohmann::json doc;
    doc["schema"] = kSchema;
    doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    doc["input"] = {{"path", path}, {"digest", file_digest(path)}};
    doc["options"] = options;
    doc["unit"] = "bits";
    return doc;
}

nlohmann::json decomposition_block(const Decomposition& d) {
    nlohmann::json b;
    b["measure"] = measure_name(d.measure_tag);
    b["ui_y_bits"] = d.ui_y;
    b["ui_z_bits"] = d.ui_z;
    b["si_bits"] = d.si;
    b["ci_bits"] = d.ci;
    b["raw"] = {{"ui_y_bits", d.raw_ui_y},
                {"ui_z_bits", d.raw_ui_z},
                {"si_bits", d.raw_si},
                {"ci_bits", d.raw_ci}};
    b["converged"] = d.converged;
    b["iterations"] = d.iterations;
    return b;
}

nlohmann::json deficiency_block(const DeficiencyResult& r) {
    nlohmann::json b;
    b["value_bits"] = r.value;
    b["iterations"] = r.iterations;
    b["kkt_residual"] = r.kkt_residual;
    b["converged"] = r.converged;
    b["randomizer"] = channel_block(r.randomizer);
    return b;
}

nlohmann::json mutual_information_block(const JointDist& j) {
    nlohmann::json b;
    b["i_s_y_bits"] = mutual_info(j, Axis::S, Axis::Y);
    b["i_s_z_bits"] = mutual_info(j, Axis::S, Axis::Z);
    b["i_y_z_bits"] = mutual_info(j, Axis::Y, Axis::Z);
    b["i_s_yz_bits"] = mutual_info_pair(j, Axis::S);
    b["i_s_y_given_z_bits"] = cond_mutual_info(j, Axis::S, Axis::Y, Axis::Z);
    b["i_s_z_given_y_bits"] = cond_mutual_info(j, Axis::S, Axis::Z, Axis::Y);
    b["coinformation_bits"] = coinformation(j);
    return b;
}

nlohmann::json skr_block(const SkrReport& r) {
    nlohmann::json b;
    b["lower_trivial_bits"] = r.lower_trivial;
    b["upper_trivial_bits"] = r.upper_trivial;
    b["one_way_upper_ui_bits"] = r.one_way_upper_ui;
    b["intrinsic_upper_bits"] = r.intrinsic_upper;
    b["simulatable_y_by_z"] = r.simulatable_y_by_z;
    b["simulatable_s_by_z"] = r.simulatable_s_by_z;
    b["active_adversary"] = active_adversary_name(r.active_adversary);
    return b;
}

nlohmann::json channel_block(const Channel& c) {
    nlohmann::json b;
    b["input"] = c.input().symbols();
    b["output"] = c.output().symbols();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t s = 0; s < c.n_in(); ++s) rows.push_back(c.row(s));
    b["rows"] = rows;
    return b;
}

std::string render_decomposition_table(const Decomposition& d) {
    std::string out;
    out += "[" + std::string(measure_name(d.measure_tag)) + "]\n";
    out += "  UI(S;Y\\Z) = " + fixed6(d.ui_y) + " bits\n";
    out += "  UI(S;Z\\Y) = " + fixed6(d.ui_z) + " bits\n";
    out += "  SI(S;Y,Z) = " + fixed6(d.si) + " bits\n";
    out += "  CI(S;Y,Z) = " + fixed6(d.ci) + " bits\n";
    out += "  converged = " + std::string(d.converged ? "yes" : "no") + " (iterations " +
           std::to_string(d.iterations) + ")\n";
    return out;
}

namespace {

void push(std::vector<AuditLine>& lines, const std::string& name, double residual, double tol) {
    lines.push_back({name, residual <= tol, residual});
}

void audit_decomposition(std::vector<AuditLine>& lines, const std::string& tag, double ui_y,
                         double ui_z, double si, double ci, double isy, double isz, double iygz,
                         double iszy, double isyz) {
    push(lines, tag + ".eq1_ui_plus_si", std::abs(ui_y + si - isy), 1e-6);
    push(lines, tag + ".eq2_ui_plus_ci", std::abs(ui_y + ci - iygz), 1e-6);
    push(lines, tag + ".eq3_total", std::abs(ui_y + ui_z + si + ci - isyz), 1e-6);
    push(lines, tag + ".eq4_consistency", std::abs(isy + ui_z - isz - ui_y), 1e-6);
    double neg = std::max({-ui_y, -ui_z, -si, -ci, 0.0});
    push(lines, tag + ".nonnegativity", neg, 1e-6);
    double lo = isy - isz;
    double hi = std::min(isy, iygz);
    push(lines, tag + ".eq15_lower", std::max(lo - ui_y, 0.0), 1e-6);
    push(lines, tag + ".eq15_upper", std::max(ui_y - hi, 0.0), 1e-6);
    (void)iszy;
}

}  // namespace

std::vector<AuditLine> audit_joint(const JointDist& j, const SolverOptions& opts, bool deep) {
    std::vector<AuditLine> lines;

    double isy = mutual_info(j, Axis::S, Axis::Y);
    double isz = mutual_info(j, Axis::S, Axis::Z);
    double iygz = cond_mutual_info(j, Axis::S, Axis::Y, Axis::Z);
    double iszy = cond_mutual_info(j, Axis::S, Axis::Z, Axis::Y);
    double isyz = mutual_info_pair(j, Axis::S);

    BrojaResult broja = decompose_broja(j, opts);
    OutputDecomposition out = decompose_output(j, opts);
    InputDecomposition in = decompose_input(j, opts);

    audit_decomposition(lines, "broja", broja.decomposition.raw_ui_y, broja.decomposition.raw_ui_z,
                        broja.decomposition.raw_si, broja.decomposition.raw_ci, isy, isz, iygz,
                        iszy, isyz);
    audit_decomposition(lines, "output", out.decomposition.raw_ui_y, out.decomposition.raw_ui_z,
                        out.decomposition.raw_si, out.decomposition.raw_ci, isy, isz, iygz, iszy,
                        isyz);
    audit_decomposition(lines, "input", in.decomposition.raw_ui_y, in.decomposition.raw_ui_z,
                        in.decomposition.raw_si, in.decomposition.raw_ci, isy, isz, iygz, iszy,
                        isyz);

    ProjectedInfo proj = projected_information(j, ProjectionDirection::YontoZ, opts);
    push(lines, "prop11_projected_identity", std::abs(proj.value - (isy - in.z_covers_y.value)),
         1e-5);
    push(lines, "si_red_equals_si_i", std::abs(si_red(j, opts) - in.decomposition.raw_si), 1e-5);

    push(lines, "sandwich_delta_o_le_ui_o",
         std::max(out.z_covers_y.value - out.decomposition.raw_ui_y, 0.0), 1e-6);
    push(lines, "sandwich_ui_o_le_ui_broja",
         std::max(out.decomposition.raw_ui_y - broja.decomposition.raw_ui_y, 0.0), 1e-5);
    push(lines, "sandwich_delta_i_le_ui_i",
         std::max(in.z_covers_y.value - in.decomposition.raw_ui_y, 0.0), 1e-6);
    push(lines, "sandwich_ui_i_le_ui_broja",
         std::max(in.decomposition.raw_ui_y - broja.decomposition.raw_ui_y, 0.0), 1e-5);

    if (deep) {
        auto [pi, kappa] = forward_pair(j, Axis::S, Axis::Y);
        auto mu = forward_pair(j, Axis::S, Axis::Z).second;
        if (j.nz() * (j.ny() - 1) <= 4) {
            OracleResult o = grid_deficiency_oracle(pi, mu, kappa, 0.01, DeficiencyKind::Output);
            push(lines, "deep.delta_o_le_grid", std::max(out.z_covers_y.value - o.value, 0.0),
                 1e-6);
            push(lines, "deep.grid_near_delta_o", std::max(o.value - out.z_covers_y.value, 0.0),
                 o.resolution_bound);
        }
        auto [pi_y, kappa_bar] = forward_pair(j, Axis::Y, Axis::S);
        auto mu_bar = forward_pair(j, Axis::Z, Axis::S).second;
        if (j.ny() * (j.nz() - 1) <= 4) {
            OracleResult o =
                grid_deficiency_oracle(pi_y, mu_bar, kappa_bar, 0.01, DeficiencyKind::Input);
            push(lines, "deep.delta_i_le_grid", std::max(in.z_covers_y.value - o.value, 0.0), 1e-6);
            push(lines, "deep.grid_near_delta_i", std::max(o.value - in.z_covers_y.value, 0.0),
                 o.resolution_bound);
        }
        if ((j.ny() - 1) * (j.nz() - 1) <= 2) {
            OracleResult o = grid_ui_oracle(j, 0.005);
            push(lines, "deep.ui_broja_le_grid",
                 std::max(broja.decomposition.raw_ui_y - o.value, 0.0), 1e-6);
            push(lines, "deep.grid_near_ui_broja",
                 std::max(o.value - broja.decomposition.raw_ui_y, 0.0), o.resolution_bound);
        }
    }
    return lines;
}

std::vector<AuditLine> audit_report(const nlohmann::json& report) {
    std::vector<AuditLine> lines;
    if (!report.contains("results") || !report["results"].is_object())
        throw ParseError("report has no results to audit");
    const auto& results = report["results"];
    if (!results.contains("mutual_information"))
        throw ParseError("report lacks the mutual_information block");
    const auto& mi = results["mutual_information"];
    double isy = mi.at("i_s_y_bits").get<double>();
    double isz = mi.at("i_s_z_bits").get<double>();
    double iygz = mi.at("i_s_y_given_z_bits").get<double>();
    double iszy = mi.at("i_s_z_given_y_bits").get<double>();
    double isyz = mi.at("i_s_yz_bits").get<double>();
    for (const char* key : {"broja", "output", "input"}) {
        if (!results.contains(key)) continue;
        const auto& b = results[key];
        audit_decomposition(lines, key, b.at("ui_y_bits").get<double>(),
                            b.at("ui_z_bits").get<double>(), b.at("si_bits").get<double>(),
                            b.at("ci_bits").get<double>(), isy, isz, iygz, iszy, isyz);
    }
    if (lines.empty()) throw ParseError("report contains no decomposition blocks");
    return lines;
}

}  // namespace pid::cli
