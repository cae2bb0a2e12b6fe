#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pid/io.hpp"
#include "pid/measures.hpp"
#include "pid/oracle.hpp"
#include "report.hpp"

namespace {

using nlohmann::json;
using namespace pid;
using namespace pid::cli;

constexpr int kExitOk = 0;
constexpr int kExitAuditFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNotConverged = 3;

struct CommonOpts {
    std::string file;
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    std::uint64_t seed = 0;
    std::string format = "table";

    SolverOptions solver() const {
        SolverOptions o;
        o.tol_objective = tol;
        o.max_iterations = max_iter;
        o.seed = seed;
        return o;
    }
    json echo() const {
        return {{"tol", tol}, {"max_iter", max_iter}, {"seed", seed}, {"format", format}};
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("file", o.file, "distribution file (JSON or TSV)")->required();
    cmd->add_option("--tol", o.tol, "relative objective tolerance");
    cmd->add_option("--max-iter", o.max_iter, "iteration cap");
    cmd->add_option("--seed", o.seed, "seed for randomized restarts");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
}

void emit(const json& doc, const std::string& format, const std::string& table) {
    if (format == "json")
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << table;
}

int run_decompose(const CommonOpts& o, const std::string& measure, const std::string& target) {
    JointDist j = load_joint(o.file);
    if (target == "S") j = j.permuted(Axis::Y, Axis::S, Axis::Z);
    json options = o.echo();
    options["measure"] = measure;
    options["target"] = target;
    json doc = report_skeleton(o.file, options);
    json results;
    results["mutual_information"] = mutual_information_block(j);
    std::string table;
    bool all_converged = true;
    SolverOptions opts = o.solver();

    if (measure == "broja" || measure == "all") {
        BrojaResult r = decompose_broja(j, opts);
        results["broja"] = decomposition_block(r.decomposition);
        results["broja"]["cross_check_residual_bits"] = r.cross_check_residual;
        results["broja"]["margin_residual"] = r.margin_residual;
        table += render_decomposition_table(r.decomposition);
        all_converged = all_converged && r.decomposition.converged;
    }
    if (measure == "output" || measure == "all") {
        OutputDecomposition r = decompose_output(j, opts);
        results["output"] = decomposition_block(r.decomposition);
        results["output"]["deficiency_z_covers_y"] = deficiency_block(r.z_covers_y);
        results["output"]["deficiency_y_covers_z"] = deficiency_block(r.y_covers_z);
        table += render_decomposition_table(r.decomposition);
        all_converged = all_converged && r.decomposition.converged;
    }
    if (measure == "input" || measure == "all") {
        InputDecomposition r = decompose_input(j, opts);
        results["input"] = decomposition_block(r.decomposition);
        results["input"]["deficiency_z_covers_y"] = deficiency_block(r.z_covers_y);
        results["input"]["deficiency_y_covers_z"] = deficiency_block(r.y_covers_z);
        table += render_decomposition_table(r.decomposition);
        all_converged = all_converged && r.decomposition.converged;
    }
    doc["results"] = results;
    emit(doc, o.format, table);
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_deficiency(const CommonOpts& o, const std::string& kind, const std::string& direction) {
    JointDist j = load_joint(o.file);
    json options = o.echo();
    options["kind"] = kind;
    options["direction"] = direction;
    json doc = report_skeleton(o.file, options);
    SolverOptions opts = o.solver();

    DeficiencyResult r = [&]() {
        if (kind == "output") {
            auto [pi, kappa] = forward_pair(j, Axis::S, Axis::Y);
            auto mu = forward_pair(j, Axis::S, Axis::Z).second;
            return direction == "z-covers-y" ? output_deficiency(pi, mu, kappa, opts)
                                             : output_deficiency(pi, kappa, mu, opts);
        }
        auto [pi_y, kappa_bar] = forward_pair(j, Axis::Y, Axis::S);
        auto [pi_z, mu_bar] = forward_pair(j, Axis::Z, Axis::S);
        return direction == "z-covers-y" ? input_deficiency(pi_y, mu_bar, kappa_bar, opts)
                                         : input_deficiency(pi_z, kappa_bar, mu_bar, opts);
    }();

    doc["results"]["deficiency"] = deficiency_block(r);
    std::string table;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s deficiency (%s) = %.6f bits\n  iterations %zu, kkt residual %.3g, %s\n",
                  kind.c_str(), direction.c_str(), r.value, r.iterations, r.kkt_residual,
                  r.converged ? "converged" : "NOT converged");
    table += buf;
    table += "  randomizer rows:\n";
    for (std::size_t s = 0; s < r.randomizer.n_in(); ++s) {
        table += "   ";
        for (std::size_t y = 0; y < r.randomizer.n_out(); ++y) {
            std::snprintf(buf, sizeof(buf), " %.6f", r.randomizer.at(s, y));
            table += buf;
        }
        table += "\n";
    }
    emit(doc, o.format, table);
    return r.converged ? kExitOk : kExitNotConverged;
}

int run_blackwell(const CommonOpts& o, const std::string& mode, const std::string& direction) {
    JointDist j = load_joint(o.file);
    json options = o.echo();
    options["mode"] = mode;
    options["direction"] = direction;
    json doc = report_skeleton(o.file, options);

    OrderCertificate cert = [&]() {
        if (mode == "degradation") {
            auto [pi, kappa] = forward_pair(j, Axis::S, Axis::Y);
            auto mu = forward_pair(j, Axis::S, Axis::Z).second;
            return direction == "z-covers-y" ? degradation_test(mu, kappa, pi)
                                             : degradation_test(kappa, mu, pi);
        }
        auto [pi_y, kappa_bar] = forward_pair(j, Axis::Y, Axis::S);
        auto [pi_z, mu_bar] = forward_pair(j, Axis::Z, Axis::S);
        return direction == "z-covers-y" ? input_degradation_test(mu_bar, kappa_bar, pi_y)
                                         : input_degradation_test(kappa_bar, mu_bar, pi_z);
    }();

    json block;
    block["holds"] = cert.holds;
    block["l1_gap"] = cert.l1_gap;
    if (cert.holds && cert.randomizer) block["randomizer"] = channel_block(*cert.randomizer);
    doc["results"]["order"] = block;

    std::string table;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s (%s): holds=%s, l1_gap=%.9g\n", mode.c_str(),
                  direction.c_str(), cert.holds ? "true" : "false", cert.l1_gap);
    table += buf;
    if (cert.holds && cert.randomizer) {
        table += "  randomizer rows:\n";
        for (std::size_t s = 0; s < cert.randomizer->n_in(); ++s) {
            table += "   ";
            for (std::size_t y = 0; y < cert.randomizer->n_out(); ++y) {
                std::snprintf(buf, sizeof(buf), " %.6f", cert.randomizer->at(s, y));
                table += buf;
            }
            table += "\n";
        }
    }
    emit(doc, o.format, table);
    return kExitOk;
}

int run_skr(const CommonOpts& o, std::size_t restarts) {
    JointDist j = load_joint(o.file);
    json options = o.echo();
    options["restarts"] = restarts;
    json doc = report_skeleton(o.file, options);
    SkrReport rep = skr_report(j, restarts, o.solver());
    doc["results"]["skr"] = skr_block(rep);

    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "secret key rate bounds:\n"
                  "  trivial lower       = %.6f bits\n"
                  "  trivial upper       = %.6f bits\n"
                  "  one-way upper (UI)  = %.6f bits\n"
                  "  intrinsic (upper)   = %.6f bits\n"
                  "  sim_S(Z->Y) = %s, sim_Y(Z->S) = %s\n"
                  "  active adversary: %s\n",
                  rep.lower_trivial, rep.upper_trivial, rep.one_way_upper_ui, rep.intrinsic_upper,
                  rep.simulatable_y_by_z ? "true" : "false",
                  rep.simulatable_s_by_z ? "true" : "false",
                  active_adversary_name(rep.active_adversary));
    emit(doc, o.format, buf);
    return kExitOk;
}

int run_check(const CommonOpts& o, bool deep) {
    // A pid-report JSON re-audits its recorded numbers; anything else is
    // treated as a distribution and audited from scratch.
    std::vector<AuditLine> lines;
    json source;
    bool is_report = false;
    try {
        std::ifstream in(o.file);
        if (!in) throw FileNotFound(o.file);
        json parsed = json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (parsed.is_object() && parsed.contains("schema") && parsed["schema"] == kSchema)
            is_report = true;
        if (is_report) source = parsed;
    } catch (...) {
        is_report = false;
    }
    if (is_report) {
        lines = audit_report(source);
    } else {
        JointDist j = load_joint(o.file);
        lines = audit_joint(j, o.solver(), deep);
    }

    json options = o.echo();
    options["deep"] = deep;
    json doc = report_skeleton(o.file, options);
    json audit = json::array();
    std::string table;
    bool all_pass = true;
    for (const auto& line : lines) {
        audit.push_back(
            {{"invariant", line.invariant}, {"pass", line.pass}, {"residual", line.residual}});
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-34s %s  residual %.3g\n", line.invariant.c_str(),
                      line.pass ? "pass" : "FAIL", line.residual);
        table += buf;
        all_pass = all_pass && line.pass;
    }
    doc["results"]["audit"] = audit;
    emit(doc, o.format, table);
    return all_pass ? kExitOk : kExitAuditFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivariate information decompositions of discrete joint distributions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    CommonOpts dec_opts, def_opts, bw_opts, skr_opts, chk_opts;
    std::string measure = "broja", target = "Y";
    std::string kind = "output", direction = "z-covers-y";
    std::string bw_mode = "degradation", bw_direction = "z-covers-y";
    std::size_t restarts = 16;
    bool deep = false;

    auto* dec = app.add_subcommand("decompose", "compute a bivariate decomposition");
    add_common(dec, dec_opts);
    dec->add_option("--measure", measure, "which measure to run")
        ->check(CLI::IsMember({"broja", "output", "input", "all"}));
    dec->add_option("--target", target, "Y: UI(S;Y\\Z); S: swap the roles of S and Y")
        ->check(CLI::IsMember({"Y", "S"}));

    auto* def = app.add_subcommand("deficiency", "weighted output/input deficiency");
    add_common(def, def_opts);
    def->add_option("--kind", kind, "deficiency kind")->check(CLI::IsMember({"output", "input"}));
    def->add_option("--direction", direction, "which channel approximates which")
        ->check(CLI::IsMember({"z-covers-y", "y-covers-z"}));

    auto* bw = app.add_subcommand("blackwell", "exact channel-ordering test");
    add_common(bw, bw_opts);
    bw->add_option("--mode", bw_mode, "ordering to test")
        ->check(CLI::IsMember({"degradation", "input-degraded"}));
    bw->add_option("--direction", bw_direction, "which channel covers which")
        ->check(CLI::IsMember({"z-covers-y", "y-covers-z"}));

    auto* skr = app.add_subcommand("skr", "secret key rate bounds and assessments");
    add_common(skr, skr_opts);
    skr->add_option("--restarts", restarts, "intrinsic-information restarts");

    auto* chk = app.add_subcommand("check", "run the invariant audit");
    add_common(chk, chk_opts);
    chk->add_flag("--deep", deep, "also compare solvers against grid oracles");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dec->parsed()) return run_decompose(dec_opts, measure, target);
        if (def->parsed()) return run_deficiency(def_opts, kind, direction);
        if (bw->parsed()) return run_blackwell(bw_opts, bw_mode, bw_direction);
        if (skr->parsed()) return run_skr(skr_opts, restarts);
        if (chk->parsed()) return run_check(chk_opts, deep);
    } catch (const pid::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
