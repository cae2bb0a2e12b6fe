#include "pid/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pid/measures.hpp"

namespace pid {

namespace {

// Evaluates the common max/min structure shared by the output and input
// decompositions: d1 covers the direction "Z approximates Y", d2 the reverse.
Decomposition from_deficiencies(const JointDist& j, double d1, double d2, MeasureTag tag,
                                bool converged, std::size_t iterations) {
    double a = mutual_info(j, Axis::S, Axis::Y);
    double b = mutual_info(j, Axis::S, Axis::Z);
    double y_given_z = cond_mutual_info(j, Axis::S, Axis::Y, Axis::Z);
    double z_given_y = cond_mutual_info(j, Axis::S, Axis::Z, Axis::Y);
    double ui_y = std::max(d1, d2 + a - b);
    double ui_z = std::max(d2, d1 + b - a);
    double si = std::min(a - d1, b - d2);
    double ci = std::min(y_given_z - d1, z_given_y - d2);
    return make_decomposition(ui_y, ui_z, si, ci, tag, converged, iterations);
}

}  // namespace

OutputDecomposition decompose_output(const JointDist& j, const SolverOptions& opts,
                                     bool drop_null) {
    JointDist work = drop_null ? prune_null_symbols(j, Axis::S) : j;
    auto [pi, kappa] = forward_pair(work, Axis::S, Axis::Y);
    auto mu = forward_pair(work, Axis::S, Axis::Z).second;
    DeficiencyResult d1 = output_deficiency(pi, mu, kappa, opts);
    DeficiencyResult d2 = output_deficiency(pi, kappa, mu, opts);
    Decomposition dec =
        from_deficiencies(work, d1.value, d2.value, MeasureTag::OutputDeficiency,
                          d1.converged && d2.converged, std::max(d1.iterations, d2.iterations));
    return OutputDecomposition{dec, std::move(d1), std::move(d2)};
}

InputDecomposition decompose_input(const JointDist& j, const SolverOptions& opts, bool drop_null) {
    JointDist work = j;
    if (drop_null) {
        work = prune_null_symbols(work, Axis::Y);
        work = prune_null_symbols(work, Axis::Z);
    }
    auto [pi_y, kappa_bar] = forward_pair(work, Axis::Y, Axis::S);
    auto [pi_z, mu_bar] = forward_pair(work, Axis::Z, Axis::S);
    DeficiencyResult d1 = input_deficiency(pi_y, mu_bar, kappa_bar, opts);
    DeficiencyResult d2 = input_deficiency(pi_z, kappa_bar, mu_bar, opts);
    Decomposition dec =
        from_deficiencies(work, d1.value, d2.value, MeasureTag::InputDeficiency,
                          d1.converged && d2.converged, std::max(d1.iterations, d2.iterations));
    return InputDecomposition{dec, std::move(d1), std::move(d2)};
}

ProjectedInfo projected_information(const JointDist& j, ProjectionDirection dir,
                                    const SolverOptions& opts, bool drop_null) {
    JointDist work = j;
    if (drop_null) {
        work = prune_null_symbols(work, Axis::Y);
        work = prune_null_symbols(work, Axis::Z);
    }
    Axis projected = dir == ProjectionDirection::YontoZ ? Axis::Y : Axis::Z;
    Axis onto = dir == ProjectionDirection::YontoZ ? Axis::Z : Axis::Y;
    auto [pi_p, kappa_bar] = forward_pair(work, projected, Axis::S);
    auto mu_bar = forward_pair(work, onto, Axis::S).second;
    Prior pi_s = work.marginal(Axis::S);

    std::vector<std::vector<double>> hull(mu_bar.n_in());
    for (std::size_t z = 0; z < mu_bar.n_in(); ++z) hull[z] = mu_bar.row(z);

    ProjectedInfo info;
    for (std::size_t y = 0; y < kappa_bar.n_in(); ++y) {
        RiProjection proj = ri_projection(kappa_bar.row(y), hull, opts);
        // E_{s ~ kappa_bar_y} log( Q_y(s) / pi_S(s) ), with Q_y the projection.
        std::vector<double> qy(pi_s.size(), 0.0);
        for (std::size_t z = 0; z < hull.size(); ++z)
            for (std::size_t s = 0; s < pi_s.size(); ++s)
                qy[s] += proj.weights[z] * hull[z][s];
        double term = 0.0;
        for (std::size_t s = 0; s < pi_s.size(); ++s) {
            double t = kappa_bar.at(y, s);
            if (t == 0.0) continue;
            if (qy[s] <= 0.0 || pi_s[s] <= 0.0) {
                term = -std::numeric_limits<double>::infinity();
                break;
            }
            term += t * std::log2(qy[s] / pi_s[s]);
        }
        info.value += pi_p[y] * term;
        info.per_y_projections.emplace_back(std::move(proj.weights), proj.divergence);
    }
    return info;
}

double si_red(const JointDist& j, const SolverOptions& opts, bool drop_null) {
    double a = projected_information(j, ProjectionDirection::YontoZ, opts, drop_null).value;
    double b = projected_information(j, ProjectionDirection::ZontoY, opts, drop_null).value;
    return std::min(a, b);
}

}  // namespace pid
