#pragma once

#include <vector>

#include "pid/decomposition.hpp"
#include "pid/deficiency.hpp"
#include "pid/types.hpp"

namespace pid {

// Decomposition built from the two weighted output deficiencies
// delta_o(mu,kappa) and delta_o(kappa,mu).
struct OutputDecomposition {
    Decomposition decomposition;
    DeficiencyResult z_covers_y;  // delta_o(mu, kappa)
    DeficiencyResult y_covers_z;  // delta_o(kappa, mu)
};

OutputDecomposition decompose_output(const JointDist& j, const SolverOptions& opts = {},
                                     bool drop_null = false);

// Decomposition built from the two weighted input deficiencies over the
// reverse channels kappa_bar = P_{S|Y} and mu_bar = P_{S|Z}.
struct InputDecomposition {
    Decomposition decomposition;
    DeficiencyResult z_covers_y;  // delta_i(mu_bar, kappa_bar)
    DeficiencyResult y_covers_z;  // delta_i(kappa_bar, mu_bar)
};

InputDecomposition decompose_input(const JointDist& j, const SolverOptions& opts = {},
                                   bool drop_null = false);

enum class ProjectionDirection { YontoZ, ZontoY };

struct ProjectedInfo {
    double value = 0.0;  // bits
    // One reverse I-projection per conditioning symbol: weights over the
    // other variable's reverse-channel rows, plus the divergence.
    std::vector<std::pair<std::vector<double>, double>> per_y_projections;
};

// Projected information I_S(Y onto Z) (or the mirrored direction).
ProjectedInfo projected_information(const JointDist& j, ProjectionDirection dir,
                                    const SolverOptions& opts = {}, bool drop_null = false);

// SI_red = min of the two projected informations.
double si_red(const JointDist& j, const SolverOptions& opts = {}, bool drop_null = false);

}  // namespace pid
