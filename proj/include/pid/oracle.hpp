#pragma once

#include <cstdint>

#include "pid/types.hpp"

namespace pid {

// Brute-force references for validating the optimizers on tiny instances.
// Oracles only ever evaluate feasible points, so their value upper-bounds
// the true minimum; resolution_bound is a conservative guarantee on how far
// above it they can sit.

struct OracleResult {
    double value = 0.0;             // bits
    double resolution_bound = 0.0;  // |oracle - truth| <= bound, guaranteed
    std::size_t evaluations = 0;
};

enum class DeficiencyKind { Output, Input };

// Exhaustive grid over the product of randomizer-row simplices. Enforces
// #free parameters <= 4 and throws TooLarge beyond that.
OracleResult grid_deficiency_oracle(const Prior& pi, const Channel& mu, const Channel& kappa,
                                    double step, DeficiencyKind kind);

// Exhaustive grid over the margin-polytope fibers (kernel coefficients of
// the per-s margin map), minimizing I_Q(S;Y|Z). Enforces per-s fiber
// dimension <= 2 and a total evaluation budget.
OracleResult grid_ui_oracle(const JointDist& j, double step);

struct InstanceSpec {
    std::size_t ns = 2, ny = 2, nz = 2;
    std::uint64_t seed = 0;
    double sparsity = 0.0;  // fraction of zero atoms
};

JointDist random_joint(const InstanceSpec& spec);
Channel random_channel(std::size_t n_in, std::size_t n_out, std::uint64_t seed);

// Largest observed risk advantages over random bounded-loss decision
// problems: (max R(kappa)-R(mu), max R(mu)-R(kappa)).
std::pair<double, double> risk_dominance_probe(const Prior& pi, const Channel& mu,
                                               const Channel& kappa, std::size_t n_problems,
                                               std::uint64_t seed);

}  // namespace pid
