#pragma once

#include <vector>

#include "pid/decomposition.hpp"
#include "pid/deficiency.hpp"
#include "pid/measures.hpp"
#include "pid/types.hpp"

namespace pid {

// The polytope Delta_P of joints sharing P's (S,Y) and (S,Z) pair marginals,
// described through the reference margins.
struct MarginPolytope {
    JointDist reference;
    std::vector<std::vector<double>> sy_marginal;
    std::vector<std::vector<double>> sz_marginal;

    explicit MarginPolytope(JointDist p);

    // Largest absolute pair-margin mismatch of q against the reference.
    double margin_residual(const JointDist& q) const;
    bool membership(const JointDist& q, double tol = kMarginTol) const;
};

MarginPolytope polytope(const JointDist& j);

// The conditional-independence coupling P_S * P_{Y|S} * P_{Z|S}; always a
// member of Delta_P.
JointDist ci_coupling(const JointDist& j);

// I-projection of `base` onto the set of Y x Z distributions with the given
// marginals, by alternating marginal scaling. Throws NotConverged /
// InfeasibleSupport per the stated contract.
std::vector<std::vector<double>> ipf_projection(const std::vector<std::vector<double>>& base,
                                                const std::vector<double>& target_y_marginal,
                                                const std::vector<double>& target_z_marginal,
                                                const SolverOptions& opts = {});

enum class UiTarget {
    Y,  // UI(S;Y\Z), the default
    Z,  // UI(S;Z\Y)  (roles of Y and Z swapped)
    S,  // UI(Y;S\Z)  (roles of S and Y swapped)
};

struct BrojaResult {
    // Components of the problem actually solved: for UiTarget::Z the ui_y
    // field holds UI(S;Z\Y), for UiTarget::S it holds UI(Y;S\Z).
    Decomposition decomposition;
    JointDist q_star;     // the minimizer, in the solved problem's axis order
    Channel lambda_star;  // Z->Y
    std::vector<double> objective_trace;  // bits
    bool converged = false;
    std::size_t iterations = 0;
    double margin_residual = 0.0;
    double kkt_gap = 0.0;  // |last objective - I_{Q*}(S;Y|Z)|
    double cross_check_residual = 0.0;  // filled by decompose_broja

    BrojaResult(JointDist q, Channel lam) : q_star(std::move(q)), lambda_star(std::move(lam)) {}
};

// Minimum-synergy unique information by alternating minimization:
// alternates per-s I-projections onto the margin fibers with the closed-form
// conditional update of lambda.
BrojaResult ui_broja(const JointDist& j, UiTarget target = UiTarget::Y,
                     const SolverOptions& opts = {}, bool drop_null = false);

// Full minimum-synergy decomposition; cross-checks the derived UI(S;Z\Y)
// against an independent swapped-role solve and throws ConsistencyViolation
// when they disagree beyond 1e-4.
BrojaResult decompose_broja(const JointDist& j, const SolverOptions& opts = {},
                            bool drop_null = false);

// Constructive margin repair: moves Q from Delta_P to Delta_P' with
// ||Q - Q'||_1 <= 5 ||P - P'||_1.
JointDist transport_margins(const JointDist& q, const JointDist& p, const JointDist& p_prime);

// Product distribution on product alphabets.
JointDist tensor(const JointDist& j1, const JointDist& j2, std::size_t max_alphabet = 64);

}  // namespace pid
