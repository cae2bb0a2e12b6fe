#pragma once

#include <cstdint>

#include "pid/broja.hpp"
#include "pid/deficiency.hpp"
#include "pid/types.hpp"

namespace pid {

enum class ActiveAdversary { ZeroRate, EqualsTwoWayRate, Indeterminate };

const char* active_adversary_name(ActiveAdversary a);

struct SkrReport {
    double lower_trivial = 0.0;      // bits
    double upper_trivial = 0.0;      // bits
    double one_way_upper_ui = 0.0;   // bits, UI(S;Y\Z)
    double intrinsic_upper = 0.0;    // bits, heuristic upper estimate
    bool simulatable_y_by_z = false;  // sim_S(Z->Y)
    bool simulatable_s_by_z = false;  // sim_Y(Z->S)
    ActiveAdversary active_adversary = ActiveAdversary::Indeterminate;
};

// Eq.-(17)-style trivial bounds on the two-way secret key rate:
//   max{I(S;Y)-I(S;Z), I(Y;S)-I(Y;Z)} (clamped at 0) and
//   min{I(S;Y), I(S;Y|Z)}.
std::pair<double, double> skr_trivial_bounds(const JointDist& j);

// The minimum-synergy unique information upper-bounds the one-way rate.
double one_way_skr_upper(const JointDist& j, const SolverOptions& opts = {});

// Heuristic upper estimate of min over channels Z->Z' of I(S;Y|Z') with
// |Z'| = |Z|: deterministic-channel enumeration plus seeded multiplicative
// descent restarts. Any feasible channel gives a valid upper bound.
double intrinsic_information(const JointDist& j, std::size_t restarts = 16,
                             const SolverOptions& opts = {});

enum class SimDirection {
    ZtoY,  // Y simulatable by Z w.r.t. S
    ZtoS,  // S simulatable by Z w.r.t. Y
};

bool simulatability(const JointDist& j, SimDirection dir, double order_tol = kOrderTol);

// All-or-nothing assessment for an active adversary: ZeroRate when either
// UI(S;Y\Z) or UI(Y;S\Z) vanishes, EqualsTwoWayRate otherwise (the value of
// the two-way rate itself is not computed).
ActiveAdversary active_adversary_assessment(const JointDist& j, const SolverOptions& opts = {});

SkrReport skr_report(const JointDist& j, std::size_t restarts = 16,
                     const SolverOptions& opts = {});

}  // namespace pid
