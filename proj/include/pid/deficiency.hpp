#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pid/measures.hpp"
#include "pid/types.hpp"

namespace pid {

struct SolverOptions {
    double tol_objective = 1e-10;  // relative objective change threshold
    double tol_kkt = 1e-8;         // stationarity threshold
    std::size_t max_iterations = 100000;
    double smoothing_eps = 1e-12;  // initial interior smoothing mass
    std::uint64_t seed = 0;        // for randomized restarts
};

// Tolerance on the L1 gap below which a channel ordering is declared to hold.
inline constexpr double kOrderTol = 1e-9;
// Margin residual tolerance used by projections and polytope membership.
inline constexpr double kMarginTol = 1e-9;

struct DeficiencyResult {
    double value = 0.0;  // bits
    Channel randomizer;  // the optimal lambda (Z->Y) or lambda-bar (Y->Z)
    std::size_t iterations = 0;
    double kkt_residual = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;  // bits, one entry per iteration

    DeficiencyResult(Channel r) : randomizer(std::move(r)) {}
};

struct OrderCertificate {
    bool holds = false;
    std::optional<Channel> randomizer;
    double l1_gap = 0.0;  // minimized sum_s pi(s) ||kappa_s - (lambda o mu)_s||_1
};

// Weighted output deficiency (randomization at the output of mu):
//   min over lambda in M(Z;Y) of D(kappa || lambda o mu | pi).
// Multiplicative EM updates; the objective trace is monotone non-increasing
// and the returned randomizer attains `value`.
DeficiencyResult output_deficiency(const Prior& pi, const Channel& mu, const Channel& kappa,
                                   const SolverOptions& opts = {});

// Weighted input deficiency (randomization at the input of mu_bar):
//   min over lambda_bar in M(Y;Z) of D(kappa_bar || mu_bar o lambda_bar | pi_y).
// Decomposes into one reverse I-projection per y; subproblems are independent.
DeficiencyResult input_deficiency(const Prior& pi_y, const Channel& mu_bar,
                                  const Channel& kappa_bar, const SolverOptions& opts = {});

struct RiProjection {
    std::vector<double> weights;  // over hull points
    double divergence = 0.0;      // bits
    std::size_t iterations = 0;
    double kkt_residual = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;
};

// Reverse I-projection: minimizes D(target || sum_z w(z) hull[z]) over the
// weight simplex. Convex, so the value is global.
RiProjection ri_projection(const std::vector<double>& target,
                           const std::vector<std::vector<double>>& hull_points,
                           const SolverOptions& opts = {});

// Exact LP test for the degradation (Blackwell) preorder: does some
// lambda in M(Z;Y) give kappa = lambda o mu? Decided on the L1 gap.
OrderCertificate degradation_test(const Channel& mu, const Channel& kappa, const Prior& pi,
                                  double order_tol = kOrderTol);

// Mirror test with the randomizer at the input: kappa_bar = mu_bar o lambda_bar.
OrderCertificate input_degradation_test(const Channel& mu_bar, const Channel& kappa_bar,
                                        const Prior& pi_y, double order_tol = kOrderTol);

// Best-effort search for a decision problem witnessing that kappa is strictly
// preferable to mu somewhere (callers should first check that
// degradation_test(mu, kappa) fails). A returned problem is verified:
// optimal_risk(dp, kappa) < optimal_risk(dp, mu) strictly.
std::optional<DecisionProblem> witness_loss_search(const Prior& pi, const Channel& mu,
                                                   const Channel& kappa, std::size_t budget = 64,
                                                   std::uint64_t seed = 0);

}  // namespace pid
