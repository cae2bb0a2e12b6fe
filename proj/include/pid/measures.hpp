#pragma once

#include "pid/types.hpp"

namespace pid {

// All information quantities are in bits (base-2 logarithms), with the
// convention 0*log(0/q) = 0. Divergences return +infinity as a value, never
// an error, so optimizers can handle support mismatch themselves.

// Kullback-Leibler divergence between two raw mass vectors of equal length.
double kl_bits(const std::vector<double>& p, const std::vector<double>& q);

double kl(const Prior& p, const Prior& q);

// sum_s pi(s) * kl(kappa_s, lambda_s)
double kl_cond(const Channel& kappa, const Channel& lambda, const Prior& pi);

double entropy_bits(const std::vector<double>& p);

// Mutual information I(A;B) of a joint given as a matrix.
double mutual_info_bits(const std::vector<std::vector<double>>& joint);

double mutual_info(const JointDist& j, Axis a, Axis b);

// I(A; BC) where the pair (b, c) is treated as one composite variable.
double mutual_info_pair(const JointDist& j, Axis a);

double cond_mutual_info(const JointDist& j, Axis a, Axis b, Axis given);

// CoI(S;Y;Z) = I(S;Y) - I(S;Y|Z). Cross-checks the symmetric forms against
// each other to 1e-10 and throws ConsistencyViolation if they disagree.
double coinformation(const JointDist& j);

// Minimal expected loss over deterministic strategies output -> action:
// sum_z min_a sum_s pi(s) mu_s(z) loss(s, a).
double optimal_risk(const DecisionProblem& dp, const Channel& channel);

}  // namespace pid
