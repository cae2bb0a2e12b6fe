#include "pid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace pid::lp {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;

struct Tableau {
    std::size_t m, n;              // constraint rows, total columns (without rhs)
    std::vector<double> a;         // m x n, row-major
    std::vector<double> rhs;       // m
    std::vector<std::size_t> basis;  // basic variable per row

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double piv = at(pr, pc);
        for (std::size_t j = 0; j < n; ++j) at(pr, j) /= piv;
        rhs[pr] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == pr) continue;
            double f = at(i, pc);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) at(i, j) -= f * at(pr, j);
            rhs[i] -= f * rhs[pr];
            at(i, pc) = 0.0;
        }
        at(pr, pc) = 1.0;
        basis[pr] = pc;
    }
};

// Runs simplex iterations for the given cost vector. Columns with
// allowed[j]==false are never chosen as entering. Returns the objective.
double run(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed) {
    const std::size_t iter_cap = 50000 + 200 * (t.m + t.n);
    for (std::size_t iter = 0; iter < iter_cap; ++iter) {
        // Reduced costs from scratch; sizes here are tiny.
        std::size_t entering = t.n;
        for (std::size_t j = 0; j < t.n; ++j) {
            if (!allowed[j]) continue;
            double r = cost[j];
            for (std::size_t i = 0; i < t.m; ++i) {
                double cb = cost[t.basis[i]];
                if (cb != 0.0) r -= cb * t.at(i, j);
            }
            if (r < -kCostTol) {  // Bland: first improving index
                entering = j;
                break;
            }
        }
        if (entering == t.n) {
            double obj = 0.0;
            for (std::size_t i = 0; i < t.m; ++i) obj += cost[t.basis[i]] * t.rhs[i];
            return obj;
        }
        std::size_t leave_row = t.m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.m; ++i) {
            double aij = t.at(i, entering);
            if (aij <= kPivotTol) continue;
            double ratio = t.rhs[i] / aij;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 &&
                 (leave_row == t.m || t.basis[i] < t.basis[leave_row]))) {
                best_ratio = ratio;
                leave_row = i;
            }
        }
        if (leave_row == t.m) throw LpFailure("unbounded");
        t.pivot(leave_row, entering);
    }
    throw LpFailure("iteration cap reached");
}

}  // namespace

Solution solve_min(const std::vector<double>& c, const std::vector<Constraint>& constraints) {
    const std::size_t n_struct = c.size();
    const std::size_t m = constraints.size();
    for (const auto& con : constraints)
        if (con.coeffs.size() != n_struct) throw LpFailure("constraint width mismatch");

    // Count extra columns: one slack/surplus per inequality, one artificial
    // per Ge/Eq row (after flipping rows so rhs >= 0).
    struct RowPlan {
        double sign;  // applied to the row
        Rel rel;
        bool needs_artificial;
    };
    std::vector<RowPlan> plan(m);
    std::size_t n_slack = 0, n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        Rel rel = constraints[i].rel;
        double sign = 1.0;
        if (constraints[i].rhs < 0.0) {
            sign = -1.0;
            rel = rel == Rel::Le ? Rel::Ge : (rel == Rel::Ge ? Rel::Le : Rel::Eq);
        }
        plan[i] = {sign, rel, rel != Rel::Le};
        if (rel != Rel::Eq) ++n_slack;
        if (rel != Rel::Le) ++n_art;
    }

    Tableau t;
    t.m = m;
    t.n = n_struct + n_slack + n_art;
    t.a.assign(t.m * t.n, 0.0);
    t.rhs.assign(m, 0.0);
    t.basis.assign(m, 0);

    std::size_t slack_col = n_struct;
    std::size_t art_col = n_struct + n_slack;
    std::vector<bool> is_artificial(t.n, false);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n_struct; ++j)
            t.at(i, j) = plan[i].sign * constraints[i].coeffs[j];
        t.rhs[i] = plan[i].sign * constraints[i].rhs;
        if (plan[i].rel == Rel::Le) {
            t.at(i, slack_col) = 1.0;
            t.basis[i] = slack_col++;
        } else if (plan[i].rel == Rel::Ge) {
            t.at(i, slack_col) = -1.0;  // surplus
            ++slack_col;
            t.at(i, art_col) = 1.0;
            is_artificial[art_col] = true;
            t.basis[i] = art_col++;
        } else {
            t.at(i, art_col) = 1.0;
            is_artificial[art_col] = true;
            t.basis[i] = art_col++;
        }
    }

    std::vector<bool> all_allowed(t.n, true);
    if (n_art > 0) {
        std::vector<double> phase1_cost(t.n, 0.0);
        for (std::size_t j = 0; j < t.n; ++j)
            if (is_artificial[j]) phase1_cost[j] = 1.0;
        double infeas = run(t, phase1_cost, all_allowed);
        if (infeas > 1e-7) throw LpFailure("infeasible");
        // Pivot any artificial still in the basis out where possible; a row
        // without a nonzero structural entry is redundant and stays as-is.
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_artificial[t.basis[i]]) continue;
            for (std::size_t j = 0; j < n_struct + n_slack; ++j) {
                if (std::abs(t.at(i, j)) > kPivotTol) {
                    t.pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> phase2_cost(t.n, 0.0);
    for (std::size_t j = 0; j < n_struct; ++j) phase2_cost[j] = c[j];
    std::vector<bool> allowed(t.n, true);
    for (std::size_t j = 0; j < t.n; ++j)
        if (is_artificial[j]) allowed[j] = false;
    double obj = run(t, phase2_cost, allowed);

    Solution sol;
    sol.x.assign(n_struct, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < n_struct) sol.x[t.basis[i]] = t.rhs[i];
    sol.objective = obj;
    return sol;
}

}  // namespace pid::lp
