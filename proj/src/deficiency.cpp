#include "pid/deficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pid/lp.hpp"
#include "pid/rng.hpp"

namespace pid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2e = 1.4426950408889634;  // 1/ln 2

// Objective of the output-deficiency program in bits for a given lambda.
double output_objective(const Prior& pi, const Channel& mu, const Channel& kappa,
                        const std::vector<double>& lam, std::size_t nz, std::size_t ny) {
    double obj = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s) {
        for (std::size_t y = 0; y < ny; ++y) {
            double w = pi[s] * kappa.at(s, y);
            if (w == 0.0) continue;
            double m = 0.0;
            for (std::size_t z = 0; z < nz; ++z) m += mu.at(s, z) * lam[z * ny + y];
            if (m == 0.0) return kInf;
            obj += w * std::log2(kappa.at(s, y) / m);
        }
    }
    return std::max(obj, 0.0);
}

}  // namespace

DeficiencyResult output_deficiency(const Prior& pi, const Channel& mu, const Channel& kappa,
                                   const SolverOptions& opts) {
    if (mu.input() != kappa.input())
        throw AlphabetMismatch("output_deficiency: channels need a common input alphabet");
    if (pi.alphabet() != mu.input())
        throw AlphabetMismatch("output_deficiency: prior alphabet mismatch");
    const std::size_t ns = pi.size(), nz = mu.n_out(), ny = kappa.n_out();

    // lambda starts at the uniform channel, which keeps every mixture
    // component positive, so the objective is finite from the first step.
    std::vector<double> lam(nz * ny, 1.0 / static_cast<double>(ny));
    std::vector<double> mix(ns * ny, 0.0);  // (lambda o mu)_s(y)
    auto refresh_mix = [&]() {
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t y = 0; y < ny; ++y) {
                double m = 0.0;
                for (std::size_t z = 0; z < nz; ++z) m += mu.at(s, z) * lam[z * ny + y];
                mix[s * ny + y] = m;
            }
    };

    DeficiencyResult res{Channel::uniform_channel(mu.output(), kappa.output())};
    refresh_mix();
    double obj = output_objective(pi, mu, kappa, lam, nz, ny);
    res.objective_trace.push_back(obj);

    std::vector<double> g(nz * ny, 0.0);
    std::size_t stable = 0;
    for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
        // g_z(y) = sum_s pi(s) kappa_s(y) mu_s(z) / mix_s(y); EM step is
        // lambda_z(y) <- lambda_z(y) g_z(y) / (sum_y lambda_z(y) g_z(y)).
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t y = 0; y < ny; ++y) {
                double w = pi[s] * kappa.at(s, y);
                if (w == 0.0) continue;
                double m = mix[s * ny + y];
                if (m <= 0.0) continue;
                double ratio = w / m;
                for (std::size_t z = 0; z < nz; ++z) {
                    double muz = mu.at(s, z);
                    if (muz != 0.0) g[z * ny + y] += ratio * muz;
                }
            }
        double kkt = 0.0;
        for (std::size_t z = 0; z < nz; ++z) {
            double cz = 0.0;
            for (std::size_t y = 0; y < ny; ++y) cz += lam[z * ny + y] * g[z * ny + y];
            if (cz <= 0.0) continue;  // output z unused by mu under pi
            for (std::size_t y = 0; y < ny; ++y) {
                double gzy = g[z * ny + y];
                kkt = std::max(kkt, lam[z * ny + y] * std::abs(gzy - cz));
                kkt = std::max(kkt, std::max(gzy - cz, 0.0));
                lam[z * ny + y] *= gzy / cz;
            }
            // Renormalize against drift.
            double total = 0.0;
            for (std::size_t y = 0; y < ny; ++y) total += lam[z * ny + y];
            for (std::size_t y = 0; y < ny; ++y) lam[z * ny + y] /= total;
        }
        refresh_mix();
        double next = output_objective(pi, mu, kappa, lam, nz, ny);
        res.objective_trace.push_back(next);
        res.iterations = iter;
        res.kkt_residual = kkt;
        double rel = std::abs(obj - next) / std::max(1.0, std::abs(obj));
        obj = next;
        if (kkt <= opts.tol_kkt) {
            res.converged = true;
            break;
        }
        stable = rel <= opts.tol_objective ? stable + 1 : 0;
        if (stable >= 5) break;  // plateau without stationarity: not converged
    }

    res.value = obj;
    std::vector<std::vector<double>> rows(nz);
    for (std::size_t z = 0; z < nz; ++z) {
        rows[z].assign(lam.begin() + static_cast<std::ptrdiff_t>(z * ny),
                       lam.begin() + static_cast<std::ptrdiff_t>((z + 1) * ny));
    }
    res.randomizer = Channel(mu.output(), kappa.output(), std::move(rows));
    return res;
}

RiProjection ri_projection(const std::vector<double>& target,
                           const std::vector<std::vector<double>>& hull_points,
                           const SolverOptions& opts) {
    if (hull_points.empty()) throw DimensionMismatch("ri_projection: need at least one hull point");
    const std::size_t nx = target.size();
    const std::size_t k = hull_points.size();
    for (const auto& p : hull_points)
        if (p.size() != nx) throw AlphabetMismatch("ri_projection: hull point length mismatch");

    RiProjection res;
    res.weights.assign(k, 1.0 / static_cast<double>(k));

    // Support check: mass of the target outside the union support of the hull
    // makes the divergence infinite for every weight vector.
    for (std::size_t x = 0; x < nx; ++x) {
        if (target[x] <= 0.0) continue;
        bool covered = false;
        for (std::size_t z = 0; z < k; ++z)
            if (hull_points[z][x] > 0.0) {
                covered = true;
                break;
            }
        if (!covered) {
            res.divergence = kInf;
            res.converged = true;  // exact: the minimum is +infinity
            res.objective_trace.push_back(kInf);
            return res;
        }
    }

    std::vector<double> m(nx, 0.0);
    auto refresh = [&]() {
        std::fill(m.begin(), m.end(), 0.0);
        for (std::size_t z = 0; z < k; ++z) {
            double w = res.weights[z];
            if (w == 0.0) continue;
            for (std::size_t x = 0; x < nx; ++x) m[x] += w * hull_points[z][x];
        }
    };
    auto objective = [&]() {
        double d = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            if (target[x] == 0.0) continue;
            if (m[x] <= 0.0) return kInf;
            d += target[x] * std::log2(target[x] / m[x]);
        }
        return std::max(d, 0.0);
    };

    refresh();
    double obj = objective();
    res.objective_trace.push_back(obj);
    std::vector<double> g(k, 0.0);
    std::size_t stable = 0;
    for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
        // g_z = sum_x target(x) hull_z(x) / m(x); fixed point has g_z = 1 on
        // the support of w.
        double kkt = 0.0;
        for (std::size_t z = 0; z < k; ++z) {
            double gz = 0.0;
            for (std::size_t x = 0; x < nx; ++x) {
                if (target[x] == 0.0 || hull_points[z][x] == 0.0) continue;
                gz += target[x] * hull_points[z][x] / m[x];
            }
            g[z] = gz;
            kkt = std::max(kkt, res.weights[z] * std::abs(gz - 1.0));
            kkt = std::max(kkt, std::max(gz - 1.0, 0.0));
        }
        double total = 0.0;
        for (std::size_t z = 0; z < k; ++z) {
            res.weights[z] *= g[z];
            total += res.weights[z];
        }
        for (std::size_t z = 0; z < k; ++z) res.weights[z] /= total;
        refresh();
        double next = objective();
        res.objective_trace.push_back(next);
        res.iterations = iter;
        res.kkt_residual = kkt;
        double rel = std::abs(obj - next) / std::max(1.0, std::abs(obj));
        obj = next;
        if (kkt <= opts.tol_kkt) {
            res.converged = true;
            break;
        }
        stable = rel <= opts.tol_objective ? stable + 1 : 0;
        if (stable >= 5) break;
    }
    res.divergence = obj;
    return res;
}

DeficiencyResult input_deficiency(const Prior& pi_y, const Channel& mu_bar,
                                  const Channel& kappa_bar, const SolverOptions& opts) {
    if (mu_bar.output() != kappa_bar.output())
        throw AlphabetMismatch("input_deficiency: channels need a common output alphabet");
    if (pi_y.alphabet() != kappa_bar.input())
        throw AlphabetMismatch("input_deficiency: prior must live on kappa_bar's input");
    const std::size_t ny = kappa_bar.n_in(), nz = mu_bar.n_in();

    std::vector<std::vector<double>> hull(nz);
    for (std::size_t z = 0; z < nz; ++z) hull[z] = mu_bar.row(z);

    DeficiencyResult res{Channel::uniform_channel(kappa_bar.input(), mu_bar.input())};
    std::vector<std::vector<double>> rows(ny);
    std::vector<std::vector<double>> traces(ny);
    res.converged = true;
    res.value = 0.0;
    std::size_t longest = 0;
    for (std::size_t y = 0; y < ny; ++y) {
        RiProjection proj = ri_projection(kappa_bar.row(y), hull, opts);
        if (pi_y[y] > 0.0) {
            res.value += pi_y[y] * proj.divergence;
            res.converged = res.converged && proj.converged;
            res.kkt_residual = std::max(res.kkt_residual, proj.kkt_residual);
        }
        res.iterations = std::max(res.iterations, proj.iterations);
        rows[y] = std::move(proj.weights);
        traces[y] = std::move(proj.objective_trace);
        longest = std::max(longest, traces[y].size());
    }
    // Combined trace: pad each per-y trace with its last value and take the
    // weighted sum, which stays monotone because every summand is.
    res.objective_trace.assign(longest, 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
        if (pi_y[y] == 0.0 || traces[y].empty()) continue;
        for (std::size_t i = 0; i < longest; ++i) {
            double v = i < traces[y].size() ? traces[y][i] : traces[y].back();
            res.objective_trace[i] += pi_y[y] * v;
        }
    }
    res.randomizer = Channel(kappa_bar.input(), mu_bar.input(), std::move(rows));
    return res;
}

namespace {

OrderCertificate l1_order_lp(const Channel& mu, const Channel& kappa, const Prior& weight,
                             bool randomizer_at_input, double order_tol) {
    // Variables: lambda (a x b) then t (n_in(kappa) x n_out(kappa)).
    // Output form:  (lambda o mu)_s(y) = sum_z mu_s(z) lambda_z(y),  lambda: nz x ny
    // Input form:   (mu o lambda)_y(s) = sum_z lambda_y(z) mu_z(s),  lambda: ny x nz
    const std::size_t n_rows_k = kappa.n_in(), n_cols_k = kappa.n_out();
    const std::size_t a = randomizer_at_input ? kappa.n_in() : mu.n_out();
    const std::size_t b = randomizer_at_input ? mu.n_in() : kappa.n_out();
    const std::size_t n_lam = a * b, n_t = n_rows_k * n_cols_k;

    std::vector<double> cost(n_lam + n_t, 0.0);
    for (std::size_t i = 0; i < n_rows_k; ++i)
        for (std::size_t j = 0; j < n_cols_k; ++j) cost[n_lam + i * n_cols_k + j] = weight[i];

    std::vector<lp::Constraint> cons;
    // Row-stochasticity of lambda.
    for (std::size_t r = 0; r < a; ++r) {
        lp::Constraint c{std::vector<double>(n_lam + n_t, 0.0), lp::Rel::Eq, 1.0};
        for (std::size_t cidx = 0; cidx < b; ++cidx) c.coeffs[r * b + cidx] = 1.0;
        cons.push_back(std::move(c));
    }
    // t_{i,j} >= +/- (kappa_i(j) - model_i(j)).
    for (std::size_t i = 0; i < n_rows_k; ++i)
        for (std::size_t j = 0; j < n_cols_k; ++j) {
            std::vector<double> model(n_lam, 0.0);
            if (randomizer_at_input) {
                // model_y(s) = sum_z lambda[y][z] mu_z(s), here i=y, j=s
                for (std::size_t z = 0; z < b; ++z) model[i * b + z] = mu.at(z, j);
            } else {
                // model_s(y) = sum_z mu_s(z) lambda[z][y], here i=s, j=y
                for (std::size_t z = 0; z < a; ++z) model[z * b + j] = mu.at(i, z);
            }
            double target = kappa.at(i, j);
            lp::Constraint c1{std::vector<double>(n_lam + n_t, 0.0), lp::Rel::Ge, target};
            lp::Constraint c2{std::vector<double>(n_lam + n_t, 0.0), lp::Rel::Ge, -target};
            for (std::size_t v = 0; v < n_lam; ++v) {
                c1.coeffs[v] = model[v];
                c2.coeffs[v] = -model[v];
            }
            c1.coeffs[n_lam + i * n_cols_k + j] = 1.0;
            c2.coeffs[n_lam + i * n_cols_k + j] = 1.0;
            cons.push_back(std::move(c1));
            cons.push_back(std::move(c2));
        }

    lp::Solution sol = lp::solve_min(cost, cons);

    OrderCertificate cert;
    cert.l1_gap = std::max(sol.objective, 0.0);
    cert.holds = cert.l1_gap <= order_tol;
    std::vector<std::vector<double>> rows(a, std::vector<double>(b, 0.0));
    for (std::size_t r = 0; r < a; ++r) {
        double total = 0.0;
        for (std::size_t cidx = 0; cidx < b; ++cidx) {
            rows[r][cidx] = std::max(sol.x[r * b + cidx], 0.0);
            total += rows[r][cidx];
        }
        if (total <= 0.0) {
            rows[r].assign(b, 1.0 / static_cast<double>(b));
        } else {
            for (double& v : rows[r]) v /= total;
        }
    }
    const Alphabet& in = randomizer_at_input ? kappa.input() : mu.output();
    const Alphabet& out = randomizer_at_input ? mu.input() : kappa.output();
    cert.randomizer = Channel(in, out, std::move(rows));
    return cert;
}

}  // namespace

OrderCertificate degradation_test(const Channel& mu, const Channel& kappa, const Prior& pi,
                                  double order_tol) {
    if (mu.input() != kappa.input())
        throw AlphabetMismatch("degradation_test: channels need a common input alphabet");
    if (pi.alphabet() != mu.input())
        throw AlphabetMismatch("degradation_test: prior alphabet mismatch");
    return l1_order_lp(mu, kappa, pi, /*randomizer_at_input=*/false, order_tol);
}

OrderCertificate input_degradation_test(const Channel& mu_bar, const Channel& kappa_bar,
                                        const Prior& pi_y, double order_tol) {
    if (mu_bar.output() != kappa_bar.output())
        throw AlphabetMismatch("input_degradation_test: channels need a common output alphabet");
    if (pi_y.alphabet() != kappa_bar.input())
        throw AlphabetMismatch("input_degradation_test: prior must live on kappa_bar's input");
    return l1_order_lp(mu_bar, kappa_bar, pi_y, /*randomizer_at_input=*/true, order_tol);
}

std::optional<DecisionProblem> witness_loss_search(const Prior& pi, const Channel& mu,
                                                   const Channel& kappa, std::size_t budget,
                                                   std::uint64_t seed) {
    if (mu.input() != kappa.input() || pi.alphabet() != mu.input())
        throw AlphabetMismatch("witness_loss_search: alphabet mismatch");
    const std::size_t ns = pi.size();
    const Alphabet actions = kappa.output();  // A = Y
    const std::size_t na = actions.size();

    auto gap = [&](const std::vector<std::vector<double>>& loss) {
        DecisionProblem dp(pi, actions, loss);
        return optimal_risk(dp, mu) - optimal_risk(dp, kappa);
    };

    Rng rng(seed);
    const double levels[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};

    std::vector<std::vector<double>> best_loss;
    double best_gap = 0.0;
    for (std::size_t trial = 0; trial < budget; ++trial) {
        std::vector<std::vector<double>> loss(ns, std::vector<double>(na, 0.0));
        if (trial == 0) {
            // 0-1 loss seed: penalize mismatched indices.
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t a = 0; a < na; ++a) loss[s][a] = (s == a) ? 0.0 : 1.0;
        } else {
            for (auto& row : loss)
                for (double& v : row) v = 2.0 * rng.next_double() - 1.0;
        }
        double g = gap(loss);
        // Coordinate ascent over loss entries on a fixed level grid.
        for (int pass = 0; pass < 8; ++pass) {
            bool improved = false;
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t a = 0; a < na; ++a) {
                    double keep = loss[s][a];
                    double local_best = g;
                    double local_val = keep;
                    for (double cand : levels) {
                        if (cand == keep) continue;
                        loss[s][a] = cand;
                        double cg = gap(loss);
                        if (cg > local_best + 1e-12) {
                            local_best = cg;
                            local_val = cand;
                        }
                    }
                    loss[s][a] = local_val;
                    if (local_best > g) {
                        g = local_best;
                        improved = true;
                    }
                }
            if (!improved) break;
        }
        if (g > best_gap) {
            best_gap = g;
            best_loss = loss;
        }
        if (best_gap > 1e-9) break;  // found a clear witness
    }

    if (best_gap <= 0.0) return std::nullopt;
    DecisionProblem dp(pi, actions, best_loss);
    // Final verification by direct evaluation; the contract is strictness.
    if (!(optimal_risk(dp, kappa) < optimal_risk(dp, mu))) return std::nullopt;
    return dp;
}

}  // namespace pid
