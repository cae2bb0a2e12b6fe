#include "pid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pid/measures.hpp"
#include "pid/rng.hpp"

namespace pid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridSmoothing = 1e-9;

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// All points of the k-simplex with coordinates that are multiples of 1/n.
std::vector<std::vector<double>> simplex_grid(std::size_t k, std::size_t n) {
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> counts(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos + 1 == k) {
            counts[pos] = left;
            std::vector<double> p(k);
            for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<double>(counts[i]) / n;
            points.push_back(std::move(p));
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, n);
    return points;
}

// Bound from the two-mixture argument: shrinking the optimum toward the
// uniform row by alpha and rounding to the grid costs at most
// 2 log2(1/(1-alpha)) with alpha = sqrt(step * row_len).
double deficiency_resolution_bound(double step, std::size_t row_len) {
    double alpha = std::sqrt(step * static_cast<double>(row_len));
    if (alpha >= 1.0) throw TooLarge("grid step too coarse for a meaningful bound");
    return 2.0 * std::log2(1.0 / (1.0 - alpha)) + std::log2(1.0 / (1.0 - kGridSmoothing));
}

}  // namespace

OracleResult grid_deficiency_oracle(const Prior& pi, const Channel& mu, const Channel& kappa,
                                    double step, DeficiencyKind kind) {
    if (step <= 0.0 || step > 0.5) throw TooLarge("step must be in (0, 0.5]");
    const std::size_t n = static_cast<std::size_t>(std::lround(1.0 / step));

    OracleResult res;
    if (kind == DeficiencyKind::Output) {
        if (mu.input() != kappa.input()) throw AlphabetMismatch("shared input alphabet required");
        const std::size_t nz = mu.n_out(), ny = kappa.n_out(), ns = mu.n_in();
        if (nz * (ny - 1) > 4)
            throw TooLarge("output oracle limited to |Z|*(|Y|-1) <= 4 free parameters");
        auto rows = simplex_grid(ny, n);
        res.resolution_bound = deficiency_resolution_bound(step, ny);

        // Odometer over one grid row choice per z.
        std::vector<std::size_t> pick(nz, 0);
        std::vector<double> lam(nz * ny);
        double best = kInf;
        while (true) {
            for (std::size_t z = 0; z < nz; ++z)
                for (std::size_t y = 0; y < ny; ++y)
                    lam[z * ny + y] = (1.0 - kGridSmoothing) * rows[pick[z]][y] +
                                      kGridSmoothing / static_cast<double>(ny);
            double obj = 0.0;
            for (std::size_t s = 0; s < ns && obj < kInf; ++s)
                for (std::size_t y = 0; y < ny; ++y) {
                    double w = pi[s] * kappa.at(s, y);
                    if (w == 0.0) continue;
                    double m = 0.0;
                    for (std::size_t z = 0; z < nz; ++z) m += mu.at(s, z) * lam[z * ny + y];
                    obj += w * std::log2(kappa.at(s, y) / m);
                }
            ++res.evaluations;
            best = std::min(best, std::max(obj, 0.0));
            std::size_t d = 0;
            while (d < nz && ++pick[d] == rows.size()) pick[d++] = 0;
            if (d == nz) break;
        }
        res.value = best;
    } else {
        if (mu.output() != kappa.output()) throw AlphabetMismatch("shared output alphabet required");
        const std::size_t ny = kappa.n_in(), nz = mu.n_in(), ns = mu.n_out();
        if (ny * (nz - 1) > 4)
            throw TooLarge("input oracle limited to |Y|*(|Z|-1) <= 4 free parameters");
        auto rows = simplex_grid(nz, n);
        res.resolution_bound = deficiency_resolution_bound(step, nz);
        // The objective is a sum of independent per-y terms, so the product
        // grid minimum is the sum of per-row minima.
        double total = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            double best = kInf;
            for (const auto& row : rows) {
                double obj = 0.0;
                for (std::size_t s = 0; s < ns; ++s) {
                    double t = kappa.at(y, s);
                    if (t == 0.0) continue;
                    double m = 0.0;
                    for (std::size_t z = 0; z < nz; ++z)
                        m += ((1.0 - kGridSmoothing) * row[z] +
                              kGridSmoothing / static_cast<double>(nz)) *
                             mu.at(z, s);
                    if (m <= 0.0) {
                        obj = kInf;
                        break;
                    }
                    obj += t * std::log2(t / m);
                }
                ++res.evaluations;
                best = std::min(best, std::max(obj, 0.0));
            }
            total += pi[y] * best;
        }
        res.value = total;
    }
    return res;
}

OracleResult grid_ui_oracle(const JointDist& j, double step) {
    if (step <= 0.0 || step > 0.5) throw TooLarge("step must be in (0, 0.5]");
    const std::size_t ns = j.ns(), ny = j.ny(), nz = j.nz();
    const std::size_t dim = (ny - 1) * (nz - 1);
    if (dim > 2) throw TooLarge("ui oracle limited to per-s fiber dimension <= 2");

    auto [pi, kappa] = forward_pair(j, Axis::S, Axis::Y);
    auto mu = forward_pair(j, Axis::S, Axis::Z).second;
    if (pi.size() != ns) throw NullSupport("S-marginal must have full support");

    // Kernel basis of the margin map: E_{ij} = (e_i - e_{i+1})(f_j - f_{j+1})^T.
    std::vector<std::vector<double>> basis;
    for (std::size_t i = 0; i + 1 < ny; ++i)
        for (std::size_t k = 0; k + 1 < nz; ++k) {
            std::vector<double> m(ny * nz, 0.0);
            m[i * nz + k] = 1.0;
            m[i * nz + k + 1] = -1.0;
            m[(i + 1) * nz + k] = -1.0;
            m[(i + 1) * nz + k + 1] = 1.0;
            basis.push_back(std::move(m));
        }

    // Feasible coefficient vectors per s, on a grid of the given step.
    // Interval endpoints are included so the list is never empty and every
    // feasible point has a listed point within `step`.
    std::vector<std::vector<std::vector<double>>> feasible(ns);
    std::vector<std::vector<double>> base(ns, std::vector<double>(ny * nz));
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t z = 0; z < nz; ++z)
                base[s][y * nz + z] = j.at(s, y, z) / pi[s];

    auto feasible_point = [&](const std::vector<double>& q) {
        for (double v : q)
            if (v < -1e-12) return false;
        return true;
    };
    auto apply = [&](std::size_t s, const std::vector<double>& c) {
        std::vector<double> q = base[s];
        for (std::size_t d = 0; d < dim; ++d)
            for (std::size_t cidx = 0; cidx < ny * nz; ++cidx)
                q[cidx] += c[d] * basis[d][cidx];
        return q;
    };

    for (std::size_t s = 0; s < ns; ++s) {
        if (dim == 0) {
            feasible[s].push_back({});
            continue;
        }
        std::vector<double> values;
        for (double v = -1.0; v <= 1.0 + 1e-12; v += step) values.push_back(v);
        if (dim == 1) {
            // Exact interval [lo, hi] of the single coefficient.
            double lo = -kInf, hi = kInf;
            for (std::size_t cidx = 0; cidx < ny * nz; ++cidx) {
                double k = basis[0][cidx], b = base[s][cidx];
                if (k > 0.0) lo = std::max(lo, -b / k);
                if (k < 0.0) hi = std::min(hi, b / -k);
            }
            if (lo > hi) lo = hi = 0.0;
            for (double v : values)
                if (v >= lo - 1e-12 && v <= hi + 1e-12) feasible[s].push_back({v});
            feasible[s].push_back({lo});
            feasible[s].push_back({hi});
        } else {
            for (double v0 : values)
                for (double v1 : values)
                    if (feasible_point(apply(s, {v0, v1}))) feasible[s].push_back({v0, v1});
            feasible[s].push_back({0.0, 0.0});
        }
    }

    double combos = 1.0;
    for (std::size_t s = 0; s < ns; ++s) combos *= static_cast<double>(feasible[s].size());
    if (combos > 4e7) throw TooLarge("fiber grid needs " + std::to_string(combos) + " points");

    // epsilon from ||Q - Q*||_1 <= 4 * step * dim; conditional-MI continuity
    // then bounds the gap to the true minimum.
    double eps = 2.0 * step * static_cast<double>(std::max<std::size_t>(dim, 1));
    OracleResult res;
    res.resolution_bound = 2.0 * binary_entropy(std::min(eps, 0.5)) +
                           eps * std::log2(static_cast<double>(std::min(ns, ny)));

    std::vector<std::size_t> pick(ns, 0);
    std::vector<std::vector<double>> q(ns);
    double best = kInf;
    while (true) {
        bool ok = true;
        for (std::size_t s = 0; s < ns; ++s) {
            q[s] = apply(s, feasible[s][pick[s]]);
            for (double& v : q[s]) v = std::max(v, 0.0);
        }
        if (ok) {
            // I_Q(S;Y|Z) with Q(s,y,z) = pi(s) q_s(y,z).
            double info = 0.0;
            for (std::size_t z = 0; z < nz; ++z) {
                double pz = 0.0;
                std::vector<double> psz(ns, 0.0), pyz(ny, 0.0);
                for (std::size_t s = 0; s < ns; ++s)
                    for (std::size_t y = 0; y < ny; ++y) {
                        double v = pi[s] * q[s][y * nz + z];
                        pz += v;
                        psz[s] += v;
                        pyz[y] += v;
                    }
                if (pz <= 0.0) continue;
                for (std::size_t s = 0; s < ns; ++s)
                    for (std::size_t y = 0; y < ny; ++y) {
                        double v = pi[s] * q[s][y * nz + z];
                        if (v > 0.0) info += v * std::log2(v * pz / (psz[s] * pyz[y]));
                    }
            }
            ++res.evaluations;
            best = std::min(best, std::max(info, 0.0));
        }
        std::size_t d = 0;
        while (d < ns && ++pick[d] == feasible[d].size()) pick[d++] = 0;
        if (d == ns) break;
    }
    res.value = best;
    return res;
}

JointDist random_joint(const InstanceSpec& spec) {
    Rng rng(spec.seed);
    const std::size_t n = spec.ns * spec.ny * spec.nz;
    std::vector<double> t(n);
    for (double& v : t) v = -std::log(rng.next_double());
    if (spec.sparsity > 0.0) {
        std::size_t zeros = std::min(n - 1, static_cast<std::size_t>(spec.sparsity * n));
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.next_index(i)]);
        for (std::size_t i = 0; i < zeros; ++i) t[order[i]] = 0.0;
    }
    return validate_joint(Alphabet::numbered(spec.ns), Alphabet::numbered(spec.ny),
                          Alphabet::numbered(spec.nz), std::move(t), 1e-7, /*renormalize=*/true);
}

Channel random_channel(std::size_t n_in, std::size_t n_out, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows(n_in, std::vector<double>(n_out));
    for (auto& row : rows) {
        double total = 0.0;
        for (double& v : row) {
            v = -std::log(rng.next_double());
            total += v;
        }
        for (double& v : row) v /= total;
    }
    return Channel(Alphabet::numbered(n_in), Alphabet::numbered(n_out), std::move(rows));
}

std::pair<double, double> risk_dominance_probe(const Prior& pi, const Channel& mu,
                                               const Channel& kappa, std::size_t n_problems,
                                               std::uint64_t seed) {
    if (mu.input() != kappa.input() || pi.alphabet() != mu.input())
        throw AlphabetMismatch("risk_dominance_probe: alphabet mismatch");
    Rng rng(seed);
    const std::size_t ns = pi.size();
    const std::size_t max_actions = kappa.n_out() + mu.n_out();
    double kappa_adv = -kInf, mu_adv = -kInf;
    for (std::size_t p = 0; p < n_problems; ++p) {
        std::size_t na;
        std::vector<std::vector<double>> loss;
        if (p == 0) {
            na = std::min(ns, max_actions);
            loss.assign(ns, std::vector<double>(na, 1.0));
            for (std::size_t s = 0; s < ns && s < na; ++s) loss[s][s] = 0.0;
        } else {
            na = 2 + rng.next_index(max_actions - 1);
            loss.assign(ns, std::vector<double>(na));
            double sup = 0.0;
            for (auto& row : loss)
                for (double& v : row) {
                    v = 2.0 * rng.next_double() - 1.0;
                    sup = std::max(sup, std::abs(v));
                }
            for (auto& row : loss)
                for (double& v : row) v /= sup;
        }
        DecisionProblem dp(pi, Alphabet::numbered(na, "a"), std::move(loss));
        double rk = optimal_risk(dp, kappa);
        double rm = optimal_risk(dp, mu);
        kappa_adv = std::max(kappa_adv, rm - rk);
        mu_adv = std::max(mu_adv, rk - rm);
    }
    // (max R(kappa)-R(mu), max R(mu)-R(kappa))
    return {mu_adv, kappa_adv};
}

}  // namespace pid
