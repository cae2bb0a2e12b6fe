#include "pid/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pid/measures.hpp"
#include "pid/rng.hpp"

namespace pid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// I(S;Y|Z') for the joint obtained by passing Z through the channel T
// (nz x nzp, row-stochastic as a flat array).
double cmi_through(const JointDist& j, const std::vector<double>& t, std::size_t nzp) {
    const std::size_t ns = j.ns(), ny = j.ny(), nz = j.nz();
    double info = 0.0;
    std::vector<double> slice(ns * ny);
    for (std::size_t zp = 0; zp < nzp; ++zp) {
        double mass = 0.0;
        std::fill(slice.begin(), slice.end(), 0.0);
        for (std::size_t z = 0; z < nz; ++z) {
            double w = t[z * nzp + zp];
            if (w == 0.0) continue;
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t y = 0; y < ny; ++y) {
                    double v = w * j.at(s, y, z);
                    slice[s * ny + y] += v;
                    mass += v;
                }
        }
        if (mass <= 0.0) continue;
        std::vector<double> ps(ns, 0.0), py(ny, 0.0);
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t y = 0; y < ny; ++y) {
                ps[s] += slice[s * ny + y];
                py[y] += slice[s * ny + y];
            }
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t y = 0; y < ny; ++y) {
                double v = slice[s * ny + y];
                if (v > 0.0) info += v * std::log2(v * mass / (ps[s] * py[y]));
            }
    }
    return std::max(info, 0.0);
}

// Gradient of I(S;Y|Z') w.r.t. T(z'|z), in nats; used by the descent phase.
void cmi_gradient(const JointDist& j, const std::vector<double>& t, std::size_t nzp,
                  std::vector<double>& grad) {
    const std::size_t ns = j.ns(), ny = j.ny(), nz = j.nz();
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<double> m(ns * ny), ps(ns), py(ny);
    for (std::size_t zp = 0; zp < nzp; ++zp) {
        double mass = 0.0;
        std::fill(m.begin(), m.end(), 0.0);
        for (std::size_t z = 0; z < nz; ++z) {
            double w = t[z * nzp + zp];
            if (w == 0.0) continue;
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t y = 0; y < ny; ++y) {
                    double v = w * j.at(s, y, z);
                    m[s * ny + y] += v;
                    mass += v;
                }
        }
        if (mass <= 0.0) continue;
        std::fill(ps.begin(), ps.end(), 0.0);
        std::fill(py.begin(), py.end(), 0.0);
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t y = 0; y < ny; ++y) {
                ps[s] += m[s * ny + y];
                py[y] += m[s * ny + y];
            }
        for (std::size_t z = 0; z < nz; ++z) {
            double g = 0.0;
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t y = 0; y < ny; ++y) {
                    double p = j.at(s, y, z);
                    if (p == 0.0) continue;
                    double v = m[s * ny + y];
                    if (v <= 0.0 || ps[s] <= 0.0 || py[y] <= 0.0) continue;
                    g += p * std::log(v * mass / (ps[s] * py[y]));
                }
            grad[z * nzp + zp] += g;
        }
    }
}

}  // namespace

const char* active_adversary_name(ActiveAdversary a) {
    switch (a) {
        case ActiveAdversary::ZeroRate: return "ZeroRate";
        case ActiveAdversary::EqualsTwoWayRate: return "EqualsTwoWayRate";
        case ActiveAdversary::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::pair<double, double> skr_trivial_bounds(const JointDist& j) {
    double isy = mutual_info(j, Axis::S, Axis::Y);
    double isz = mutual_info(j, Axis::S, Axis::Z);
    double iyz = mutual_info(j, Axis::Y, Axis::Z);
    double lower = std::max(isy - isz, isy - iyz);
    lower = std::max(lower, 0.0);
    double upper = std::min(isy, cond_mutual_info(j, Axis::S, Axis::Y, Axis::Z));
    return {lower, upper};
}

double one_way_skr_upper(const JointDist& j, const SolverOptions& opts) {
    return ui_broja(j, UiTarget::Y, opts).decomposition.ui_y;
}

double intrinsic_information(const JointDist& j, std::size_t restarts,
                             const SolverOptions& opts) {
    const std::size_t nz = j.nz();
    const std::size_t nzp = nz;  // |Z'| = |Z|
    double best = cmi_through(j, Channel::identity(j.z_alphabet()).flat(), nzp);

    // Deterministic channels first: covers every merge/relabel pattern when
    // their number is affordable.
    double det_count = std::pow(static_cast<double>(nzp), static_cast<double>(nz));
    if (det_count <= 20000.0) {
        std::vector<std::size_t> map(nz, 0);
        std::vector<double> t(nz * nzp, 0.0);
        while (true) {
            std::fill(t.begin(), t.end(), 0.0);
            for (std::size_t z = 0; z < nz; ++z) t[z * nzp + map[z]] = 1.0;
            best = std::min(best, cmi_through(j, t, nzp));
            std::size_t d = 0;
            while (d < nz && ++map[d] == nzp) map[d++] = 0;
            if (d == nz) break;
        }
    }

    // Multiplicative-descent restarts from random interior channels.
    Rng rng(opts.seed);
    std::vector<double> grad(nz * nzp);
    for (std::size_t r = 0; r < restarts; ++r) {
        std::vector<double> t(nz * nzp);
        for (std::size_t z = 0; z < nz; ++z) {
            double total = 0.0;
            for (std::size_t zp = 0; zp < nzp; ++zp) {
                t[z * nzp + zp] = -std::log(rng.next_double());
                total += t[z * nzp + zp];
            }
            for (std::size_t zp = 0; zp < nzp; ++zp) t[z * nzp + zp] /= total;
        }
        double cur = cmi_through(j, t, nzp);
        double eta = 1.0;
        for (std::size_t it = 0; it < 500; ++it) {
            cmi_gradient(j, t, nzp, grad);
            std::vector<double> cand(nz * nzp);
            bool moved = false;
            while (eta > 1e-8) {
                for (std::size_t z = 0; z < nz; ++z) {
                    double total = 0.0;
                    for (std::size_t zp = 0; zp < nzp; ++zp) {
                        double g = grad[z * nzp + zp];
                        cand[z * nzp + zp] = t[z * nzp + zp] * std::exp(-eta * g);
                        total += cand[z * nzp + zp];
                    }
                    for (std::size_t zp = 0; zp < nzp; ++zp) cand[z * nzp + zp] /= total;
                }
                double v = cmi_through(j, cand, nzp);
                if (v < cur - 1e-14) {
                    t = cand;
                    cur = v;
                    eta *= 1.5;
                    moved = true;
                    break;
                }
                eta *= 0.5;
            }
            if (!moved) break;
        }
        best = std::min(best, cur);
    }
    return std::max(best, 0.0);
}

bool simulatability(const JointDist& j, SimDirection dir, double order_tol) {
    if (dir == SimDirection::ZtoY) {
        auto [pi, kappa] = forward_pair(j, Axis::S, Axis::Y);
        auto mu = forward_pair(j, Axis::S, Axis::Z).second;
        return degradation_test(mu, kappa, pi, order_tol).holds;
    }
    // S simulated from Z with Y as the source variable.
    JointDist swapped = j.permuted(Axis::Y, Axis::S, Axis::Z);
    auto [pi, kappa] = forward_pair(swapped, Axis::S, Axis::Y);
    auto mu = forward_pair(swapped, Axis::S, Axis::Z).second;
    return degradation_test(mu, kappa, pi, order_tol).holds;
}

ActiveAdversary active_adversary_assessment(const JointDist& j, const SolverOptions& opts) {
    BrojaResult ui_sy = ui_broja(j, UiTarget::Y, opts);
    BrojaResult ui_ys = ui_broja(j, UiTarget::S, opts);
    if (!ui_sy.converged || !ui_ys.converged) return ActiveAdversary::Indeterminate;
    if (ui_sy.decomposition.ui_y <= 1e-6 || ui_ys.decomposition.ui_y <= 1e-6)
        return ActiveAdversary::ZeroRate;
    return ActiveAdversary::EqualsTwoWayRate;
}

SkrReport skr_report(const JointDist& j, std::size_t restarts, const SolverOptions& opts) {
    SkrReport rep;
    auto [lower, upper] = skr_trivial_bounds(j);
    rep.lower_trivial = lower;
    rep.upper_trivial = upper;
    rep.one_way_upper_ui = one_way_skr_upper(j, opts);
    rep.intrinsic_upper = intrinsic_information(j, restarts, opts);
    rep.simulatable_y_by_z = simulatability(j, SimDirection::ZtoY);
    rep.simulatable_s_by_z = simulatability(j, SimDirection::ZtoS);
    rep.active_adversary = active_adversary_assessment(j, opts);
    return rep;
}

}  // namespace pid
