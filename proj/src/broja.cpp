#include "pid/broja.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kIpfSweepCap = 20000;

struct IpfOutcome {
    std::vector<double> row_scale;  // a(y)
    std::vector<double> col_scale;  // b(z)
    double residual = kInf;
    std::size_t sweeps = 0;
    bool converged = false;
};

// Alternating marginal scaling of base(y,z)*a(y)*b(z). Warm-startable via
// the scale vectors.
IpfOutcome ipf_core(const std::vector<double>& base, std::size_t ny, std::size_t nz,
                    const std::vector<double>& ry, const std::vector<double>& rz,
                    std::vector<double> a, std::vector<double> b, double tol,
                    std::size_t sweep_cap) {
    IpfOutcome out;
    if (a.size() != ny) a.assign(ny, 1.0);
    if (b.size() != nz) b.assign(nz, 1.0);
    std::vector<double> qy(ny), qz(nz);
    for (std::size_t sweep = 1; sweep <= sweep_cap; ++sweep) {
        // Fit the Y-marginal.
        for (std::size_t y = 0; y < ny; ++y) {
            double m = 0.0;
            for (std::size_t z = 0; z < nz; ++z) m += base[y * nz + z] * b[z];
            if (ry[y] == 0.0) {
                a[y] = 0.0;
            } else if (m * a[y] > 0.0) {
                a[y] *= ry[y] / (m * a[y]);
            } else if (m > 0.0) {
                a[y] = ry[y] / m;
            } else {
                out.row_scale = std::move(a);
                out.col_scale = std::move(b);
                return out;  // blocked support; caller decides what to do
            }
        }
        // Fit the Z-marginal and measure both residuals afterwards.
        for (std::size_t z = 0; z < nz; ++z) {
            double m = 0.0;
            for (std::size_t y = 0; y < ny; ++y) m += base[y * nz + z] * a[y];
            if (rz[z] == 0.0) {
                b[z] = 0.0;
            } else if (m * b[z] > 0.0) {
                b[z] *= rz[z] / (m * b[z]);
            } else if (m > 0.0) {
                b[z] = rz[z] / m;
            } else {
                out.row_scale = std::move(a);
                out.col_scale = std::move(b);
                return out;
            }
        }
        double res = 0.0;
        std::fill(qy.begin(), qy.end(), 0.0);
        std::fill(qz.begin(), qz.end(), 0.0);
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t z = 0; z < nz; ++z) {
                double v = base[y * nz + z] * a[y] * b[z];
                qy[y] += v;
                qz[z] += v;
            }
        for (std::size_t y = 0; y < ny; ++y) res = std::max(res, std::abs(qy[y] - ry[y]));
        for (std::size_t z = 0; z < nz; ++z) res = std::max(res, std::abs(qz[z] - rz[z]));
        out.sweeps = sweep;
        out.residual = res;
        if (res <= tol) {
            out.converged = true;
            break;
        }
    }
    out.row_scale = std::move(a);
    out.col_scale = std::move(b);
    return out;
}

std::vector<double> assemble(const std::vector<double>& base, std::size_t ny, std::size_t nz,
                             const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> q(ny * nz);
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z) q[y * nz + z] = base[y * nz + z] * a[y] * b[z];
    return q;
}

double kl_table_bits(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        d += p[i] * std::log2(p[i] / q[i]);
    }
    return std::max(d, 0.0);
}

}  // namespace

MarginPolytope::MarginPolytope(JointDist p)
    : reference(std::move(p)),
      sy_marginal(reference.pair_marginal(Axis::S, Axis::Y)),
      sz_marginal(reference.pair_marginal(Axis::S, Axis::Z)) {}

double MarginPolytope::margin_residual(const JointDist& q) const {
    if (q.s_alphabet() != reference.s_alphabet() || q.y_alphabet() != reference.y_alphabet() ||
        q.z_alphabet() != reference.z_alphabet())
        throw AlphabetMismatch("membership: alphabets differ from the reference");
    auto qsy = q.pair_marginal(Axis::S, Axis::Y);
    auto qsz = q.pair_marginal(Axis::S, Axis::Z);
    double res = 0.0;
    for (std::size_t s = 0; s < reference.ns(); ++s) {
        for (std::size_t y = 0; y < reference.ny(); ++y)
            res = std::max(res, std::abs(qsy[s][y] - sy_marginal[s][y]));
        for (std::size_t z = 0; z < reference.nz(); ++z)
            res = std::max(res, std::abs(qsz[s][z] - sz_marginal[s][z]));
    }
    return res;
}

bool MarginPolytope::membership(const JointDist& q, double tol) const {
    return margin_residual(q) <= tol;
}

MarginPolytope polytope(const JointDist& j) { return MarginPolytope(j); }

JointDist ci_coupling(const JointDist& j) {
    auto sy = j.pair_marginal(Axis::S, Axis::Y);
    auto sz = j.pair_marginal(Axis::S, Axis::Z);
    Prior ps = j.marginal(Axis::S);
    std::vector<double> t(j.ns() * j.ny() * j.nz(), 0.0);
    for (std::size_t s = 0; s < j.ns(); ++s) {
        if (ps[s] == 0.0) continue;
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z)
                t[(s * j.ny() + y) * j.nz() + z] = sy[s][y] * sz[s][z] / ps[s];
    }
    return validate_joint(j.s_alphabet(), j.y_alphabet(), j.z_alphabet(), std::move(t), 1e-7,
                          /*renormalize=*/true);
}

std::vector<std::vector<double>> ipf_projection(const std::vector<std::vector<double>>& base,
                                                const std::vector<double>& target_y_marginal,
                                                const std::vector<double>& target_z_marginal,
                                                const SolverOptions& opts) {
    const std::size_t ny = target_y_marginal.size();
    const std::size_t nz = target_z_marginal.size();
    if (base.size() != ny) throw DimensionMismatch("ipf_projection: base rows");
    std::vector<double> flat;
    flat.reserve(ny * nz);
    for (const auto& row : base) {
        if (row.size() != nz) throw DimensionMismatch("ipf_projection: base columns");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    // Support screen: a positive target row/column must meet positive base
    // mass somewhere compatible.
    for (std::size_t y = 0; y < ny; ++y) {
        if (target_y_marginal[y] <= 0.0) continue;
        bool ok = false;
        for (std::size_t z = 0; z < nz; ++z)
            if (flat[y * nz + z] > 0.0 && target_z_marginal[z] > 0.0) ok = true;
        if (!ok) throw InfeasibleSupport("target Y mass at a base-null row");
    }
    for (std::size_t z = 0; z < nz; ++z) {
        if (target_z_marginal[z] <= 0.0) continue;
        bool ok = false;
        for (std::size_t y = 0; y < ny; ++y)
            if (flat[y * nz + z] > 0.0 && target_y_marginal[y] > 0.0) ok = true;
        if (!ok) throw InfeasibleSupport("target Z mass at a base-null column");
    }
    IpfOutcome out = ipf_core(flat, ny, nz, target_y_marginal, target_z_marginal, {}, {},
                              kMarginTol, kIpfSweepCap);
    if (!out.converged) throw NotConverged("ipf_projection residual " + std::to_string(out.residual));
    std::vector<double> q = assemble(flat, ny, nz, out.row_scale, out.col_scale);
    std::vector<std::vector<double>> result(ny, std::vector<double>(nz));
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z) result[y][z] = q[y * nz + z];
    return result;
}

BrojaResult ui_broja(const JointDist& j, UiTarget target, const SolverOptions& opts,
                     bool drop_null) {
    JointDist solved = target == UiTarget::Y   ? j
                       : target == UiTarget::Z ? j.permuted(Axis::S, Axis::Z, Axis::Y)
                                               : j.permuted(Axis::Y, Axis::S, Axis::Z);
    if (drop_null) solved = prune_null_symbols(solved, Axis::S);

    auto [pi, kappa] = forward_pair(solved, Axis::S, Axis::Y);
    auto mu = forward_pair(solved, Axis::S, Axis::Z).second;
    if (pi.size() != solved.ns())
        throw NullSupport("S-marginal must have full support (or pass drop_null)");
    const std::size_t ns = solved.ns(), ny = solved.ny(), nz = solved.nz();

    // Q_s = P_{YZ|s} is always feasible; lambda starts at P_{Y|Z}.
    std::vector<std::vector<double>> q(ns, std::vector<double>(ny * nz, 0.0));
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t z = 0; z < nz; ++z) q[s][y * nz + z] = solved.at(s, y, z) / pi[s];

    auto yz = solved.pair_marginal(Axis::Y, Axis::Z);
    std::vector<double> lam(nz * ny, 0.0);  // lam[z*ny+y] = lambda_z(y)
    for (std::size_t z = 0; z < nz; ++z) {
        double pz = 0.0;
        for (std::size_t y = 0; y < ny; ++y) pz += yz[y][z];
        for (std::size_t y = 0; y < ny; ++y)
            lam[z * ny + y] = pz > 0.0 ? yz[y][z] / pz : 1.0 / static_cast<double>(ny);
    }

    auto objective = [&]() {
        double val = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t z = 0; z < nz; ++z) {
                    double p = q[s][y * nz + z];
                    if (p == 0.0) continue;
                    double base = mu.at(s, z) * lam[z * ny + y];
                    if (base <= 0.0) return kInf;
                    val += pi[s] * p * std::log2(p / base);
                }
        }
        return std::max(val, 0.0);
    };

    BrojaResult res{solved, Channel::uniform_channel(solved.z_alphabet(), solved.y_alphabet())};
    res.objective_trace.push_back(objective());

    std::vector<std::vector<double>> row_scale(ns), col_scale(ns);
    std::vector<double> base(ny * nz);
    double eps = 0.0;  // interior smoothing engages only when IPF gets stuck
    double margin_res = 0.0;
    double prev = res.objective_trace.back();
    std::size_t stable = 0;
    for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
        margin_res = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t z = 0; z < nz; ++z)
                    base[y * nz + z] = mu.at(s, z) * lam[z * ny + y];
            if (eps > 0.0) {
                double u = eps / static_cast<double>(ny * nz);
                for (double& v : base) v = (1.0 - eps) * v + u;
            }
            IpfOutcome out = ipf_core(base, ny, nz, kappa.row(s), mu.row(s), row_scale[s],
                                      col_scale[s], kMarginTol / 10.0, kIpfSweepCap);
            if (!out.converged && eps == 0.0) {
                // Support-blocked fiber: retry once with interior smoothing.
                eps = opts.smoothing_eps;
                double u = eps / static_cast<double>(ny * nz);
                for (std::size_t c = 0; c < base.size(); ++c)
                    base[c] = (1.0 - eps) * base[c] + u;
                out = ipf_core(base, ny, nz, kappa.row(s), mu.row(s), {}, {}, kMarginTol / 10.0,
                               kIpfSweepCap);
            }
            row_scale[s] = out.row_scale;
            col_scale[s] = out.col_scale;
            margin_res = std::max(margin_res, out.residual);
            q[s] = assemble(base, ny, nz, out.row_scale, out.col_scale);
        }
        // Exact inner minimizer: lambda_z(y) = Q(y|z) under pi x Q.
        for (std::size_t z = 0; z < nz; ++z) {
            double total = 0.0;
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t y = 0; y < ny; ++y) total += pi[s] * q[s][y * nz + z];
            if (total <= 0.0) {
                for (std::size_t y = 0; y < ny; ++y)
                    lam[z * ny + y] = 1.0 / static_cast<double>(ny);
                continue;
            }
            for (std::size_t y = 0; y < ny; ++y) {
                double mass = 0.0;
                for (std::size_t s = 0; s < ns; ++s) mass += pi[s] * q[s][y * nz + z];
                lam[z * ny + y] = mass / total;
            }
        }
        double obj = objective();
        res.objective_trace.push_back(obj);
        res.iterations = iter;
        double rel = std::abs(prev - obj) / std::max(1.0, std::abs(prev));
        prev = obj;
        stable = rel <= opts.tol_objective ? stable + 1 : 0;
        if (stable >= 5) {
            res.converged = margin_res <= kMarginTol;
            break;
        }
        if (eps > 0.0 && iter % 100 == 0) eps *= 0.5;
    }
    res.margin_residual = margin_res;

    // Assemble the minimizer as a joint and read the value off it.
    std::vector<double> table(ns * ny * nz, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t c = 0; c < ny * nz; ++c) table[s * ny * nz + c] = pi[s] * q[s][c];
    res.q_star = validate_joint(solved.s_alphabet(), solved.y_alphabet(), solved.z_alphabet(),
                                std::move(table), 1e-7, /*renormalize=*/true);
    double ui = cond_mutual_info(res.q_star, Axis::S, Axis::Y, Axis::Z);
    res.kkt_gap = std::abs(res.objective_trace.back() - ui);

    std::vector<std::vector<double>> lam_rows(nz, std::vector<double>(ny));
    for (std::size_t z = 0; z < nz; ++z)
        for (std::size_t y = 0; y < ny; ++y) lam_rows[z][y] = lam[z * ny + y];
    res.lambda_star = Channel(solved.z_alphabet(), solved.y_alphabet(), std::move(lam_rows));

    double a = mutual_info(solved, Axis::S, Axis::Y);
    double b = mutual_info(solved, Axis::S, Axis::Z);
    double c_yz = cond_mutual_info(solved, Axis::S, Axis::Y, Axis::Z);
    double si = a - ui;
    res.decomposition = make_decomposition(ui, b - si, si, c_yz - ui, MeasureTag::Broja,
                                           res.converged, res.iterations);
    return res;
}

BrojaResult decompose_broja(const JointDist& j, const SolverOptions& opts, bool drop_null) {
    BrojaResult main = ui_broja(j, UiTarget::Y, opts, drop_null);
    BrojaResult swapped = ui_broja(j, UiTarget::Z, opts, drop_null);
    main.cross_check_residual =
        std::abs(main.decomposition.raw_ui_z - swapped.decomposition.raw_ui_y);
    if (main.cross_check_residual > 1e-4)
        throw ConsistencyViolation("UI(S;Z\\Y) cross-check residual " +
                                   std::to_string(main.cross_check_residual));
    main.decomposition.converged = main.converged && swapped.converged;
    return main;
}

JointDist transport_margins(const JointDist& q, const JointDist& p, const JointDist& p_prime) {
    if (q.s_alphabet() != p.s_alphabet() || q.y_alphabet() != p.y_alphabet() ||
        q.z_alphabet() != p.z_alphabet() || p.s_alphabet() != p_prime.s_alphabet() ||
        p.y_alphabet() != p_prime.y_alphabet() || p.z_alphabet() != p_prime.z_alphabet())
        throw AlphabetMismatch("transport_margins: alphabets must coincide");
    if (!polytope(p).membership(q, 1e-7))
        throw ConsistencyViolation("transport_margins: Q is not in Delta_P");

    const std::size_t ns = p.ns(), ny = p.ny(), nz = p.nz();
    std::vector<double> m(ns * ny * nz);
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = q.table()[i] + p_prime.table()[i] - p.table()[i];

    auto idx = [&](std::size_t s, std::size_t y, std::size_t z) {
        return (s * ny + y) * nz + z;
    };
    constexpr double kNegTol = 1e-15;
    const std::size_t move_cap = 16 * ns * ny * nz * (ny + nz) + 1024;
    std::size_t moves = 0;
    for (std::size_t s = 0; s < ns; ++s) {
        while (true) {
            std::size_t y0 = ny, z0 = nz;
            for (std::size_t y = 0; y < ny && y0 == ny; ++y)
                for (std::size_t z = 0; z < nz; ++z)
                    if (m[idx(s, y, z)] < -kNegTol) {
                        y0 = y;
                        z0 = z;
                        break;
                    }
            if (y0 == ny) break;
            // Donors exist because the margins of M match P' and are
            // nonnegative.
            std::size_t y1 = ny, z1 = nz;
            for (std::size_t y = 0; y < ny; ++y)
                if (y != y0 && m[idx(s, y, z0)] > 0.0) {
                    y1 = y;
                    break;
                }
            for (std::size_t z = 0; z < nz; ++z)
                if (z != z0 && m[idx(s, y0, z)] > 0.0) {
                    z1 = z;
                    break;
                }
            if (y1 == ny || z1 == nz)
                throw ConsistencyViolation("transport_margins: no donor found (inputs invalid?)");
            double nu = std::min({m[idx(s, y1, z0)], m[idx(s, y0, z1)], -m[idx(s, y0, z0)]});
            m[idx(s, y0, z0)] += nu;
            m[idx(s, y1, z0)] -= nu;
            m[idx(s, y0, z1)] -= nu;
            m[idx(s, y1, z1)] += nu;
            if (++moves > move_cap)
                throw ConsistencyViolation("transport_margins: move cap exceeded");
        }
    }
    for (double& v : m) {
        if (v < 0.0) v = 0.0;  // clear kNegTol-scale dust
    }
    return validate_joint(p.s_alphabet(), p.y_alphabet(), p.z_alphabet(), std::move(m), 1e-7,
                          /*renormalize=*/true);
}

JointDist tensor(const JointDist& j1, const JointDist& j2, std::size_t max_alphabet) {
    auto product = [&](const Alphabet& a, const Alphabet& b) {
        if (a.size() * b.size() > max_alphabet)
            throw AlphabetTooLarge("product alphabet would have " +
                                   std::to_string(a.size() * b.size()) + " symbols");
        std::vector<std::string> syms;
        syms.reserve(a.size() * b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t k = 0; k < b.size(); ++k)
                syms.push_back(a.symbol(i) + "," + b.symbol(k));
        return Alphabet(syms);
    };
    Alphabet as = product(j1.s_alphabet(), j2.s_alphabet());
    Alphabet ay = product(j1.y_alphabet(), j2.y_alphabet());
    Alphabet az = product(j1.z_alphabet(), j2.z_alphabet());
    std::vector<double> t(as.size() * ay.size() * az.size(), 0.0);
    for (std::size_t s1 = 0; s1 < j1.ns(); ++s1)
        for (std::size_t y1 = 0; y1 < j1.ny(); ++y1)
            for (std::size_t z1 = 0; z1 < j1.nz(); ++z1) {
                double p1 = j1.at(s1, y1, z1);
                if (p1 == 0.0) continue;
                for (std::size_t s2 = 0; s2 < j2.ns(); ++s2)
                    for (std::size_t y2 = 0; y2 < j2.ny(); ++y2)
                        for (std::size_t z2 = 0; z2 < j2.nz(); ++z2) {
                            double p = p1 * j2.at(s2, y2, z2);
                            if (p == 0.0) continue;
                            std::size_t s = s1 * j2.ns() + s2;
                            std::size_t y = y1 * j2.ny() + y2;
                            std::size_t z = z1 * j2.nz() + z2;
                            t[(s * ay.size() + y) * az.size() + z] = p;
                        }
            }
    return validate_joint(std::move(as), std::move(ay), std::move(az), std::move(t), 1e-7,
                          /*renormalize=*/true);
}

}  // namespace pid
