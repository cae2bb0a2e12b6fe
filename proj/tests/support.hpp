#pragma once

#include <cmath>
#include <vector>

#include "pid/broja.hpp"
#include "pid/oracle.hpp"
#include "pid/rng.hpp"
#include "pid/types.hpp"

namespace testsupport {

using namespace pid;

// The six canonical fixtures, built in code; the files under fixtures/
// mirror these and one IO test asserts they agree.

inline JointDist fix_xor() {
    Alphabet b({"0", "1"});
    std::vector<double> t(8, 0.0);
    auto set = [&](int s, int y, int z, double p) { t[(s * 2 + y) * 2 + z] = p; };
    set(0, 0, 0, 0.25);
    set(1, 0, 1, 0.25);
    set(1, 1, 0, 0.25);
    set(0, 1, 1, 0.25);
    return JointDist(b, b, b, t);
}

inline JointDist fix_rdn() {
    Alphabet b({"0", "1"});
    std::vector<double> t(8, 0.0);
    t[0] = 0.5;          // (0,0,0)
    t[(1 * 2 + 1) * 2 + 1] = 0.5;
    return JointDist(b, b, b, t);
}

inline JointDist fix_ex1a() {
    Alphabet q({"0", "1", "2", "3"});
    std::vector<double> t(64, 0.0);
    auto set = [&](int s, int y, int z, double p) { t[(s * 4 + y) * 4 + z] = p; };
    set(0, 0, 0, 0.125);
    set(1, 0, 1, 0.125);
    set(0, 1, 1, 0.125);
    set(1, 1, 0, 0.125);
    set(2, 2, 2, 0.25);
    set(3, 3, 3, 0.25);
    return JointDist(q, q, q, t);
}

inline JointDist fix_ex1b() {
    Alphabet q({"0", "1", "2", "3"});
    Alphabet b({"0", "1"});
    std::vector<double> t(32, 0.0);
    auto set = [&](int s, int y, int z, double p) { t[(s * 4 + y) * 2 + z] = p; };
    set(0, 0, 0, 0.125);
    set(1, 0, 1, 0.125);
    set(0, 1, 1, 0.125);
    set(1, 1, 0, 0.125);
    set(2, 2, 0, 0.25);
    set(3, 3, 1, 0.25);
    return JointDist(q, q, b, t);
}

inline JointDist fix_erase() {
    Alphabet s({"0", "1"});
    Alphabet e({"0", "e", "1"});
    std::vector<double> t(18, 0.0);
    auto set = [&](int si, int yi, int zi, double p) { t[(si * 3 + yi) * 3 + zi] = p; };
    set(0, 0, 0, 1.0 / 3.0);
    set(0, 0, 1, 1.0 / 12.0);  // y=0, z=e
    set(0, 1, 1, 1.0 / 12.0);  // y=e, z=e
    set(1, 2, 2, 1.0 / 3.0);
    set(1, 2, 1, 1.0 / 12.0);
    set(1, 1, 1, 1.0 / 12.0);
    return JointDist(s, e, e, t);
}

inline JointDist fix_gisin() {
    Alphabet b({"0", "1"});
    std::vector<double> t(8, 0.0);
    auto set = [&](int s, int y, int z, double p) { t[(s * 2 + y) * 2 + z] = p; };
    set(0, 0, 0, 0.2);
    set(1, 0, 0, 0.2);
    set(0, 0, 1, 0.2);
    set(0, 1, 0, 0.2);
    set(1, 1, 1, 0.2);
    return JointDist(b, b, b, t);
}

// Joint with the given factors under conditional independence of Y, Z given S.
inline JointDist joint_from_channels(const Prior& pi, const Channel& kappa, const Channel& mu) {
    std::size_t ns = pi.size(), ny = kappa.n_out(), nz = mu.n_out();
    std::vector<double> t(ns * ny * nz, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t z = 0; z < nz; ++z)
                t[(s * ny + y) * nz + z] = pi[s] * kappa.at(s, y) * mu.at(s, z);
    return validate_joint(pi.alphabet(), kappa.output(), mu.output(), t, 1e-7, true);
}

// --- Distribution surgery used by the monotonicity suites ---

// Post-processes S through the channel T (S -> S'), keeping Y and Z.
inline JointDist garble_s(const JointDist& j, const Channel& t) {
    std::size_t ns2 = t.n_out();
    std::vector<double> out(ns2 * j.ny() * j.nz(), 0.0);
    for (std::size_t s = 0; s < j.ns(); ++s)
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z) {
                double p = j.at(s, y, z);
                if (p == 0.0) continue;
                for (std::size_t s2 = 0; s2 < ns2; ++s2)
                    out[(s2 * j.ny() + y) * j.nz() + z] += p * t.at(s, s2);
            }
    return validate_joint(t.output(), j.y_alphabet(), j.z_alphabet(), out, 1e-7, true);
}

// Extends Z to the pair (Z, Z') through an arbitrary conditional
// W(z' | s, y, z). Rows of w are indexed (s*ny + y)*nz + z.
inline JointDist extend_z(const JointDist& j, const std::vector<std::vector<double>>& w,
                          std::size_t nzp) {
    std::vector<std::string> labels;
    for (std::size_t z = 0; z < j.nz(); ++z)
        for (std::size_t zp = 0; zp < nzp; ++zp)
            labels.push_back(j.z_alphabet().symbol(z) + "." + std::to_string(zp));
    Alphabet az(labels);
    std::vector<double> out(j.ns() * j.ny() * az.size(), 0.0);
    for (std::size_t s = 0; s < j.ns(); ++s)
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z) {
                double p = j.at(s, y, z);
                if (p == 0.0) continue;
                const auto& row = w[(s * j.ny() + y) * j.nz() + z];
                for (std::size_t zp = 0; zp < nzp; ++zp)
                    out[(s * j.ny() + y) * az.size() + z * nzp + zp] += p * row[zp];
            }
    return validate_joint(j.s_alphabet(), j.y_alphabet(), az, out, 1e-7, true);
}

// Appends the public value f(S) to both Y and Z.
inline JointDist append_public(const JointDist& j, const std::vector<std::size_t>& f,
                               std::size_t n_values) {
    auto tag = [&](const Alphabet& a, std::size_t i, std::size_t v) {
        return a.symbol(i) + "|" + std::to_string(v);
    };
    std::vector<std::string> ly, lz;
    for (std::size_t y = 0; y < j.ny(); ++y)
        for (std::size_t v = 0; v < n_values; ++v) ly.push_back(tag(j.y_alphabet(), y, v));
    for (std::size_t z = 0; z < j.nz(); ++z)
        for (std::size_t v = 0; v < n_values; ++v) lz.push_back(tag(j.z_alphabet(), z, v));
    Alphabet ay(ly), az(lz);
    std::vector<double> out(j.ns() * ay.size() * az.size(), 0.0);
    for (std::size_t s = 0; s < j.ns(); ++s)
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z) {
                double p = j.at(s, y, z);
                if (p == 0.0) continue;
                std::size_t v = f[s];
                out[(s * ay.size() + (y * n_values + v)) * az.size() + (z * n_values + v)] += p;
            }
    return validate_joint(j.s_alphabet(), ay, az, out, 1e-7, true);
}

// Random member of Delta_P: per-s IPF of a random positive base onto P's
// margins.
inline JointDist random_polytope_member(const JointDist& p, std::uint64_t seed) {
    Rng rng(seed);
    auto [pi, kappa] = forward_pair(p, Axis::S, Axis::Y);
    auto mu = forward_pair(p, Axis::S, Axis::Z).second;
    std::vector<double> t(p.ns() * p.ny() * p.nz(), 0.0);
    for (std::size_t s = 0; s < p.ns(); ++s) {
        std::vector<std::vector<double>> base(p.ny(), std::vector<double>(p.nz()));
        for (auto& row : base)
            for (double& v : row) v = 0.05 + rng.next_double();
        auto q = ipf_projection(base, kappa.row(s), mu.row(s));
        for (std::size_t y = 0; y < p.ny(); ++y)
            for (std::size_t z = 0; z < p.nz(); ++z)
                t[(s * p.ny() + y) * p.nz() + z] = pi[s] * q[y][z];
    }
    return validate_joint(p.s_alphabet(), p.y_alphabet(), p.z_alphabet(), t, 1e-7, true);
}

}  // namespace testsupport
