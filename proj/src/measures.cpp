#include "pid/measures.hpp"

#include <cmath>
#include <limits>

namespace pid {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

inline double xlog2x_over(double p, double q) {
    if (p == 0.0) return 0.0;
    if (q == 0.0) return kInf;
    return p * std::log2(p / q);
}
}  // namespace

double kl_bits(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw DimensionMismatch("kl: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double term = xlog2x_over(p[i], q[i]);
        if (term == kInf) return kInf;
        d += term;
    }
    return d < 0.0 && d > -1e-13 ? 0.0 : d;
}

double kl(const Prior& p, const Prior& q) {
    if (p.alphabet() != q.alphabet()) throw AlphabetMismatch("kl: alphabets differ");
    return kl_bits(p.mass(), q.mass());
}

double kl_cond(const Channel& kappa, const Channel& lambda, const Prior& pi) {
    if (kappa.input() != lambda.input() || kappa.output() != lambda.output())
        throw AlphabetMismatch("kl_cond: channel alphabets differ");
    if (pi.alphabet() != kappa.input()) throw AlphabetMismatch("kl_cond: prior alphabet differs");
    double d = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s) {
        if (pi[s] == 0.0) continue;
        double row = kl_bits(kappa.row(s), lambda.row(s));
        if (row == kInf) return kInf;
        d += pi[s] * row;
    }
    return d;
}

double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double mutual_info_bits(const std::vector<std::vector<double>>& joint) {
    std::size_t na = joint.size();
    if (na == 0) return 0.0;
    std::size_t nb = joint[0].size();
    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            pa[i] += joint[i][j];
            pb[j] += joint[i][j];
        }
    double info = 0.0;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            if (joint[i][j] > 0.0) info += joint[i][j] * std::log2(joint[i][j] / (pa[i] * pb[j]));
    return info < 0.0 && info > -1e-13 ? 0.0 : info;
}

double mutual_info(const JointDist& j, Axis a, Axis b) {
    return mutual_info_bits(j.pair_marginal(a, b));
}

double mutual_info_pair(const JointDist& j, Axis a) {
    Axis others[2];
    int k = 0;
    for (Axis ax : {Axis::S, Axis::Y, Axis::Z})
        if (ax != a) others[k++] = ax;
    // Flatten (others[0], others[1]) into one composite coordinate.
    const Alphabet& ob0 = j.alphabet(others[0]);
    const Alphabet& ob1 = j.alphabet(others[1]);
    const Alphabet& aa = j.alphabet(a);
    std::vector<std::vector<double>> m(aa.size(), std::vector<double>(ob0.size() * ob1.size(), 0.0));
    for (std::size_t s = 0; s < j.ns(); ++s)
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z) {
                std::size_t idx[3] = {s, y, z};
                std::size_t ia = idx[static_cast<int>(a)];
                std::size_t i0 = idx[static_cast<int>(others[0])];
                std::size_t i1 = idx[static_cast<int>(others[1])];
                m[ia][i0 * ob1.size() + i1] += j.at(s, y, z);
            }
    return mutual_info_bits(m);
}

double cond_mutual_info(const JointDist& j, Axis a, Axis b, Axis given) {
    if (a == b || a == given || b == given)
        throw DimensionMismatch("cond_mutual_info needs three distinct axes");
    const Alphabet& ga = j.alphabet(given);
    double info = 0.0;
    for (std::size_t g = 0; g < ga.size(); ++g) {
        // Slice at given=g, unnormalized.
        const Alphabet& aa = j.alphabet(a);
        const Alphabet& ba = j.alphabet(b);
        std::vector<std::vector<double>> slice(aa.size(), std::vector<double>(ba.size(), 0.0));
        double mass = 0.0;
        for (std::size_t s = 0; s < j.ns(); ++s)
            for (std::size_t y = 0; y < j.ny(); ++y)
                for (std::size_t z = 0; z < j.nz(); ++z) {
                    std::size_t idx[3] = {s, y, z};
                    if (idx[static_cast<int>(given)] != g) continue;
                    double p = j.at(s, y, z);
                    slice[idx[static_cast<int>(a)]][idx[static_cast<int>(b)]] += p;
                    mass += p;
                }
        if (mass == 0.0) continue;
        for (auto& row : slice)
            for (double& v : row) v /= mass;
        info += mass * mutual_info_bits(slice);
    }
    return info;
}

double coinformation(const JointDist& j) {
    double v1 = mutual_info(j, Axis::S, Axis::Y) - cond_mutual_info(j, Axis::S, Axis::Y, Axis::Z);
    double v2 = mutual_info(j, Axis::S, Axis::Z) - cond_mutual_info(j, Axis::S, Axis::Z, Axis::Y);
    double v3 = mutual_info(j, Axis::Y, Axis::Z) - cond_mutual_info(j, Axis::Y, Axis::Z, Axis::S);
    if (std::abs(v1 - v2) > 1e-10 || std::abs(v1 - v3) > 1e-10)
        throw ConsistencyViolation("coinformation symmetric forms disagree");
    return v1;
}

double optimal_risk(const DecisionProblem& dp, const Channel& channel) {
    if (channel.input() != dp.prior.alphabet())
        throw AlphabetMismatch("optimal_risk: channel input must match prior alphabet");
    double risk = 0.0;
    for (std::size_t z = 0; z < channel.n_out(); ++z) {
        double best = kInf;
        for (std::size_t a = 0; a < dp.actions.size(); ++a) {
            double r = 0.0;
            for (std::size_t s = 0; s < dp.prior.size(); ++s)
                r += dp.prior[s] * channel.at(s, z) * dp.loss[s][a];
            best = std::min(best, r);
        }
        risk += best;
    }
    return risk;
}

}  // namespace pid
