#include "pid/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace pid {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw DimensionMismatch("alphabet must be nonempty");
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (!seen.insert(s).second) throw ParseError("duplicate alphabet label '" + s + "'");
    }
}

std::optional<std::size_t> Alphabet::find(std::string_view label) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == label) return i;
    return std::nullopt;
}

std::size_t Alphabet::index_of(std::string_view label) const {
    auto i = find(label);
    if (!i) throw ParseError("unknown label '" + std::string(label) + "'");
    return *i;
}

Alphabet Alphabet::numbered(std::size_t n, const std::string& prefix) {
    std::vector<std::string> syms;
    syms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) syms.push_back(prefix + std::to_string(i));
    return Alphabet(std::move(syms));
}

Prior::Prior(Alphabet alphabet, std::vector<double> mass)
    : alphabet_(std::move(alphabet)), mass_(std::move(mass)) {
    if (mass_.size() != alphabet_.size())
        throw DimensionMismatch("prior length does not match alphabet");
    double total = 0.0;
    full_support_ = true;
    for (double p : mass_) {
        if (p < 0.0) throw NegativeMass("prior entry " + std::to_string(p));
        if (p == 0.0) full_support_ = false;
        total += p;
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw MassNotOne("total=" + std::to_string(total));
}

Prior Prior::uniform(Alphabet alphabet) {
    std::size_t n = alphabet.size();
    return Prior(std::move(alphabet), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Channel::Channel(Alphabet input, Alphabet output, std::vector<std::vector<double>> rows)
    : input_(std::move(input)), output_(std::move(output)) {
    if (rows.size() != input_.size())
        throw DimensionMismatch("channel row count does not match input alphabet");
    rows_.reserve(input_.size() * output_.size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
        const auto& row = rows[s];
        if (row.size() != output_.size())
            throw DimensionMismatch("channel row length does not match output alphabet");
        double total = 0.0;
        for (double p : row) {
            if (p < 0.0) throw NegativeMass("channel entry " + std::to_string(p));
            total += p;
        }
        if (std::abs(total - 1.0) > kMassTol)
            throw MassNotOne("row " + std::to_string(s) + " sums to " + std::to_string(total));
        rows_.insert(rows_.end(), row.begin(), row.end());
    }
}

std::vector<double> Channel::row(std::size_t s) const {
    auto first = rows_.begin() + static_cast<std::ptrdiff_t>(s * output_.size());
    return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(output_.size()));
}

Channel Channel::identity(const Alphabet& alphabet) {
    std::vector<std::vector<double>> rows(alphabet.size(),
                                          std::vector<double>(alphabet.size(), 0.0));
    for (std::size_t i = 0; i < alphabet.size(); ++i) rows[i][i] = 1.0;
    return Channel(alphabet, alphabet, std::move(rows));
}

Channel Channel::constant(const Alphabet& input, const Prior& row) {
    std::vector<std::vector<double>> rows(input.size(), row.mass());
    return Channel(input, row.alphabet(), std::move(rows));
}

Channel Channel::uniform_channel(const Alphabet& input, const Alphabet& output) {
    std::vector<std::vector<double>> rows(
        input.size(), std::vector<double>(output.size(), 1.0 / static_cast<double>(output.size())));
    return Channel(input, output, std::move(rows));
}

Channel compose(const Channel& post, const Channel& pre) {
    if (post.input() != pre.output())
        throw AlphabetMismatch("compose: post input must equal pre output");
    std::size_t ns = pre.n_in(), nz = pre.n_out(), ny = post.n_out();
    std::vector<std::vector<double>> rows(ns, std::vector<double>(ny, 0.0));
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t z = 0; z < nz; ++z) {
            double w = pre.at(s, z);
            if (w == 0.0) continue;
            for (std::size_t y = 0; y < ny; ++y) rows[s][y] += w * post.at(z, y);
        }
    return Channel(pre.input(), post.output(), std::move(rows));
}

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::S: return "S";
        case Axis::Y: return "Y";
        case Axis::Z: return "Z";
    }
    return "?";
}

JointDist::JointDist(Alphabet s, Alphabet y, Alphabet z, std::vector<double> table)
    : s_(std::move(s)), y_(std::move(y)), z_(std::move(z)), table_(std::move(table)) {
    if (table_.size() != s_.size() * y_.size() * z_.size())
        throw DimensionMismatch("joint table size does not match alphabets");
    double total = 0.0;
    for (double p : table_) {
        if (p < 0.0) throw NegativeMass("joint entry " + std::to_string(p));
        total += p;
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw MassNotOne("total=" + std::to_string(total));
}

const Alphabet& JointDist::alphabet(Axis a) const {
    switch (a) {
        case Axis::S: return s_;
        case Axis::Y: return y_;
        default: return z_;
    }
}

Prior JointDist::marginal(Axis a) const {
    const Alphabet& alpha = alphabet(a);
    std::vector<double> m(alpha.size(), 0.0);
    for (std::size_t s = 0; s < ns(); ++s)
        for (std::size_t y = 0; y < ny(); ++y)
            for (std::size_t z = 0; z < nz(); ++z) {
                std::size_t idx = a == Axis::S ? s : (a == Axis::Y ? y : z);
                m[idx] += at(s, y, z);
            }
    // Guard against tiny negative rounding and renormalize drift within kMassTol.
    double total = std::accumulate(m.begin(), m.end(), 0.0);
    for (double& v : m) v /= total;
    return Prior(alpha, std::move(m));
}

std::vector<std::vector<double>> JointDist::pair_marginal(Axis a, Axis b) const {
    if (a == b) throw DimensionMismatch("pair_marginal needs two distinct axes");
    const Alphabet& alpha = alphabet(a);
    const Alphabet& beta = alphabet(b);
    std::vector<std::vector<double>> m(alpha.size(), std::vector<double>(beta.size(), 0.0));
    for (std::size_t s = 0; s < ns(); ++s)
        for (std::size_t y = 0; y < ny(); ++y)
            for (std::size_t z = 0; z < nz(); ++z) {
                std::size_t ia = a == Axis::S ? s : (a == Axis::Y ? y : z);
                std::size_t ib = b == Axis::S ? s : (b == Axis::Y ? y : z);
                m[ia][ib] += at(s, y, z);
            }
    return m;
}

JointDist JointDist::permuted(Axis new_s, Axis new_y, Axis new_z) const {
    if (new_s == new_y || new_s == new_z || new_y == new_z)
        throw DimensionMismatch("permutation must name each axis once");
    const Alphabet& as = alphabet(new_s);
    const Alphabet& ay = alphabet(new_y);
    const Alphabet& az = alphabet(new_z);
    std::vector<double> t(table_.size(), 0.0);
    for (std::size_t s = 0; s < ns(); ++s)
        for (std::size_t y = 0; y < ny(); ++y)
            for (std::size_t z = 0; z < nz(); ++z) {
                std::size_t old_idx[3] = {s, y, z};
                std::size_t i = old_idx[static_cast<int>(new_s)];
                std::size_t j = old_idx[static_cast<int>(new_y)];
                std::size_t k = old_idx[static_cast<int>(new_z)];
                t[(i * ay.size() + j) * az.size() + k] = at(s, y, z);
            }
    return JointDist(as, ay, az, std::move(t));
}

JointDist validate_joint(Alphabet s, Alphabet y, Alphabet z, std::vector<double> raw,
                         double tolerance, bool renormalize) {
    if (raw.size() != s.size() * y.size() * z.size())
        throw DimensionMismatch("raw table size does not match alphabets");
    double total = 0.0;
    for (double p : raw) {
        if (p < 0.0) throw NegativeMass("entry " + std::to_string(p));
        total += p;
    }
    if (renormalize) {
        if (total <= 0.0) throw MassNotOne("total=0");
        for (double& p : raw) p /= total;
    } else if (std::abs(total - 1.0) > tolerance) {
        throw MassNotOne("total=" + std::to_string(total));
    } else if (total != 1.0) {
        for (double& p : raw) p /= total;  // snap within tolerance
    }
    return JointDist(std::move(s), std::move(y), std::move(z), std::move(raw));
}

std::pair<Prior, Channel> forward_pair(const JointDist& j, Axis target, Axis observed,
                                       bool drop_null) {
    if (target == observed) throw DimensionMismatch("target must differ from observed");
    auto pm = j.pair_marginal(target, observed);
    const Alphabet& ta = j.alphabet(target);
    const Alphabet& oa = j.alphabet(observed);

    std::vector<std::size_t> live;
    std::vector<double> mass;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        double total = std::accumulate(pm[i].begin(), pm[i].end(), 0.0);
        if (total <= 0.0) {
            if (!drop_null)
                throw NullSupport(std::string(axis_name(target)) + " symbol '" + ta.symbol(i) +
                                  "' has zero mass");
            continue;
        }
        live.push_back(i);
        mass.push_back(total);
    }
    if (live.empty()) throw NullSupport("all target symbols have zero mass");

    double grand = std::accumulate(mass.begin(), mass.end(), 0.0);
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    std::vector<double> prior_mass;
    for (std::size_t k = 0; k < live.size(); ++k) {
        std::size_t i = live[k];
        labels.push_back(ta.symbol(i));
        prior_mass.push_back(mass[k] / grand);
        std::vector<double> row(oa.size());
        for (std::size_t b = 0; b < oa.size(); ++b) row[b] = pm[i][b] / mass[k];
        rows.push_back(std::move(row));
    }
    Alphabet pruned(labels);
    return {Prior(pruned, std::move(prior_mass)), Channel(pruned, oa, std::move(rows))};
}

JointDist prune_null_symbols(const JointDist& j, Axis axis) {
    Prior m = j.marginal(axis);
    std::vector<std::size_t> live;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0.0) {
            live.push_back(i);
            labels.push_back(m.alphabet().symbol(i));
        }
    if (live.size() == m.size()) return j;
    if (live.empty()) throw NullSupport("axis has no mass at all");

    Alphabet pruned(labels);
    Alphabet as = axis == Axis::S ? pruned : j.s_alphabet();
    Alphabet ay = axis == Axis::Y ? pruned : j.y_alphabet();
    Alphabet az = axis == Axis::Z ? pruned : j.z_alphabet();
    std::vector<double> t;
    t.reserve(as.size() * ay.size() * az.size());
    auto keep = [&](Axis a, std::size_t i) -> bool {
        if (a != axis) return true;
        return std::find(live.begin(), live.end(), i) != live.end();
    };
    for (std::size_t s = 0; s < j.ns(); ++s) {
        if (!keep(Axis::S, s)) continue;
        for (std::size_t y = 0; y < j.ny(); ++y) {
            if (!keep(Axis::Y, y)) continue;
            for (std::size_t z = 0; z < j.nz(); ++z) {
                if (!keep(Axis::Z, z)) continue;
                t.push_back(j.at(s, y, z));
            }
        }
    }
    return JointDist(std::move(as), std::move(ay), std::move(az), std::move(t));
}

DecisionProblem::DecisionProblem(Prior prior_, Alphabet actions_,
                                 std::vector<std::vector<double>> loss_)
    : prior(std::move(prior_)), actions(std::move(actions_)), loss(std::move(loss_)) {
    if (loss.size() != prior.size())
        throw DimensionMismatch("loss rows must match state alphabet");
    for (const auto& row : loss) {
        if (row.size() != actions.size())
            throw DimensionMismatch("loss columns must match action alphabet");
        for (double v : row) {
            if (!std::isfinite(v)) throw DimensionMismatch("loss entries must be finite");
            loss_sup_ = std::max(loss_sup_, std::abs(v));
        }
    }
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("l1_distance length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

}  // namespace pid
