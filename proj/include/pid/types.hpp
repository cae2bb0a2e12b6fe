#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pid/errors.hpp"

namespace pid {

// Tolerance used by all constructors when checking that masses sum to one.
inline constexpr double kMassTol = 1e-9;

// A finite, ordered set of distinct symbol labels. The construction order is
// the index order used by every reduction in the library, so results are
// bit-stable across runs.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    std::optional<std::size_t> find(std::string_view label) const;
    // Throws ParseError when the label is unknown.
    std::size_t index_of(std::string_view label) const;

    bool operator==(const Alphabet& other) const noexcept { return symbols_ == other.symbols_; }
    bool operator!=(const Alphabet& other) const noexcept { return !(*this == other); }

    // "0", "1", ..., "n-1"
    static Alphabet numbered(std::size_t n, const std::string& prefix = {});

private:
    std::vector<std::string> symbols_;
};

// A probability distribution over an alphabet.
class Prior {
public:
    Prior(Alphabet alphabet, std::vector<double> mass);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return mass_.size(); }
    double operator[](std::size_t i) const { return mass_[i]; }
    const std::vector<double>& mass() const noexcept { return mass_; }
    bool full_support() const noexcept { return full_support_; }

    static Prior uniform(Alphabet alphabet);

private:
    Alphabet alphabet_;
    std::vector<double> mass_;
    bool full_support_;
};

// A row-stochastic matrix: rows indexed by the input alphabet, columns by the
// output alphabet. row(s)[y] is the probability of output y given input s.
class Channel {
public:
    Channel(Alphabet input, Alphabet output, std::vector<std::vector<double>> rows);

    const Alphabet& input() const noexcept { return input_; }
    const Alphabet& output() const noexcept { return output_; }
    std::size_t n_in() const noexcept { return input_.size(); }
    std::size_t n_out() const noexcept { return output_.size(); }

    double at(std::size_t s, std::size_t y) const { return rows_[s * output_.size() + y]; }
    // Row s as a span-like vector copy.
    std::vector<double> row(std::size_t s) const;
    const std::vector<double>& flat() const noexcept { return rows_; }

    static Channel identity(const Alphabet& alphabet);
    // Every row equals `row` (an "uninformative" channel when used alone).
    static Channel constant(const Alphabet& input, const Prior& row);
    static Channel uniform_channel(const Alphabet& input, const Alphabet& output);

private:
    Alphabet input_;
    Alphabet output_;
    std::vector<double> rows_;  // row-major, n_in x n_out
};

// Composition `post after pre`: (post o pre)_s(y) = sum_z pre_s(z) post_z(y).
Channel compose(const Channel& post, const Channel& pre);

enum class Axis { S = 0, Y = 1, Z = 2 };

const char* axis_name(Axis a);

// A joint probability table over three named finite variables S, Y, Z.
class JointDist {
public:
    JointDist(Alphabet s, Alphabet y, Alphabet z, std::vector<double> table);

    const Alphabet& alphabet(Axis a) const;
    const Alphabet& s_alphabet() const noexcept { return s_; }
    const Alphabet& y_alphabet() const noexcept { return y_; }
    const Alphabet& z_alphabet() const noexcept { return z_; }
    std::size_t ns() const noexcept { return s_.size(); }
    std::size_t ny() const noexcept { return y_.size(); }
    std::size_t nz() const noexcept { return z_.size(); }

    double at(std::size_t s, std::size_t y, std::size_t z) const {
        return table_[(s * y_.size() + y) * z_.size() + z];
    }
    const std::vector<double>& table() const noexcept { return table_; }

    Prior marginal(Axis a) const;
    // Pair marginal as a matrix indexed (a, b).
    std::vector<std::vector<double>> pair_marginal(Axis a, Axis b) const;

    // Joint over the same atoms with two axes swapped.
    JointDist permuted(Axis new_s, Axis new_y, Axis new_z) const;

private:
    Alphabet s_, y_, z_;
    std::vector<double> table_;  // s-major, then y, then z
};

// Builds a JointDist from a raw table, checking nonnegativity and total mass.
// With renormalize=true any positive total is accepted and scaled to one.
JointDist validate_joint(Alphabet s, Alphabet y, Alphabet z, std::vector<double> raw,
                         double tolerance = kMassTol, bool renormalize = false);

// Factors J into the marginal of `target` and the conditional channel
// target -> observed. Zero-mass target symbols raise NullSupport unless
// drop_null is set, in which case they are pruned from the returned pair.
std::pair<Prior, Channel> forward_pair(const JointDist& j, Axis target, Axis observed,
                                       bool drop_null = false);

// Removes zero-mass symbols of the given axis from the joint itself.
JointDist prune_null_symbols(const JointDist& j, Axis axis);

// A prior over states, a finite action set and a bounded loss matrix.
struct DecisionProblem {
    Prior prior;                            // over states S
    Alphabet actions;
    std::vector<std::vector<double>> loss;  // loss[s][a]

    DecisionProblem(Prior prior_, Alphabet actions_, std::vector<std::vector<double>> loss_);

    double loss_sup() const noexcept { return loss_sup_; }  // max |entry|

private:
    double loss_sup_ = 0.0;
};

// L1 distance between two tables of equal length.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pid
