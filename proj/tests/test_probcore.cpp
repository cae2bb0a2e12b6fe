#include <doctest.h>

#include <cmath>

#include "pid/io.hpp"
#include "pid/measures.hpp"
#include "pid/oracle.hpp"
#include "pid/types.hpp"
#include "support.hpp"

using namespace pid;
using namespace testsupport;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("validate_joint accepts RDN and rejects bad tables") {
    Alphabet b({"0", "1"});
    std::vector<double> rdn(8, 0.0);
    rdn[0] = 0.5;
    rdn[7] = 0.5;
    JointDist j = validate_joint(b, b, b, rdn);
    CHECK(j.at(0, 0, 0) == doctest::Approx(0.5));
    CHECK(j.at(1, 1, 1) == doctest::Approx(0.5));

    std::vector<double> short_mass(8, 0.0);
    short_mass[0] = 0.49;
    short_mass[7] = 0.49;
    CHECK_THROWS_AS(validate_joint(b, b, b, short_mass), MassNotOne);
    // renormalize accepts the same table
    JointDist fixed = validate_joint(b, b, b, short_mass, kMassTol, true);
    CHECK(fixed.at(0, 0, 0) == doctest::Approx(0.5));

    std::vector<double> neg(8, 0.125);
    neg[3] = -0.01;
    neg[4] = 0.135;
    CHECK_THROWS_AS(validate_joint(b, b, b, neg), NegativeMass);

    CHECK_THROWS_AS(validate_joint(b, b, b, std::vector<double>(7, 0.125)), DimensionMismatch);
}

TEST_CASE("forward_pair on the canonical fixtures") {
    SUBCASE("RDN gives the identity channel") {
        auto [pi, chan] = forward_pair(fix_rdn(), Axis::S, Axis::Y);
        CHECK(pi[0] == doctest::Approx(0.5));
        CHECK(chan.at(0, 0) == doctest::Approx(1.0));
        CHECK(chan.at(0, 1) == doctest::Approx(0.0));
        CHECK(chan.at(1, 1) == doctest::Approx(1.0));
    }
    SUBCASE("XOR gives the uninformative channel") {
        auto [pi, chan] = forward_pair(fix_xor(), Axis::S, Axis::Y);
        CHECK(pi[1] == doctest::Approx(0.5));
        for (int s = 0; s < 2; ++s)
            for (int y = 0; y < 2; ++y) CHECK(chan.at(s, y) == doctest::Approx(0.5));
    }
    SUBCASE("erasure fixture: S->Z is an erasure channel with mass 1/3") {
        auto [pi, chan] = forward_pair(fix_erase(), Axis::S, Axis::Z);
        CHECK(pi[0] == doctest::Approx(0.5));
        CHECK(chan.at(0, 0) == doctest::Approx(2.0 / 3.0));
        CHECK(chan.at(0, 1) == doctest::Approx(1.0 / 3.0));  // the erasure symbol
        CHECK(chan.at(0, 2) == doctest::Approx(0.0));
        CHECK(chan.at(1, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(chan.at(1, 2) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("reconstruction reproduces the pair marginal") {
        JointDist j = random_joint({3, 2, 3, 99, 0.0});
        auto [pi, chan] = forward_pair(j, Axis::S, Axis::Y);
        auto pm = j.pair_marginal(Axis::S, Axis::Y);
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t y = 0; y < 2; ++y)
                CHECK(pi[s] * chan.at(s, y) == doctest::Approx(pm[s][y]).epsilon(1e-12));
    }
    SUBCASE("zero-mass target symbol") {
        Alphabet s3({"a", "b", "c"});
        Alphabet b({"0", "1"});
        std::vector<double> t(12, 0.0);
        t[0] = 0.5;                 // (a,0,0)
        t[(1 * 2 + 1) * 2 + 1] = 0.5;  // (b,1,1); symbol c has no mass
        JointDist j(s3, b, b, t);
        CHECK_THROWS_AS(forward_pair(j, Axis::S, Axis::Y), NullSupport);
        auto [pi, chan] = forward_pair(j, Axis::S, Axis::Y, /*drop_null=*/true);
        CHECK(pi.size() == 2);
        CHECK(pi.alphabet().symbol(1) == "b");
        CHECK(chan.at(1, 1) == doctest::Approx(1.0));
    }
}

TEST_CASE("compose laws") {
    Alphabet b({"0", "1"});
    Channel mu = random_channel(2, 3, 7);
    SUBCASE("identity is neutral") {
        Channel id = Channel::identity(mu.output());
        Channel c = compose(id, mu);
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t y = 0; y < 3; ++y) CHECK(c.at(s, y) == doctest::Approx(mu.at(s, y)));
    }
    SUBCASE("concatenated erasure channels compose to erasure(1/3)") {
        Alphabet e({"0", "e", "1"});
        auto erasure = [&](double eps) {
            // rows from {0,e,1}: the erasure symbol is absorbing
            return Channel(e, e,
                           {{1 - eps, eps, 0.0}, {0.0, 1.0, 0.0}, {0.0, eps, 1 - eps}});
        };
        // S -> Y with eps1 = 1/6, on binary input embedded via rows 0 and 2
        Channel first(b, e, {{5.0 / 6.0, 1.0 / 6.0, 0.0}, {0.0, 1.0 / 6.0, 5.0 / 6.0}});
        Channel total = compose(erasure(0.2), first);
        CHECK(total.at(0, 0) == doctest::Approx(2.0 / 3.0));
        CHECK(total.at(0, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(total.at(1, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(total.at(1, 2) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("constant-output channel absorbs") {
        Prior point(Alphabet({"x", "y"}), {1.0, 0.0});
        Channel constant = Channel::constant(mu.output(), point);
        Channel c = compose(constant, mu);
        for (std::size_t s = 0; s < 2; ++s) {
            CHECK(c.at(s, 0) == doctest::Approx(1.0));
            CHECK(c.at(s, 1) == doctest::Approx(0.0));
        }
    }
    SUBCASE("mismatched alphabets throw") {
        CHECK_THROWS_AS(compose(mu, mu), AlphabetMismatch);
    }
    SUBCASE("row-stochasticity is preserved on random pairs") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Channel pre = random_channel(3, 4, seed);
            Channel post = random_channel(4, 2, seed + 1000);
            Channel c = compose(post, pre);
            for (std::size_t s = 0; s < 3; ++s) {
                double total = 0.0;
                for (std::size_t y = 0; y < 2; ++y) {
                    total += c.at(s, y);
                    CHECK(c.at(s, y) >= 0.0);
                }
                CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("kl divergence") {
    Alphabet b({"0", "1"});
    Prior half(b, {0.5, 0.5});
    Prior point(b, {1.0, 0.0});
    CHECK(kl(half, half) == doctest::Approx(0.0));
    CHECK(kl(point, half) == doctest::Approx(1.0));
    CHECK(kl(half, point) == kInf);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Channel c = random_channel(1, 4, seed);
        Channel d = random_channel(1, 4, seed + 77);
        CHECK(kl_bits(c.row(0), d.row(0)) >= 0.0);
        CHECK(kl_bits(c.row(0), c.row(0)) == doctest::Approx(0.0));
    }
}

TEST_CASE("shannon quantities on the fixtures") {
    CHECK(mutual_info_pair(fix_ex1a(), Axis::S) == doctest::Approx(2.0));
    CHECK(cond_mutual_info(fix_xor(), Axis::S, Axis::Y, Axis::Z) == doctest::Approx(1.0));
    CHECK(cond_mutual_info(fix_erase(), Axis::S, Axis::Y, Axis::Z) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK(mutual_info(fix_xor(), Axis::S, Axis::Y) == doctest::Approx(0.0));
    CHECK(mutual_info(fix_erase(), Axis::S, Axis::Y) == doctest::Approx(5.0 / 6.0));
    CHECK(mutual_info(fix_erase(), Axis::S, Axis::Z) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("mutual information is symmetric and obeys the chain rule") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        JointDist j = random_joint({3, 3, 2, seed, 0.0});
        CHECK(mutual_info(j, Axis::S, Axis::Y) ==
              doctest::Approx(mutual_info(j, Axis::Y, Axis::S)).epsilon(1e-10));
        double chain = mutual_info(j, Axis::S, Axis::Y) +
                       cond_mutual_info(j, Axis::S, Axis::Z, Axis::Y);
        CHECK(mutual_info_pair(j, Axis::S) == doctest::Approx(chain).epsilon(1e-10));
        coinformation(j);  // throws if the symmetric forms disagree
    }
}

TEST_CASE("optimal risk") {
    Alphabet b({"0", "1"});
    Prior half(b, {0.5, 0.5});
    std::vector<std::vector<double>> zero_one = {{0.0, 1.0}, {1.0, 0.0}};
    DecisionProblem dp(half, Alphabet({"a0", "a1"}), zero_one);

    CHECK(optimal_risk(dp, Channel::identity(b)) == doctest::Approx(0.0));
    CHECK(optimal_risk(dp, Channel::constant(b, half)) == doctest::Approx(0.5));

    SUBCASE("erasure(1/3) with 0-1 loss: brute-force oracle agrees with 1/6") {
        Alphabet e({"0", "e", "1"});
        Channel erasure(b, e, {{2.0 / 3, 1.0 / 3, 0.0}, {0.0, 1.0 / 3, 2.0 / 3}});
        // enumerate all deterministic strategies Z -> A
        double best = 1e9;
        for (int a0 = 0; a0 < 2; ++a0)
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) {
                    int strat[3] = {a0, a1, a2};
                    double risk = 0.0;
                    for (int s = 0; s < 2; ++s)
                        for (int z = 0; z < 3; ++z)
                            risk += 0.5 * erasure.at(s, z) * zero_one[s][strat[z]];
                    best = std::min(best, risk);
                }
        CHECK(best == doctest::Approx(1.0 / 6.0));
        CHECK(optimal_risk(dp, erasure) == doctest::Approx(best));
    }

    SUBCASE("monotone under garbling") {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            Channel mu = random_channel(2, 3, seed);
            Channel post = random_channel(3, 3, seed + 500);
            Channel garbled = compose(post, mu);
            std::vector<std::vector<double>> loss(2, std::vector<double>(3));
            Rng rng(seed + 999);
            for (auto& row : loss)
                for (double& v : row) v = 2.0 * rng.next_double() - 1.0;
            DecisionProblem rdp(half, Alphabet::numbered(3, "a"), loss);
            CHECK(optimal_risk(rdp, garbled) >= optimal_risk(rdp, mu) - 1e-12);
        }
    }
}

TEST_CASE("priors flag full support") {
    Alphabet b({"0", "1"});
    CHECK(Prior(b, {0.5, 0.5}).full_support());
    CHECK_FALSE(Prior(b, {1.0, 0.0}).full_support());
    CHECK_THROWS_AS(Prior(b, {0.7, 0.7}), MassNotOne);
}
