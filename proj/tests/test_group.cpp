#include "oracles.hpp"

#include "sandpile/group.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace sandpile;

namespace {

std::vector<Integer> ints(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

Integer abs_det(const IntegerMatrix& m) { return iabs(bareiss_determinant(m)); }

// Element-order histogram of a group given by invariant factors.
std::map<Integer, Integer> order_histogram(const std::vector<Integer>& factors) {
    std::map<Integer, Integer> hist;
    std::vector<Integer> digits(factors.size(), 0);
    while (true) {
        Integer order = 1;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            Integer g;
            mpz_gcd(g.get_mpz_t(), digits[i].get_mpz_t(), factors[i].get_mpz_t());
            const Integer element = factors[i] / g;
            mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), element.get_mpz_t());
        }
        hist[order] += 1;
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == factors[i]) digits[i++] = 0;
        if (i == digits.size()) break;
    }
    return hist;
}

}  // namespace

TEST(SmithForm, KnownMatrices) {
    const IntegerMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    const auto f = smith_normal_form(m);
    verify_smith_form(m, f);
    EXPECT_EQ(f.diagonal, (IntegerMatrix{{2, 0, 0}, {0, 6, 0}, {0, 0, 12}}));

    const IntegerMatrix rect{{6, 4}, {4, 6}, {2, 2}};
    const auto g = smith_normal_form(rect);
    verify_smith_form(rect, g);
    EXPECT_EQ(g.diagonal, (IntegerMatrix{{2, 0}, {0, 2}, {0, 0}}));

    const auto z = smith_normal_form(IntegerMatrix(2, 2));
    EXPECT_EQ(z.diagonal, IntegerMatrix(2, 2));
}

TEST(SmithForm, RandomMatricesReconstructWithUnimodularTransforms) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t r = 1 + trial % 6, c = 1 + (trial / 6) % 6;
        const auto m = oracle::random_matrix(rng, r, c, trial % 4 == 0 ? 30 : 5);
        const auto f = smith_normal_form(m);
        EXPECT_NO_THROW(verify_smith_form(m, f));
        EXPECT_EQ(f.left * m * f.right, f.diagonal);
        EXPECT_EQ(abs_det(f.left), 1);
        EXPECT_EQ(abs_det(f.right), 1);
        if (r == c) {
            Integer prod = 1;
            for (std::size_t i = 0; i < r; ++i) prod *= f.diagonal(i, i);
            EXPECT_EQ(prod, abs_det(m));
        }
    }
}

TEST(SmithForm, VerifierCatchesCorruption) {
    const IntegerMatrix m{{2, 1}, {1, 2}};
    auto f = smith_normal_form(m);
    verify_smith_form(m, f);
    auto bad = f;
    bad.diagonal(1, 1) += 1;
    EXPECT_THROW(verify_smith_form(m, bad), std::logic_error);
    bad = f;
    bad.left(0, 0) += 1;
    EXPECT_THROW(verify_smith_form(m, bad), std::logic_error);
    bad = f;
    bad.right_inverse(0, 1) += 2;
    EXPECT_THROW(verify_smith_form(m, bad), std::logic_error);
}

TEST(GroupDecomposition, DropsUnitsAndChecksTheChain) {
    const GroupDecomposition d(ints({1, 1, 3, 3, 105}));
    EXPECT_EQ(d.invariant_factors(), ints({3, 3, 105}));
    EXPECT_EQ(d.order(), 945);
    EXPECT_EQ(d.rank(), 3u);
    EXPECT_THROW(GroupDecomposition(ints({2, 3})), std::invalid_argument);
    EXPECT_THROW(GroupDecomposition(ints({0})), std::invalid_argument);
    EXPECT_EQ(GroupDecomposition(std::vector<Integer>{}).order(), 1);
}

TEST(CanonicalForm, PrimePowerMerge) {
    EXPECT_EQ(canonical_form({{3, 2}, {7, 1}, {15, 1}}).invariant_factors(), ints({3, 3, 105}));
    EXPECT_EQ(canonical_form({{4, 6}, {13, 2}, {40, 1}}).invariant_factors(), ints({4, 4, 4, 4, 4, 52, 520}));
    EXPECT_EQ(canonical_form({{2, 1}, {3, 1}}).invariant_factors(), ints({6}));
    EXPECT_EQ(canonical_form({{1, 5}}).invariant_factors(), ints({}));
    EXPECT_TRUE(decomposition_equals({{3, 2}, {7, 1}, {15, 1}}, GroupDecomposition(ints({3, 3, 105}))));
    EXPECT_TRUE(decomposition_equals({{3, 1}}, GroupDecomposition(ints({3}))));
    EXPECT_FALSE(decomposition_equals({{3, 1}}, GroupDecomposition(ints({9}))));
    EXPECT_FALSE(decomposition_equals({{2, 2}}, GroupDecomposition(ints({4}))));
}

TEST(Factorize, SmallAndLarge) {
    using F = std::vector<std::pair<Integer, unsigned>>;
    EXPECT_EQ(factorize(360), (F{{2, 3}, {3, 2}, {5, 1}}));
    EXPECT_EQ(factorize(1), F{});
    const Integer big = Integer(999983) * Integer("1000000000000000003");
    EXPECT_EQ(factorize(big), (F{{999983, 1}, {Integer("1000000000000000003"), 1}}));
}

TEST(SandpileGroup, KnownTrees) {
    EXPECT_EQ(sandpile_group(build_wired_regular_tree(3, 2)).invariant_factors(), ints({3}));
    EXPECT_EQ(sandpile_group(build_wired_regular_tree(3, 4)).invariant_factors(), ints({3, 3, 105}));
    EXPECT_EQ(sandpile_group(build_wired_tree(RootedTree({RootedTree::npos, 0, 0, 1, 1, 1, 2, 2, 2}))).invariant_factors(),
              ints({40}));
}

TEST(SandpileGroup, MatchesEnumeratedGroupStructure) {
    // Element-order histograms separate non-isomorphic abelian groups.
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 60; ++trial) {
        const auto g = oracle::random_multigraph(rng, 1 + trial % 4, 2, 0.5);
        const auto dec = sandpile_group(g);
        if (dec.order() > 40) continue;
        ++checked;
        const SandpileGroup grp(g);
        std::map<Integer, Integer> hist;
        for (const auto& u : enumerate_recurrent(g)) hist[grp.order_of(u)] += 1;
        EXPECT_EQ(hist, order_histogram(dec.invariant_factors())) << "trial " << trial;
        EXPECT_EQ(dec.order(), spanning_tree_count(g));
    }
    EXPECT_GE(checked, 30);
}

TEST(SylowRank, CountsFactorsDivisibleByP) {
    const GroupDecomposition d(ints({3, 3, 105}));
    EXPECT_EQ(sylow_rank(d, 3), 3u);
    EXPECT_EQ(sylow_rank(d, 5), 1u);
    EXPECT_EQ(sylow_rank(d, 11), 0u);
    EXPECT_THROW(sylow_rank(d, 4), std::invalid_argument);
}
