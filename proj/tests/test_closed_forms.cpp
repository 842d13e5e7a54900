#include "sandpile/closed_forms.hpp"

#include <gtest/gtest.h>

using namespace sandpile;

TEST(GeometricQ, FirstValues) {
    EXPECT_EQ(geometric_q(3, 1), 1);
    EXPECT_EQ(geometric_q(3, 2), 3);
    EXPECT_EQ(geometric_q(3, 4), 15);
    EXPECT_EQ(geometric_q(4, 3), 13);
    EXPECT_EQ(geometric_q(5, 3), 21);
}

TEST(RootSubgroupOrder, Values) {
    EXPECT_EQ(root_subgroup_order(3, 4), 15);
    EXPECT_EQ(root_subgroup_order(3, 2), 3);
    EXPECT_EQ(root_subgroup_order(4, 3), 13);
    for (unsigned d = 3; d <= 6; ++d)
        for (unsigned n = 2; n <= 8; ++n) EXPECT_EQ(root_subgroup_order(d, n), geometric_q(d, n));
    EXPECT_THROW(root_subgroup_order(2, 4), std::invalid_argument);
}

TEST(SpanningTrees, RecurrenceExamples) {
    EXPECT_EQ(spanning_tree_recurrence(3, 4, 21, 3), 945);
    EXPECT_EQ(spanning_tree_recurrence(3, 5, 945, 21), Integer(945) * 1953);
    EXPECT_THROW(spanning_tree_recurrence(3, 3, 3, 1), std::invalid_argument);
}

TEST(SpanningTrees, SumFormStartsAtOne) {
    const Integer t[] = {1, 3, 21};
    EXPECT_EQ(spanning_tree_sum_form(3, 4, t), 945);
    EXPECT_EQ(spanning_tree_sum_form(3, 2, std::span<const Integer>(t, 1)), 3);
    EXPECT_THROW(spanning_tree_sum_form(3, 4, std::span<const Integer>(t, 2)), std::invalid_argument);
}

TEST(SpanningTrees, ThreeRoutesAgree) {
    for (unsigned d : {3u, 4u, 5u}) {
        std::vector<Integer> t{1};
        for (unsigned n = 2; n <= 7; ++n) {
            const Integer det = spanning_tree_count(build_wired_regular_tree(d, n));
            t.push_back(det);
            EXPECT_EQ(spanning_tree_product(d, n), det) << "d=" << d << " n=" << n;
            EXPECT_EQ(spanning_tree_sum_form(d, n, std::span(t).first(n - 1)), det);
            if (n >= 4) EXPECT_EQ(spanning_tree_recurrence(d, n, t[n - 2], t[n - 3]), det);
        }
    }
    EXPECT_EQ(spanning_tree_product(3, 2), 3);
    EXPECT_EQ(spanning_tree_product(3, 4), 945);
    EXPECT_EQ(spanning_tree_product(4, 3), 208);
}

TEST(ClosedFormDecomposition, Instances) {
    using L = CyclicSummandList;
    EXPECT_EQ(theorem_decomposition(3, 4).summands, (L{{3, 2}, {7, 1}, {15, 1}}));
    EXPECT_EQ(theorem_decomposition(3, 2).summands, (L{{3, 1}}));
    EXPECT_EQ(theorem_decomposition(4, 4).summands, (L{{4, 6}, {13, 2}, {40, 1}}));
    for (unsigned d : {3u, 4u, 5u})
        for (unsigned n = 2; n <= 7; ++n) EXPECT_EQ(theorem_decomposition(d, n).order(), spanning_tree_product(d, n));
}

TEST(ClosedFormDecomposition, MatchesSmithForm) {
    for (unsigned d : {3u, 4u})
        for (unsigned n = 2; n <= 5; ++n)
            EXPECT_TRUE(decomposition_equals(theorem_decomposition(d, n).summands, sandpile_group(build_wired_regular_tree(d, n))))
                << "d=" << d << " n=" << n;
}

TEST(Ball, QuotientDecomposition) {
    using L = CyclicSummandList;
    EXPECT_EQ(ball_quotient_decomposition(3, 2), (L{{7, 2}, {3, 3}}));
    EXPECT_EQ(ball_quotient_decomposition(3, 1), (L{{3, 2}}));
    EXPECT_EQ(ball_root_subgroup_order(4, 2), 36);
    for (auto [d, n] : {std::pair{3u, 1u}, {3u, 2u}, {3u, 3u}, {4u, 1u}, {4u, 2u}}) {
        Integer order = ball_root_subgroup_order(d, n);
        for (const auto& s : ball_quotient_decomposition(d, n)) order *= ipow(s.modulus, s.multiplicity);
        EXPECT_EQ(order, spanning_tree_count(build_wired_ball(d, n))) << "d=" << d << " n=" << n;
    }
}

TEST(Tp, ScanAndCaseFormula) {
    EXPECT_EQ(compute_tp(3, 7), 3u);
    EXPECT_EQ(compute_tp(3, 5), 4u);
    EXPECT_EQ(compute_tp(5, 3), 3u);
    EXPECT_EQ(compute_tp(4, 13), 3u);
    for (unsigned d = 3; d <= 12; ++d)
        for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 101u, 1009u}) {
            if (d % p == 0 || (d - 1) % p == 0) {
                EXPECT_THROW(compute_tp(d, p), std::invalid_argument);
                continue;
            }
            const auto tp = compute_tp(d, p);
            for (std::uint64_t k = 1; k < tp; ++k) EXPECT_NE(Integer(geometric_q(d, k) % p), 0);
            EXPECT_EQ(Integer(geometric_q(d, tp) % p), 0);
        }
    EXPECT_THROW(compute_tp(3, 9), std::invalid_argument);
}

TEST(SylowRankFormula, Examples) {
    EXPECT_EQ(sylow_rank_ball_formula(3, 2, 7), 2);
    EXPECT_EQ(sylow_rank_ball_formula(3, 3, 5), 2);
    EXPECT_EQ(sylow_rank_ball_formula(3, 3, 7), 3);
    EXPECT_THROW(sylow_rank_ball_formula(3, 2, 2), std::invalid_argument);
}

TEST(SylowRankFormula, MatchesSmithForm) {
    for (auto [d, n] : {std::pair{3u, 1u}, {3u, 2u}, {3u, 3u}, {4u, 1u}, {4u, 2u}, {5u, 1u}, {5u, 2u}}) {
        const auto dec = sandpile_group(build_wired_ball(d, n));
        for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 31u}) {
            if (d % p == 0 || (d - 1) % p == 0) continue;
            EXPECT_EQ(sylow_rank_ball_formula(d, n, p), static_cast<unsigned long>(sylow_rank(dec, p)))
                << "d=" << d << " n=" << n << " p=" << p;
        }
    }
}
