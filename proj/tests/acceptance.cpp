// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "oracles.hpp"

#include "sandpile/closed_forms.hpp"
#include "sandpile/tree.hpp"
#include "sandpile/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace sandpile;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
        }
        pass = pass && ok;
    }
};

// Known orbit (k r)° on the ternary tree of height 4 as (a1, a2, a3).
const std::vector<std::vector<std::uint64_t>> kTernaryOrbit{
    {2, 0, 2}, {0, 1, 2}, {1, 1, 2}, {2, 1, 2}, {0, 2, 2}, {1, 2, 2}, {2, 2, 2}, {2, 2, 0},
    {2, 0, 1}, {0, 1, 1}, {1, 1, 1}, {2, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 2, 1}};

void ternary_orbit(Outcome& o) {
    const auto start = Clock::now();
    const RegularWiredTree t(3, 4);
    const auto multiples = root_multiples(t);
    const auto orbit = lex_orbit(t);
    const double elapsed = seconds_since(start);
    o.require(multiples.size() == 15 && orbit.size() == 15, "expected 15 columns");
    for (std::size_t k = 0; k < std::min<std::size_t>(15, multiples.size()); ++k) {
        const auto v = t.level_vector(multiples[k]);
        o.require(v && v->entries == kTernaryOrbit[k], "chip-firing column " + std::to_string(k + 1));
        if (k < orbit.size()) o.require(orbit[k].entries == kTernaryOrbit[k], "lex column " + std::to_string(k + 1));
    }
    o.require(!multiples.empty() && multiples.back() == identity(t.graph()), "15r is not e");
    o.require(elapsed < 1.0, "runtime over 1 s");
    o.detail << " [" << elapsed << " s]";
}

void cyclic_decomposition(Outcome& o) {
    double worst = 0;
    for (unsigned d : {3u, 4u, 5u})
        for (unsigned n = 2; n <= 6; ++n) {
            const auto start = Clock::now();
            const auto g = build_wired_regular_tree(d, n);
            const auto dec = sandpile_group(g);
            const double elapsed = seconds_since(start);
            worst = std::max(worst, elapsed);
            const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
            o.require(dec == canonical_form(theorem_decomposition(d, n).summands), tag);
            o.require(elapsed < 60.0, tag + " over 60 s");
            if (d == 5 && n == 6) o.require(g.site_count() == 341, "d=5 n=6 should be 341x341");
        }
    o.require(sandpile_group(build_wired_regular_tree(3, 4)).invariant_factors() == std::vector<Integer>{3, 3, 105},
              "d=3 n=4 is not [3, 3, 105]");
    o.detail << " [15 instances, slowest " << worst << " s]";
}

void spanning_trees(Outcome& o) {
    for (unsigned d : {3u, 4u, 5u}) {
        std::vector<Integer> t{1};
        for (unsigned n = 2; n <= 7; ++n) {
            const Integer det = spanning_tree_count(build_wired_regular_tree(d, n));
            t.push_back(det);
            const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
            o.require(spanning_tree_product(d, n) == det, tag + " product");
            if (n >= 4) o.require(spanning_tree_recurrence(d, n, t[n - 2], t[n - 3]) == det, tag + " recurrence");
            if (d == 3 && (n == 4 || n == 5))
                o.require(spanning_tree_sum_form(d, n, std::span(t).first(n - 1)) == det, tag + " sum form");
        }
    }
    o.detail << " [18 instances]";
}

void burning_vs_critical(Outcome& o) {
    const std::vector<std::pair<std::string, WiredTree>> trees{
        {"T2", WiredTree(build_wired_regular_tree(3, 2))},
        {"T3", WiredTree(build_wired_regular_tree(3, 3))},
        {"non-split", WiredTree(non_split_example_tree())}};
    const std::vector<std::uint64_t> expected{3, 21, 40};
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const auto& [name, t] = trees[i];
        const auto& g = t.graph();
        std::uint64_t total = 1;
        for (std::size_t s = 0; s < g.site_count(); ++s) total *= g.degree(s);
        std::vector<Integer> digits(g.site_count());
        std::uint64_t recurrent = 0, disagree = 0;
        for (std::uint64_t c = 0; c < total; ++c) {
            const ChipConfig u(digits);
            const bool burn = is_recurrent_burning(g, u);
            recurrent += burn;
            disagree += burn != is_recurrent_critical(t, u);
            for (std::size_t k = digits.size(); k-- > 0;) {
                if (++digits[k] < static_cast<unsigned long>(g.degree(k))) break;
                digits[k] = 0;
            }
        }
        o.require(disagree == 0, name + " disagreements");
        o.require(recurrent == expected[i], name + " recurrent count " + std::to_string(recurrent));
        o.detail << " " << name << ":" << recurrent << "/" << total;
    }
}

void counterexample(Outcome& o) {
    const WiredTree t(non_split_example_tree());
    const auto& g = t.graph();
    const SandpileGroup grp(g);
    o.require(sandpile_group(g).invariant_factors() == std::vector<Integer>{40}, "group is not [40]");
    const auto r = root_hat(g);
    o.require(element_order(g, r) == 10, "order of r is not 10");
    const ChipConfig x{2, 0, 3};
    o.require(grp.is_recurrent(x), "witness not recurrent");
    o.require(grp.multiple(4, x) == r, "(4x)° != r");
    o.require(element_order(g, x) == 40, "witness order is not 40");
    o.detail << " [x = (2; 0, 3)]";
}

void branch_quotients(Outcome& o) {
    const std::vector<std::pair<std::string, WiredTree>> trees{
        {"T3", WiredTree(build_wired_regular_tree(3, 3))},
        {"T4", WiredTree(build_wired_regular_tree(3, 4))},
        {"non-split", WiredTree(non_split_example_tree())}};
    for (const auto& [name, t] : trees) {
        const auto r = verify_branch_isomorphism(t);
        o.require(r.pass(), name + " isomorphism checks");
        o.require(r.left_quotient_order * r.root_order == r.group_order, name + " |SP|/|<r>|");
        o.require(r.right_quotient_order * r.diagonal_order == r.branch_sum_order, name + " right quotient");
        o.require(r.sampled_pairs >= 200, name + " fewer than 200 sampled pairs");
        o.detail << " " << name << ":" << r.left_quotient_order << "=" << r.right_quotient_order;
    }
}

void root_subgroup(Outcome& o) {
    for (unsigned d : {3u, 4u})
        for (unsigned n = 2; n <= 5; ++n) {
            const RegularWiredTree t(d, n);
            const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
            o.require(element_order(t.graph(), root_hat(t.graph())) == root_subgroup_order(d, n), tag + " order");
            for (const auto& m : root_multiples(t)) o.require(symmetrize(t, m) == m, tag + " retraction");
        }
    const RegularWiredTree t(3, 3);
    std::set<std::vector<std::uint64_t>> orbit;
    for (const auto& v : lex_orbit(t)) orbit.insert(v.entries);
    std::size_t checked = 0;
    for (const auto& u : enumerate_recurrent(t.graph())) {
        const auto levels = t.level_vector(symmetrize(t, u));
        o.require(levels && orbit.count(levels->entries), "symmetrize leaves the lex orbit");
        ++checked;
    }
    o.require(checked == 21, "T3 should have 21 recurrent configurations");
    o.detail << " [8 orders, " << checked << " recurrent on T3]";
}

void sylow_ranks(Outcome& o) {
    double worst = 0;
    const std::vector<std::pair<unsigned, unsigned>> balls{{3, 1}, {3, 2}, {3, 3}, {4, 1}, {4, 2}};
    for (auto [d, n] : balls) {
        const auto start = Clock::now();
        const auto dec = sandpile_group(build_wired_ball(d, n));
        for (std::uint64_t p : {5u, 7u, 13u}) {
            const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n) + " p=" + std::to_string(p);
            o.require(sylow_rank_ball_formula(d, n, p) == static_cast<unsigned long>(sylow_rank(dec, p)), tag);
        }
        const double elapsed = seconds_since(start);
        worst = std::max(worst, elapsed);
        o.require(elapsed < 30.0, "ball d=" + std::to_string(d) + " n=" + std::to_string(n) + " over 30 s");
    }
    o.require(sylow_rank_ball_formula(3, 2, 7) == 2 && sylow_rank(sandpile_group(build_wired_ball(3, 2)), 7) == 2,
              "d=3 n=2 p=7 should have rank 2");
    o.detail << " [15 instances, slowest ball " << worst << " s]";
}

void engine_properties(Outcome& o) {
    std::mt19937_64 rng(20240601);
    constexpr int kCases = 10'000;
    std::size_t odometer = 0, order = 0, counting = 0, smith = 0;
    for (int i = 0; i < kCases; ++i) {
        const auto g = oracle::random_multigraph(rng, 1 + i % 6, 3, 0.4);
        const auto u = oracle::random_config(rng, g.site_count(), 3 * (1 + i % 10));
        const auto fast = stabilize(g, u);
        odometer += is_stable(g, fast.stable) && apply_topplings(g, u, fast.odometer) == fast.stable;
        const auto slow = oracle::random_order_stabilize(g, u, rng);
        order += slow.stable == fast.stable && slow.odometer == fast.odometer;
    }
    for (int i = 0; i < kCases; ++i) {
        const auto g = oracle::random_multigraph(rng, 1 + i % 5, 2, 0.3);
        counting += Integer(static_cast<unsigned long>(enumerate_recurrent(g).size())) == spanning_tree_count(g);
    }
    for (int i = 0; i < kCases; ++i) {
        const std::size_t rows = 1 + i % 5, cols = 1 + (i / 5) % 5;
        const auto m = oracle::random_matrix(rng, rows, cols, 1 + i % 20);
        const auto f = smith_normal_form(m);
        bool ok = f.left * m * f.right == f.diagonal && iabs(bareiss_determinant(f.left)) == 1 &&
                  iabs(bareiss_determinant(f.right)) == 1;
        try {
            verify_smith_form(m, f);
        } catch (const std::logic_error&) {
            ok = false;
        }
        smith += ok;
    }
    o.require(odometer == kCases, "odometer identity");
    o.require(order == kCases, "toppling-order independence");
    o.require(counting == kCases, "|recurrent| = |det|");
    o.require(smith == kCases, "Smith reconstruction");
    o.detail << " [" << odometer << " odometer, " << order << " order, " << counting << " counting, " << smith
             << " Smith cases]";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"lexicographic orbit on the ternary tree of height 4", ternary_orbit},
        {"cyclic decomposition via Smith form, d in {3,4,5}, n in {2..6}", cyclic_decomposition},
        {"spanning-tree product = recurrence = |det|, d in {3,4,5}, n in {2..7}", spanning_trees},
        {"burning and criticality agree exhaustively", burning_vs_critical},
        {"root subgroup of the non-split tree is not a summand", counterexample},
        {"branch quotient orders agree", branch_quotients},
        {"root subgroup order and symmetrization", root_subgroup},
        {"Sylow ranks of wired balls", sylow_ranks},
        {"engine invariants on random cases", engine_properties},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = Clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failures += !o.pass;
        std::printf("%s %zu: %s%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.str().c_str(), seconds_since(start));
        std::fflush(stdout);
    }
    std::printf("%s: %zu/%zu criteria passed\n", failures ? "FAIL" : "PASS", criteria.size() - failures, criteria.size());
    return failures ? 1 : 0;
}
