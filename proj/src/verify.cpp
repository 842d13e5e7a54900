#include "sandpile/verify.hpp"

#include "sandpile/closed_forms.hpp"
#include "sandpile/tree.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace sandpile {

json ClaimReport::to_json() const {
    return json{{"claim", claim}, {"instance", instance}, {"expected", expected}, {"computed", computed}, {"pass", pass}};
}

RootedTree non_split_example_tree() {
    constexpr auto root = RootedTree::npos;
    return RootedTree({root, 0, 0, 1, 1, 1, 2, 2, 2});
}

namespace {

json str(const Integer& x) { return to_decimal(x); }
json str(std::uint64_t x) { return std::to_string(x); }

json level_json(const std::optional<LevelVector>& v) {
    if (!v) return nullptr;
    json out = json::array();
    for (auto x : v->entries) out.push_back(std::to_string(x));
    return out;
}

json regular_instance(unsigned d, unsigned n) { return json{{"degree", str(d)}, {"height", str(n)}}; }

std::vector<unsigned> degrees_or(const VerifyParams& p, std::vector<unsigned> fallback) {
    if (p.degree) return {*p.degree};
    return fallback;
}

unsigned top_height(const VerifyParams& p, unsigned fallback) {
    if (p.max_height) return *p.max_height;
    if (p.height) return *p.height;
    return fallback;
}

void require_degree(unsigned d) {
    if (d < 3) throw std::invalid_argument("--degree must be at least 3");
}

struct NamedTree {
    std::string name;
    WiredTree tree;
};

// Default tree set for the exhaustive claims, or the one the caller named.
std::vector<std::function<NamedTree()>> tree_instances(const VerifyParams& p,
                                                       std::vector<std::pair<unsigned, unsigned>> regular_defaults) {
    std::vector<std::function<NamedTree()>> out;
    auto regular = [](unsigned d, unsigned n) {
        return [d, n] {
            return NamedTree{"regular d=" + std::to_string(d) + " n=" + std::to_string(n), WiredTree(build_wired_regular_tree(d, n))};
        };
    };
    if (p.tree) {
        out.push_back([t = *p.tree] { return NamedTree{"tree-file", WiredTree(t)}; });
        return out;
    }
    if (p.degree || p.height) {
        const unsigned d = p.degree.value_or(3), n = p.height.value_or(3);
        require_degree(d);
        if (n < 2) throw std::invalid_argument("--height must be at least 2");
        out.push_back(regular(d, n));
        return out;
    }
    for (auto [d, n] : regular_defaults) out.push_back(regular(d, n));
    out.push_back([] { return NamedTree{"non-split example", WiredTree(non_split_example_tree())}; });
    return out;
}

std::vector<ClaimTask> lemma_1_1(const VerifyParams& p) {
    std::vector<ClaimTask> tasks;
    const unsigned top = top_height(p, 7);
    for (unsigned d : degrees_or(p, {3, 4, 5})) {
        require_degree(d);
        for (unsigned n = 2; n <= top; ++n)
            tasks.push_back([d, n] {
                std::vector<Integer> t{Integer(1)};  // t_1 = 1 in the sum form
                for (unsigned k = 2; k <= n; ++k) t.push_back(spanning_tree_count(build_wired_regular_tree(d, k)));
                const Integer& det = t.back();
                const Integer sum_form = spanning_tree_sum_form(d, n, std::span(t).first(n - 1));
                json computed{{"sum_form", str(sum_form)}, {"recurrence", nullptr}};
                bool pass = sum_form == det;
                if (n >= 4) {
                    const Integer rec = spanning_tree_recurrence(d, n, t[n - 2], t[n - 3]);
                    computed["recurrence"] = str(rec);
                    pass = pass && rec == det;
                }
                return ClaimReport{"lemma-1.1", regular_instance(d, n), json{{"determinant", str(det)}}, computed, pass};
            });
    }
    return tasks;
}

std::vector<ClaimTask> eq_1_2(const VerifyParams& p) {
    std::vector<ClaimTask> tasks;
    const unsigned top = top_height(p, 7);
    for (unsigned d : degrees_or(p, {3, 4, 5})) {
        require_degree(d);
        for (unsigned n = 2; n <= top; ++n)
            tasks.push_back([d, n] {
                const Integer det = spanning_tree_count(build_wired_regular_tree(d, n));
                const Integer prod = spanning_tree_product(d, n);
                return ClaimReport{"eq-1.2", regular_instance(d, n), str(det), str(prod), det == prod};
            });
    }
    return tasks;
}

std::vector<ClaimTask> theorem_1_2(const VerifyParams& p) {
    std::vector<ClaimTask> tasks;
    const unsigned top = top_height(p, 6);
    for (unsigned d : degrees_or(p, {3, 4, 5})) {
        require_degree(d);
        for (unsigned n = 2; n <= top; ++n)
            tasks.push_back([d, n] {
                const auto closed = theorem_decomposition(d, n);
                const GroupDecomposition expected = canonical_form(closed.summands);
                const GroupDecomposition computed = sandpile_group(build_wired_regular_tree(d, n));
                json instance = regular_instance(d, n);
                instance["summands"] = summands_to_json(closed.summands);
                return ClaimReport{"theorem-1.2", instance, decomposition_to_json(expected),
                                   decomposition_to_json(computed), expected == computed};
            });
    }
    return tasks;
}

std::vector<ClaimTask> burning_vs_critical(const VerifyParams& p) {
    std::vector<ClaimTask> tasks;
    const std::uint64_t bound = p.bound;
    for (auto make : tree_instances(p, {{3, 2}, {3, 3}}))
        tasks.push_back([make, bound] {
            const NamedTree nt = make();
            const auto& g = nt.tree.graph();
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < g.site_count(); ++i) {
                if (g.degree(i) > bound / total) throw std::length_error("stable configurations exceed --bound");
                total *= g.degree(i);
            }
            std::uint64_t recurrent = 0, disagreements = 0;
            std::vector<Integer> digits(g.site_count());
            for (std::uint64_t c = 0; c < total; ++c) {
                const ChipConfig u(digits);
                const bool burn = is_recurrent_burning(g, u);
                const bool crit = is_recurrent_critical(nt.tree, u);
                recurrent += burn;
                disagreements += burn != crit;
                for (std::size_t k = digits.size(); k-- > 0;) {
                    if (++digits[k] < static_cast<unsigned long>(g.degree(k))) break;
                    digits[k] = 0;
                }
            }
            const Integer trees = spanning_tree_count(g);
            return ClaimReport{"burning-vs-critical",
                               json{{"tree", nt.name}, {"stable_configurations", str(total)}},
                               json{{"recurrent", str(trees)}, {"disagreements", "0"}},
                               json{{"recurrent", str(recurrent)}, {"disagreements", str(disagreements)}},
                               disagreements == 0 && trees == recurrent};
        });
    return tasks;
}

std::vector<ClaimTask> lemma_4_1(const VerifyParams& p) {
    const unsigned d = p.degree.value_or(3), n = p.height.value_or(4);
    require_degree(d);
    if (n < 2) throw std::invalid_argument("--height must be at least 2");
    const Integer columns = root_subgroup_order(d, n);
    if (columns > 100'000) throw std::invalid_argument("root subgroup too large to list");
    // One task computes both sequences; the per-column reports are split out afterwards.
    auto shared = std::make_shared<std::vector<ClaimReport>>();
    auto once = std::make_shared<std::once_flag>();
    auto compute = [=] {
        std::call_once(*once, [&] {
            const RegularWiredTree t(d, n);
            const auto multiples = root_multiples(t);
            const auto orbit = lex_orbit(t);
            const std::size_t count = std::max(multiples.size(), orbit.size());
            for (std::size_t k = 0; k < count; ++k) {
                std::optional<LevelVector> fired, lex;
                if (k < multiples.size()) fired = t.level_vector(multiples[k]);
                if (k < orbit.size()) lex = orbit[k];
                json instance = regular_instance(d, n);
                instance["k"] = str(k + 1);
                shared->push_back({"lemma-4.1", instance, level_json(lex), level_json(fired), fired && lex && *fired == *lex});
            }
            const bool ends_at_identity = !multiples.empty() && multiples.back() == identity(t.graph());
            shared->push_back({"lemma-4.1/period", regular_instance(d, n), str(root_subgroup_order(d, n)),
                               str(std::uint64_t{multiples.size()}),
                               ends_at_identity && multiples.size() == orbit.size() && Integer(static_cast<unsigned long>(multiples.size())) == root_subgroup_order(d, n)});
        });
    };
    std::vector<ClaimTask> tasks;
    const std::size_t slots = columns.get_ui() + 1;
    for (std::size_t i = 0; i < slots; ++i)
        tasks.push_back([=] {
            compute();
            if (i < shared->size()) return (*shared)[i];
            return ClaimReport{"lemma-4.1", regular_instance(d, n), nullptr, "missing column", false};
        });
    return tasks;
}

ClaimReport symmetrize_report(unsigned d, unsigned n, std::uint64_t seed) {
    const RegularWiredTree t(d, n);
    const auto& g = t.graph();
    const auto multiples = root_multiples(t);
    std::size_t retraction_failures = 0;
    for (const auto& m : multiples)
        if (symmetrize(t, m) != m) ++retraction_failures;

    // Exhaustive over recurrent configurations when small, else a random sample.
    std::vector<ChipConfig> sample;
    std::uint64_t stable = 1;
    bool exhaustive = true;
    for (std::size_t i = 0; i < g.site_count() && exhaustive; ++i) {
        stable *= g.degree(i);
        exhaustive = stable <= 100'000;
    }
    if (exhaustive) {
        sample = enumerate_recurrent(g, 100'000);
    } else {
        const SandpileGroup grp(g);
        std::mt19937_64 rng(seed);
        for (int s = 0; s < 50; ++s) {
            std::vector<Integer> chips(g.site_count());
            for (std::size_t i = 0; i < chips.size(); ++i)
                chips[i] = static_cast<unsigned long>(std::uniform_int_distribution<Multiplicity>(0, g.degree(i) - 1)(rng));
            sample.push_back(grp.rep(ChipConfig(std::move(chips))));
        }
    }
    std::size_t orbit_failures = 0;
    for (const auto& u : sample) {
        const ChipConfig pu = symmetrize(t, u);
        const auto lv = t.level_vector(pu);
        if (!lv || !is_recurrent_form(*lv, d) || !is_recurrent_burning(g, pu) || symmetrize(t, pu) != pu) ++orbit_failures;
    }
    json instance = regular_instance(d, n);
    instance["recurrent_checked"] = str(std::uint64_t{sample.size()});
    instance["exhaustive"] = exhaustive;
    return ClaimReport{"prop-4.3-symmetrize", instance,
                       json{{"retraction_failures", "0"}, {"orbit_failures", "0"}},
                       json{{"retraction_failures", str(std::uint64_t{retraction_failures})},
                            {"orbit_failures", str(std::uint64_t{orbit_failures})}},
                       retraction_failures == 0 && orbit_failures == 0};
}

std::vector<ClaimTask> prop_4_2(const VerifyParams& p) {
    std::vector<ClaimTask> tasks;
    const unsigned top = top_height(p, 5);
    const unsigned low = p.height && !p.max_height ? *p.height : 2;
    const std::uint64_t seed = p.seed;
    for (unsigned d : degrees_or(p, {3, 4})) {
        require_degree(d);
        for (unsigned n = low; n <= top; ++n) {
            tasks.push_back([d, n] {
                const RegularWiredTree t(d, n);
                const Integer order = element_order(t.graph(), root_hat(t.graph()));
                const auto multiples = root_multiples(t);
                bool level_constant = true;
                for (const auto& m : multiples) level_constant = level_constant && t.level_vector(m).has_value();
                // Count recurrent-form level vectors directly.
                std::uint64_t forms = 0;
                LevelVector v{std::vector<std::uint64_t>(n - 1, 0)};
                while (true) {
                    forms += is_recurrent_form(v, d);
                    std::size_t i = 0;
                    while (i < v.entries.size() && ++v.entries[i] == d) v.entries[i++] = 0;
                    if (i == v.entries.size()) break;
                }
                const Integer expected = root_subgroup_order(d, n);
                return ClaimReport{"prop-4.2", regular_instance(d, n), str(expected),
                                   json{{"element_order", str(order)},
                                        {"level_constant_recurrent", str(forms)},
                                        {"multiples_constant_on_levels", level_constant}},
                                   order == expected && Integer(static_cast<unsigned long>(forms)) == expected && level_constant};
            });
            tasks.push_back([d, n, seed] { return symmetrize_report(d, n, seed); });
        }
    }
    return tasks;
}

std::vector<ClaimTask> prop_4_3_counterexample(const VerifyParams&) {
    return {[] {
        const WiredTree t(non_split_example_tree());
        const auto& g = t.graph();
        const SandpileGroup grp(g);
        const GroupDecomposition dec = sandpile_group(g);
        const ChipConfig r = root_hat(g);
        const Integer r_order = grp.order_of(r);
        const ChipConfig x{2, 0, 3};
        const bool x_recurrent = grp.is_recurrent(x);
        const ChipConfig four_x = grp.multiple(4, x);
        const Integer x_order = x_recurrent ? grp.order_of(x) : Integer(0);
        const bool pass = dec.invariant_factors() == std::vector<Integer>{40} && r == ChipConfig{2, 3, 3} && r_order == 10 &&
                          x_recurrent && four_x == r && x_order == 40;
        return ClaimReport{"prop-4.3-counterexample", json{{"tree", "non-split example"}},
                           json{{"group", json::array({"40"})}, {"r_hat", json::array({"2", "3", "3"})},
                                {"r_hat_order", "10"}, {"witness", json::array({"2", "0", "3"})},
                                {"four_witness", json::array({"2", "3", "3"})}, {"witness_order", "40"}},
                           json{{"group", integers_to_json(dec.invariant_factors())},
                                {"r_hat", integers_to_json(r.chips())},
                                {"r_hat_order", str(r_order)},
                                {"witness", integers_to_json(x.chips())},
                                {"four_witness", integers_to_json(four_x.chips())},
                                {"witness_order", str(x_order)}},
                           pass};
    }};
}

std::vector<ClaimTask> theorem_3_4(const VerifyParams& p) {
    std::vector<ClaimTask> tasks;
    BranchIsomorphismOptions options;
    options.bound = p.bound;
    options.seed = p.seed;
    for (auto make : tree_instances(p, {{3, 3}, {3, 4}}))
        tasks.push_back([make, options] {
            const NamedTree nt = make();
            const auto r = verify_branch_isomorphism(nt.tree, options);
            return ClaimReport{"theorem-3.4", json{{"tree", nt.name}, {"samples", str(std::uint64_t{options.samples})}},
                               json{{"quotient_order", str(r.right_quotient_order)}},
                               json{{"group_order", str(r.group_order)},
                                    {"root_order", str(r.root_order)},
                                    {"branch_sum_order", str(r.branch_sum_order)},
                                    {"diagonal_order", str(r.diagonal_order)},
                                    {"quotient_order", str(r.left_quotient_order)},
                                    {"branches_recurrent", r.branches_recurrent},
                                    {"well_defined", r.well_defined},
                                    {"homomorphism", r.homomorphism},
                                    {"surjective", r.surjective},
                                    {"injective", r.injective},
                                    {"identity_law", r.identity_law},
                                    {"sampled_pairs", str(std::uint64_t{r.sampled_pairs})}},
                               r.pass() && r.sampled_pairs >= options.samples};
        });
    return tasks;
}

std::vector<ClaimTask> theorem_5_1(const VerifyParams& p) {
    std::vector<std::pair<unsigned, unsigned>> balls;
    if (p.degree || p.ball_n) {
        const unsigned d = p.degree.value_or(3);
        require_degree(d);
        if (p.ball_n) {
            balls.emplace_back(d, *p.ball_n);
        } else {
            for (unsigned n = 1; n <= top_height(p, 3); ++n) balls.emplace_back(d, n);
        }
    } else {
        balls = {{3, 1}, {3, 2}, {3, 3}, {4, 1}, {4, 2}};
    }
    std::vector<std::uint64_t> primes = p.prime ? std::vector<std::uint64_t>{*p.prime} : std::vector<std::uint64_t>{5, 7, 13};
    for (auto prime : primes)
        if (!is_prime(prime)) throw std::invalid_argument("--prime must be prime");

    std::vector<ClaimTask> tasks;
    for (auto [d, n] : balls) {
        if (n < 1) throw std::invalid_argument("--n must be at least 1");
        auto group = std::make_shared<std::optional<GroupDecomposition>>();
        auto once = std::make_shared<std::once_flag>();
        auto dec = [=]() -> const GroupDecomposition& {
            std::call_once(*once, [&] { *group = sandpile_group(build_wired_ball(d, n)); });
            return **group;
        };
        json base{{"degree", str(d)}, {"n", str(n)}};
        tasks.push_back([=] {
            const auto& g = dec();
            const auto quotient = ball_quotient_decomposition(d, n);
            Integer quotient_order = 1;
            for (const auto& s : quotient) quotient_order *= ipow(s.modulus, s.multiplicity);
            const Integer expected = ball_root_subgroup_order(d, n) * quotient_order;
            json instance = base;
            instance["quotient_summands"] = summands_to_json(quotient);
            return ClaimReport{"theorem-5.1/order", instance, str(expected), str(g.order()), expected == g.order()};
        });
        for (auto prime : primes) {
            if (d % prime == 0 || (d - 1) % prime == 0) continue;  // outside the theorem's hypothesis
            tasks.push_back([=] {
                const Integer formula = sylow_rank_ball_formula(d, n, prime);
                const std::size_t rank = sylow_rank(dec(), prime);
                json instance = base;
                instance["prime"] = str(prime);
                instance["t_p"] = str(compute_tp(d, prime));
                return ClaimReport{"theorem-5.1", instance, str(formula), str(std::uint64_t{rank}),
                                   formula == static_cast<unsigned long>(rank)};
            });
        }
    }
    return tasks;
}

using ClaimBuilder = std::vector<ClaimTask> (*)(const VerifyParams&);

const std::map<std::string, ClaimBuilder>& registry() {
    static const std::map<std::string, ClaimBuilder> claims{
        {"lemma-1.1", lemma_1_1},
        {"eq-1.2", eq_1_2},
        {"theorem-1.2", theorem_1_2},
        {"burning-vs-critical", burning_vs_critical},
        {"lemma-4.1", lemma_4_1},
        {"prop-4.2", prop_4_2},
        {"prop-4.3-counterexample", prop_4_3_counterexample},
        {"theorem-3.4", theorem_3_4},
        {"theorem-5.1", theorem_5_1},
    };
    return claims;
}

}  // namespace

const std::vector<std::string>& claim_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

std::vector<ClaimTask> claim_tasks(const std::string& claim, const VerifyParams& params) {
    auto it = registry().find(claim);
    if (it == registry().end()) throw std::invalid_argument("unknown claim: " + claim);
    return it->second(params);
}

std::vector<ClaimReport> run_tasks(const std::vector<ClaimTask>& tasks, unsigned threads) {
    std::vector<ClaimReport> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                out[i] = tasks[i]();
            } catch (const std::exception& e) {
                out[i] = ClaimReport{"error", nullptr, nullptr, json{{"error", e.what()}}, false};
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < count; ++i) pool.emplace_back(worker);
    worker();
    return out;
}

}  // namespace sandpile
