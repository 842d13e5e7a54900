#pragma once

#include "sandpile/io.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sandpile {

/// One checked instance of a claim:
/// {"claim": name, "instance": {...}, "expected": ..., "computed": ..., "pass": bool}
struct ClaimReport {
    std::string claim;
    json instance;
    json expected;
    json computed;
    bool pass = false;

    json to_json() const;
};

struct VerifyParams {
    std::optional<unsigned> degree;
    std::optional<unsigned> height;
    std::optional<unsigned> max_height;
    std::optional<unsigned> ball_n;
    std::optional<std::uint64_t> prime;
    std::optional<RootedTree> tree;
    std::uint64_t seed = 1;
    std::uint64_t bound = 1'000'000;
};

using ClaimTask = std::function<ClaimReport()>;

/// lemma-1.1, eq-1.2, theorem-1.2, burning-vs-critical, lemma-4.1, prop-4.2,
/// prop-4.3-counterexample, theorem-3.4, theorem-5.1.
const std::vector<std::string>& claim_names();

/// The instances a claim checks under the given parameters, in output order.
/// Throws std::invalid_argument for an unknown claim or unusable parameters.
std::vector<ClaimTask> claim_tasks(const std::string& claim, const VerifyParams& params);

/// Runs tasks on up to `threads` workers; results keep task order. A task
/// that throws yields a failing report carrying the error message.
std::vector<ClaimReport> run_tasks(const std::vector<ClaimTask>& tasks, unsigned threads);

/// Root with two children, each with three leaf children: a wired tree whose
/// root subgroup is not a direct summand.
RootedTree non_split_example_tree();

}  // namespace sandpile
