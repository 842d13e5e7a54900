#pragma once

#include "sandpile/chipfiring.hpp"
#include "sandpile/group.hpp"

#include <json.hpp>

#include <string>

namespace sandpile {

using json = nlohmann::json;

/// {"vertices": N, "sink": i, "edges": [[u, v, m], ...], "labels": [...]}
/// with edges in canonical order, so dumping is byte-deterministic.
json graph_to_json(const SinkedMultigraph& g);
/// Throws std::invalid_argument on a malformed document.
SinkedMultigraph graph_from_json(const json& j);

/// Compact canonical text of the graph (labels excluded).
std::string canonical_graph_text(const SinkedMultigraph& g);
/// Hex SHA-256 of canonical_graph_text.
std::string graph_hash(const SinkedMultigraph& g);

/// {"parents": [null, 0, 0, ...]}; null marks the root.
RootedTree rooted_tree_from_json(const json& j);
json rooted_tree_to_json(const RootedTree& t);

/// Decimal strings for all big integers.
json integers_to_json(const std::vector<Integer>& values);
/// Accepts JSON integers or decimal strings.
std::vector<Integer> integers_from_json(const json& j);

/// {"graph_hash": hex, "chips": ["..."]}
json config_to_json(const SinkedMultigraph& g, const ChipConfig& u);
/// Checks the hash when present and the length always; throws
/// std::invalid_argument on a mismatch.
ChipConfig config_from_json(const SinkedMultigraph& g, const json& j);

json stabilization_to_json(const SinkedMultigraph& g, const StabilizationResult& r);

/// {"invariant_factors": ["..."], "order": "..."}
json decomposition_to_json(const GroupDecomposition& dec);
json summands_to_json(const CyclicSummandList& summands);

}  // namespace sandpile
