#include "sandpile/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <stdexcept>

namespace sandpile {

json graph_to_json(const SinkedMultigraph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.multiplicity});
    return json{{"vertices", g.vertex_count()}, {"sink", g.sink()}, {"edges", std::move(edges)}, {"labels", g.labels()}};
}

SinkedMultigraph graph_from_json(const json& j) {
    try {
        const auto n = j.at("vertices").get<std::size_t>();
        const auto sink = j.at("sink").get<Vertex>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || (e.size() != 2 && e.size() != 3)) throw std::invalid_argument("edge must be [u, v] or [u, v, multiplicity]");
            edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>(), e.size() == 3 ? e[2].get<Multiplicity>() : 1});
        }
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        return SinkedMultigraph(n, sink, edges, std::move(labels));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed graph JSON: ") + e.what());
    }
}

std::string canonical_graph_text(const SinkedMultigraph& g) {
    json j = graph_to_json(g);
    j.erase("labels");
    return j.dump();
}

std::string graph_hash(const SinkedMultigraph& g) {
    const std::string text = canonical_graph_text(g);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

RootedTree rooted_tree_from_json(const json& j) {
    try {
        std::vector<std::size_t> parents;
        for (const auto& p : j.at("parents")) parents.push_back(p.is_null() ? RootedTree::npos : p.get<std::size_t>());
        return RootedTree(std::move(parents));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed tree JSON: ") + e.what());
    }
}

json rooted_tree_to_json(const RootedTree& t) {
    json parents = json::array();
    for (std::size_t p : t.parents()) parents.push_back(p == RootedTree::npos ? json(nullptr) : json(p));
    return json{{"parents", std::move(parents)}};
}

json integers_to_json(const std::vector<Integer>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(to_decimal(v));
    return out;
}

std::vector<Integer> integers_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of integers");
    std::vector<Integer> out;
    for (const auto& v : j) {
        if (v.is_string())
            out.push_back(parse_integer(v.get<std::string>()));
        else if (v.is_number_unsigned())
            out.emplace_back(static_cast<unsigned long>(v.get<std::uint64_t>()));
        else if (v.is_number_integer())
            out.emplace_back(static_cast<long>(v.get<std::int64_t>()));
        else
            throw std::invalid_argument("expected an integer or decimal string");
    }
    return out;
}

json config_to_json(const SinkedMultigraph& g, const ChipConfig& u) {
    if (u.size() != g.site_count()) throw std::invalid_argument("configuration does not match the graph");
    return json{{"graph_hash", graph_hash(g)}, {"chips", integers_to_json(u.chips())}};
}

ChipConfig config_from_json(const SinkedMultigraph& g, const json& j) {
    if (!j.is_object() || !j.contains("chips")) throw std::invalid_argument("configuration JSON needs a \"chips\" array");
    if (j.contains("graph_hash") && j.at("graph_hash") != graph_hash(g))
        throw std::invalid_argument("configuration belongs to a different graph");
    ChipConfig u(integers_from_json(j.at("chips")));
    if (u.size() != g.site_count()) throw std::invalid_argument("configuration length does not match the graph");
    return u;
}

json stabilization_to_json(const SinkedMultigraph& g, const StabilizationResult& r) {
    return json{{"graph_hash", graph_hash(g)},
                {"stable", integers_to_json(r.stable.chips())},
                {"odometer", integers_to_json(r.odometer)}};
}

json decomposition_to_json(const GroupDecomposition& dec) {
    return json{{"invariant_factors", integers_to_json(dec.invariant_factors())}, {"order", to_decimal(dec.order())}};
}

json summands_to_json(const CyclicSummandList& summands) {
    json out = json::array();
    for (const auto& s : summands) out.push_back({to_decimal(s.modulus), std::to_string(s.multiplicity)});
    return out;
}

}  // namespace sandpile
