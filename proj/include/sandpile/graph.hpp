#pragma once

#include "sandpile/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sandpile {

using Vertex = std::size_t;
using Multiplicity = std::uint64_t;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    Multiplicity multiplicity = 1;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite loopless multigraph with a distinguished sink.
///
/// Chip configurations live on the non-sink vertices, addressed by a dense
/// "site" index: vertices in increasing order with the sink skipped. Builders
/// in this header always put the sink last, so site i is vertex i.
class SinkedMultigraph {
public:
    /// One neighbouring site and the number of parallel edges to it.
    struct Link {
        std::size_t site;
        Multiplicity multiplicity;
    };

    /// Validates and canonicalises the edge list. Parallel entries for the
    /// same pair are merged. Throws std::invalid_argument on a loop, an
    /// out-of-range endpoint, a zero multiplicity, or a vertex with no path
    /// to the sink.
    SinkedMultigraph(std::size_t vertex_count, Vertex sink, std::span<const Edge> edges,
                     std::vector<std::string> labels = {});

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    Vertex sink() const noexcept { return sink_; }
    std::size_t site_count() const noexcept { return vertex_count_ - 1; }

    Vertex vertex_of(std::size_t site) const noexcept { return site < sink_ ? site : site + 1; }
    std::size_t site_of(Vertex v) const;

    /// Degree d_i of the site (edges to the sink included).
    Multiplicity degree(std::size_t site) const { return degree_[site]; }
    /// beta(x): number of edges from the site to the sink.
    Multiplicity sink_edges(std::size_t site) const { return to_sink_[site]; }
    /// Site-to-site links, sorted by site.
    std::span<const Link> links(std::size_t site) const { return links_[site]; }

    /// Multiplicity d_uv between two vertices (sink allowed).
    Multiplicity multiplicity(Vertex u, Vertex v) const;

    /// Canonical edge list: u < v, sorted, one entry per adjacent pair.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const SinkedMultigraph& a, const SinkedMultigraph& b) {
        return a.vertex_count_ == b.vertex_count_ && a.sink_ == b.sink_ && a.edges_ == b.edges_;
    }

private:
    std::size_t vertex_count_;
    Vertex sink_;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    std::vector<Multiplicity> degree_;
    std::vector<Multiplicity> to_sink_;
    std::vector<std::vector<Link>> links_;
};

/// Finite rooted tree given by a parent map.
class RootedTree {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    /// parents[root] must be npos and every other entry a valid vertex.
    /// Throws std::invalid_argument unless the map describes a single tree.
    explicit RootedTree(std::vector<std::size_t> parents);

    std::size_t size() const noexcept { return parent_.size(); }
    std::size_t root() const noexcept { return root_; }
    std::size_t parent(std::size_t v) const { return parent_[v]; }
    const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }
    bool is_leaf(std::size_t v) const { return children_[v].empty(); }
    const std::vector<std::size_t>& parents() const noexcept { return parent_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> children_;
    std::size_t root_ = npos;
};

/// Wired tree: leaves of `tree` collapse to one sink, plus one root-sink
/// edge. Non-sink vertices are numbered in BFS order (root first, children in
/// the order given by the tree), the sink is last. Throws if the root is a
/// leaf.
SinkedMultigraph build_wired_tree(const RootedTree& tree);

/// The wired d-regular tree of height n (n >= 2, d >= 3). Vertices carry
/// word labels over {1,...,d-1}; the root is the empty word.
SinkedMultigraph build_wired_regular_tree(unsigned d, unsigned n);

/// Root of degree d with d branches shaped like the wired regular tree of
/// height n+1, and no root-sink edge (d >= 3, n >= 1).
SinkedMultigraph build_wired_ball(unsigned d, unsigned n);

/// Number of non-sink vertices of the wired regular tree: 1 + a + ... + a^(n-2).
std::size_t regular_tree_site_count(unsigned d, unsigned n);

/// Word label for a tree site; letters are written without separator when
/// max_letter <= 9 and dot-separated otherwise. The empty word is "".
std::string word_label(std::span<const unsigned> word, unsigned max_letter);

/// Reduced Laplacian with negative diagonal: -d_i on the diagonal, d_ij off it.
IntegerMatrix reduced_laplacian(const SinkedMultigraph& g);

/// |det| of the reduced Laplacian, i.e. the number of spanning trees.
Integer spanning_tree_count(const SinkedMultigraph& g);

}  // namespace sandpile
