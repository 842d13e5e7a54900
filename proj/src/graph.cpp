#include "sandpile/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <utility>

namespace sandpile {

SinkedMultigraph::SinkedMultigraph(std::size_t vertex_count, Vertex sink, std::span<const Edge> edges,
                                   std::vector<std::string> labels)
    : vertex_count_(vertex_count), sink_(sink), labels_(std::move(labels)) {
    if (vertex_count < 2) throw std::invalid_argument("graph needs a sink and at least one other vertex");
    if (sink >= vertex_count) throw std::invalid_argument("sink index out of range");
    if (!labels_.empty() && labels_.size() != vertex_count)
        throw std::invalid_argument("label count does not match vertex count");

    std::map<std::pair<Vertex, Vertex>, Multiplicity> merged;
    for (const Edge& e : edges) {
        if (e.u >= vertex_count || e.v >= vertex_count) throw std::invalid_argument("edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("loops are not allowed");
        if (e.multiplicity == 0) throw std::invalid_argument("edge multiplicity must be positive");
        merged[std::minmax(e.u, e.v)] += e.multiplicity;
    }
    edges_.reserve(merged.size());
    for (const auto& [uv, m] : merged) edges_.push_back({uv.first, uv.second, m});

    const std::size_t sites = vertex_count - 1;
    degree_.assign(sites, 0);
    to_sink_.assign(sites, 0);
    links_.assign(sites, {});
    std::vector<std::vector<Vertex>> adjacency(vertex_count);
    for (const Edge& e : edges_) {
        adjacency[e.u].push_back(e.v);
        adjacency[e.v].push_back(e.u);
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            if (a == sink) continue;
            const std::size_t s = site_of(a);
            degree_[s] += e.multiplicity;
            if (b == sink)
                to_sink_[s] += e.multiplicity;
            else
                links_[s].push_back({site_of(b), e.multiplicity});
        }
    }
    for (auto& l : links_)
        std::sort(l.begin(), l.end(), [](const Link& x, const Link& y) { return x.site < y.site; });

    std::vector<bool> seen(vertex_count, false);
    std::deque<Vertex> queue{sink};
    seen[sink] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : adjacency[v])
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                queue.push_back(w);
            }
    }
    if (reached != vertex_count) throw std::invalid_argument("some vertex has no path to the sink");
}

std::size_t SinkedMultigraph::site_of(Vertex v) const {
    if (v == sink_ || v >= vertex_count_) throw std::out_of_range("vertex is not a site");
    return v < sink_ ? v : v - 1;
}

Multiplicity SinkedMultigraph::multiplicity(Vertex u, Vertex v) const {
    auto key = std::minmax(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const Edge& e, const auto& k) {
        return std::pair{e.u, e.v} < std::pair{k.first, k.second};
    });
    return (it != edges_.end() && it->u == key.first && it->v == key.second) ? it->multiplicity : 0;
}

RootedTree::RootedTree(std::vector<std::size_t> parents) : parent_(std::move(parents)) {
    const std::size_t n = parent_.size();
    if (n == 0) throw std::invalid_argument("empty tree");
    children_.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
        if (parent_[v] == npos) {
            if (root_ != npos) throw std::invalid_argument("tree has more than one root");
            root_ = v;
        } else if (parent_[v] >= n || parent_[v] == v) {
            throw std::invalid_argument("invalid parent index");
        } else {
            children_[parent_[v]].push_back(v);
        }
    }
    if (root_ == npos) throw std::invalid_argument("tree has no root");
    // Every vertex must reach the root; a cycle would leave some vertex unreached.
    std::vector<std::size_t> stack{root_};
    std::size_t reached = 0;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        ++reached;
        for (std::size_t c : children_[v]) stack.push_back(c);
    }
    if (reached != n) throw std::invalid_argument("parent map contains a cycle");
}

std::string word_label(std::span<const unsigned> word, unsigned max_letter) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (max_letter > 9 && i > 0) out += '.';
        out += std::to_string(word[i]);
    }
    return out;
}

SinkedMultigraph build_wired_tree(const RootedTree& tree) {
    if (tree.size() < 2 || tree.is_leaf(tree.root()))
        throw std::invalid_argument("wired tree needs a root that is not a leaf");

    std::vector<std::size_t> order;  // BFS order of internal vertices
    std::vector<std::size_t> site(tree.size(), RootedTree::npos);
    std::deque<std::size_t> queue{tree.root()};
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        if (tree.is_leaf(v)) continue;
        site[v] = order.size();
        order.push_back(v);
        for (std::size_t c : tree.children(v)) queue.push_back(c);
    }
    const Vertex sink = order.size();
    std::vector<Edge> edges{{site[tree.root()], sink, 1}};
    std::vector<std::string> labels;
    for (std::size_t v : order) {
        labels.push_back(std::to_string(v));
        for (std::size_t c : tree.children(v))
            edges.push_back({site[v], tree.is_leaf(c) ? sink : site[c], 1});
    }
    labels.emplace_back("s");
    return SinkedMultigraph(order.size() + 1, sink, edges, std::move(labels));
}

std::size_t regular_tree_site_count(unsigned d, unsigned n) {
    std::size_t total = 0, level = 1;
    for (unsigned k = 0; k + 1 < n; ++k, level *= d - 1) total += level;
    return total;
}

namespace {

// Appends levels below a vertex at `first_site`; returns edges. Each vertex at
// the last level gets `a` edges to the sink.
void grow_levels(std::vector<Edge>& edges, std::vector<std::vector<unsigned>>& words,
                 std::vector<std::size_t> frontier, unsigned a, unsigned extra_levels, Vertex sink) {
    for (unsigned level = 0; level < extra_levels; ++level) {
        std::vector<std::size_t> next;
        for (std::size_t v : frontier)
            for (unsigned letter = 1; letter <= a; ++letter) {
                std::size_t c = words.size();
                auto w = words[v];
                w.push_back(letter);
                words.push_back(std::move(w));
                edges.push_back({v, c, 1});
                next.push_back(c);
            }
        frontier = std::move(next);
    }
    for (std::size_t v : frontier) edges.push_back({v, sink, a});
}

}  // namespace

SinkedMultigraph build_wired_regular_tree(unsigned d, unsigned n) {
    if (d < 3) throw std::invalid_argument("wired regular tree needs degree d >= 3");
    if (n < 2) throw std::invalid_argument("wired regular tree needs height n >= 2");
    const unsigned a = d - 1;
    const Vertex sink = regular_tree_site_count(d, n);
    std::vector<Edge> edges{{0, sink, 1}};
    std::vector<std::vector<unsigned>> words{{}};
    words.reserve(sink);
    // BFS construction visits each level in lexicographic word order.
    grow_levels(edges, words, {0}, a, n - 2, sink);
    std::vector<std::string> labels;
    labels.reserve(sink + 1);
    for (const auto& w : words) labels.push_back(word_label(w, a));
    labels.emplace_back("s");
    return SinkedMultigraph(sink + 1, sink, edges, std::move(labels));
}

SinkedMultigraph build_wired_ball(unsigned d, unsigned n) {
    if (d < 3) throw std::invalid_argument("wired ball needs degree d >= 3");
    if (n < 1) throw std::invalid_argument("wired ball needs n >= 1");
    const unsigned a = d - 1;
    const Vertex sink = 1 + d * regular_tree_site_count(d, n + 1);
    std::vector<Edge> edges;
    std::vector<std::vector<unsigned>> words{{}};
    std::vector<std::size_t> branch_roots;
    for (unsigned letter = 1; letter <= d; ++letter) {
        branch_roots.push_back(words.size());
        words.push_back({letter});
        edges.push_back({0, branch_roots.back(), 1});
    }
    grow_levels(edges, words, branch_roots, a, n - 1, sink);
    std::vector<std::string> labels;
    for (const auto& w : words) labels.push_back(word_label(w, d));
    labels.emplace_back("s");
    return SinkedMultigraph(sink + 1, sink, edges, std::move(labels));
}

IntegerMatrix reduced_laplacian(const SinkedMultigraph& g) {
    const std::size_t n = g.site_count();
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = -Integer(static_cast<unsigned long>(g.degree(i)));
        for (const auto& l : g.links(i)) m(i, l.site) = static_cast<unsigned long>(l.multiplicity);
    }
    return m;
}

Integer spanning_tree_count(const SinkedMultigraph& g) {
    return abs(sparse_symmetric_determinant(reduced_laplacian(g)));
}

}  // namespace sandpile
