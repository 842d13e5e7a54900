#pragma once

// Slow, independent reference implementations used to check the library.

#include "sandpile/chipfiring.hpp"
#include "sandpile/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace sandpile {

// Readable gtest failure messages.
inline void PrintTo(const ChipConfig& u, std::ostream* os) {
    *os << "(";
    for (std::size_t i = 0; i < u.size(); ++i) *os << (i ? ", " : "") << u[i];
    *os << ")";
}

}  // namespace sandpile

namespace oracle {

using sandpile::ChipConfig;
using sandpile::Integer;
using sandpile::IntegerMatrix;
using sandpile::SinkedMultigraph;

#ifndef SANDPILE_FIXTURES
#define SANDPILE_FIXTURES "tests/fixtures"
#endif

inline sandpile::json fixture(const std::string& name) {
    std::ifstream in(std::string(SANDPILE_FIXTURES) + "/" + name);
    return sandpile::json::parse(in);
}

// Leibniz expansion over all permutations.
inline Integer permutation_determinant(const IntegerMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Integer det = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        Integer term = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < n && term != 0; ++i) term *= m(i, perm[i]);
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

struct UnionFind {
    std::vector<std::size_t> up;
    explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    std::size_t find(std::size_t x) { return up[x] == x ? x : up[x] = find(up[x]); }
    bool join(std::size_t a, std::size_t b) {
        a = find(a), b = find(b);
        if (a == b) return false;
        up[a] = b;
        return true;
    }
};

// Counts spanning trees by trying every (V-1)-subset of the expanded edge list.
inline std::uint64_t brute_force_spanning_trees(const SinkedMultigraph& g) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : g.edges())
        for (std::uint64_t k = 0; k < e.multiplicity; ++k) edges.emplace_back(e.u, e.v);
    const std::size_t n = g.vertex_count(), need = n - 1;
    if (edges.size() < need) return 0;
    std::vector<bool> pick(edges.size(), false);
    std::fill(pick.begin(), pick.begin() + need, true);
    std::uint64_t count = 0;
    do {
        UnionFind uf(n);
        bool tree = true;
        for (std::size_t i = 0; i < edges.size() && tree; ++i)
            if (pick[i]) tree = uf.join(edges[i].first, edges[i].second);
        count += tree;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return count;
}

// Topples one unstable site at a time, chosen uniformly at random.
struct NaiveResult {
    ChipConfig stable;
    std::vector<Integer> odometer;
};

inline NaiveResult random_order_stabilize(const SinkedMultigraph& g, const ChipConfig& start, std::mt19937_64& rng) {
    std::vector<Integer> u = start.chips();
    std::vector<Integer> odometer(u.size());
    while (true) {
        std::vector<std::size_t> unstable;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (u[i] >= static_cast<unsigned long>(g.degree(i))) unstable.push_back(i);
        if (unstable.empty()) break;
        const std::size_t x = unstable[std::uniform_int_distribution<std::size_t>(0, unstable.size() - 1)(rng)];
        u[x] -= static_cast<unsigned long>(g.degree(x));
        odometer[x] += 1;
        for (const auto& l : g.links(x)) u[l.site] += static_cast<unsigned long>(l.multiplicity);
    }
    return {ChipConfig(std::move(u)), std::move(odometer)};
}

// The unique site set S with S = {x : u(x) <= #(children of x in S)}, found
// by trying every subset. `children` lists tree children by site.
inline std::vector<std::size_t> brute_force_critical(const std::vector<std::vector<std::size_t>>& children,
                                                     const std::vector<long>& u) {
    const std::size_t n = u.size();
    std::vector<std::vector<std::size_t>> fixed_points;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool fixed = true;
        for (std::size_t x = 0; x < n && fixed; ++x) {
            long critical_children = 0;
            for (auto c : children[x]) critical_children += (mask >> c) & 1;
            fixed = ((mask >> x) & 1) == static_cast<std::uint64_t>(u[x] <= critical_children);
        }
        if (fixed) {
            std::vector<std::size_t> s;
            for (std::size_t x = 0; x < n; ++x)
                if ((mask >> x) & 1) s.push_back(x);
            fixed_points.push_back(std::move(s));
        }
    }
    if (fixed_points.size() != 1) return {n + 1};  // sentinel: not unique
    return fixed_points.front();
}

// Connected loopless multigraph on `sites` + 1 vertices, sink last.
inline SinkedMultigraph random_multigraph(std::mt19937_64& rng, std::size_t sites, std::uint64_t max_multiplicity = 3,
                                          double density = 0.5) {
    const std::size_t n = sites + 1;
    std::uniform_int_distribution<std::uint64_t> mult(1, max_multiplicity);
    std::bernoulli_distribution coin(density);
    std::vector<sandpile::Edge> edges;
    // A random spanning path keeps everything connected to the sink.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 1; i < n; ++i) edges.push_back({order[i - 1], order[i], mult(rng)});
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (coin(rng)) edges.push_back({u, v, mult(rng)});
    return SinkedMultigraph(n, sites, edges);
}

inline ChipConfig random_config(std::mt19937_64& rng, std::size_t sites, long max_chips) {
    std::uniform_int_distribution<long> chips(0, max_chips);
    std::vector<Integer> u(sites);
    for (auto& x : u) x = chips(rng);
    return ChipConfig(std::move(u));
}

inline ChipConfig random_stable(std::mt19937_64& rng, const SinkedMultigraph& g) {
    std::vector<Integer> u(g.site_count());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = static_cast<unsigned long>(std::uniform_int_distribution<std::uint64_t>(0, g.degree(i) - 1)(rng));
    return ChipConfig(std::move(u));
}

inline IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long range) {
    std::uniform_int_distribution<long> entry(-range, range);
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(rng);
    return m;
}

}  // namespace oracle
