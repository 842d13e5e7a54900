#pragma once

#include "sandpile/graph.hpp"

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sandpile {

/// Nonnegative chip counts indexed by the sites of a graph.
///
/// A configuration does not hold on to its graph; operations taking a graph
/// reject configurations whose length differs from the graph's site count.
class ChipConfig {
public:
    ChipConfig() = default;
    /// All-zero configuration on `sites` sites.
    explicit ChipConfig(std::size_t sites) : chips_(sites) {}
    /// Throws std::invalid_argument on a negative entry.
    explicit ChipConfig(std::vector<Integer> chips);
    ChipConfig(std::initializer_list<long> chips);

    std::size_t size() const noexcept { return chips_.size(); }
    const Integer& operator[](std::size_t site) const { return chips_[site]; }
    const std::vector<Integer>& chips() const noexcept { return chips_; }

    /// Adds `count` (>= 0) chips at `site`.
    void add(std::size_t site, const Integer& count);

    ChipConfig& operator+=(const ChipConfig& other);
    friend ChipConfig operator+(ChipConfig a, const ChipConfig& b) { return a += b; }
    /// k-fold sum, k >= 0.
    friend ChipConfig operator*(const Integer& k, const ChipConfig& u);

    bool is_zero() const;

    friend bool operator==(const ChipConfig& a, const ChipConfig& b) { return a.chips_ == b.chips_; }
    friend std::strong_ordering operator<=>(const ChipConfig& a, const ChipConfig& b);

private:
    std::vector<Integer> chips_;
};

struct StabilizationResult {
    ChipConfig stable;
    /// Number of topplings performed at each site.
    std::vector<Integer> odometer;
};

bool is_stable(const SinkedMultigraph& g, const ChipConfig& u);

/// One chip (or `count` chips) at a single site.
ChipConfig single_chip(const SinkedMultigraph& g, std::size_t site, const Integer& count = 1);
/// beta: number of sink edges at each site.
ChipConfig sink_adjacency(const SinkedMultigraph& g);
/// The maximal stable configuration, d_i - 1 chips everywhere.
ChipConfig max_stable(const SinkedMultigraph& g);

/// Topples unstable sites until the configuration is stable.
///
/// Unstable sites wait in a FIFO queue; a dequeued site fires floor(chips /
/// degree) times at once. The result does not depend on the order of
/// topplings. Throws std::invalid_argument on a size mismatch.
StabilizationResult stabilize(const SinkedMultigraph& g, ChipConfig u);

/// u + Delta * odometer, computed independently of the toppling loop.
/// Throws std::invalid_argument if the result has a negative entry.
ChipConfig apply_topplings(const SinkedMultigraph& g, const ChipConfig& u, const std::vector<Integer>& odometer);

/// (u + v) stabilized.
ChipConfig add_and_stabilize(const SinkedMultigraph& g, const ChipConfig& u, const ChipConfig& v);

/// Burning test: a stable u is recurrent iff stabilizing u + beta topples every
/// site exactly once. Throws std::invalid_argument if u is not stable.
bool is_recurrent_burning(const SinkedMultigraph& g, const ChipConfig& u);

/// The recurrent identity e = (2m - (2m)°)°, with m the maximal stable
/// configuration. Verified by the burning test and e + e = e; a failed
/// verification throws std::logic_error.
ChipConfig identity(const SinkedMultigraph& g);

/// Recurrent representative (v + e)° of the class of v.
ChipConfig recurrent_rep(const SinkedMultigraph& g, const ChipConfig& v);

/// Least k >= 1 with (k u)° = e. Throws std::invalid_argument if u is not
/// recurrent.
Integer element_order(const SinkedMultigraph& g, const ChipConfig& u);

/// All recurrent configurations in lexicographic order (site 0 most
/// significant). Throws std::length_error if the number of stable
/// configurations exceeds `bound`.
std::vector<ChipConfig> enumerate_recurrent(const SinkedMultigraph& g, std::uint64_t bound = 1'000'000);

/// The sandpile group of a graph realised on recurrent configurations, with
/// the identity and group order computed once.
class SandpileGroup {
public:
    explicit SandpileGroup(const SinkedMultigraph& g);

    const SinkedMultigraph& graph() const noexcept { return *graph_; }
    const ChipConfig& identity() const noexcept { return identity_; }
    /// Number of spanning trees; equals the number of recurrent configurations.
    const Integer& order() const noexcept { return order_; }

    ChipConfig add(const ChipConfig& u, const ChipConfig& v) const { return add_and_stabilize(*graph_, u, v); }
    ChipConfig rep(const ChipConfig& v) const;
    bool is_recurrent(const ChipConfig& u) const { return is_recurrent_burning(*graph_, u); }
    /// Least k >= 1 with (k u)° = e; iteration is capped at the group order.
    Integer order_of(const ChipConfig& u) const;
    /// (k u)° for a recurrent u and k >= 0, by repeated doubling.
    ChipConfig multiple(const Integer& k, const ChipConfig& u) const;
    /// The additive inverse of a recurrent u.
    ChipConfig inverse(const ChipConfig& u) const;

private:
    const SinkedMultigraph* graph_;
    ChipConfig identity_;
    Integer order_;
};

}  // namespace sandpile
