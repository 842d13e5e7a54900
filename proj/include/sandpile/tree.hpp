#pragma once

#include "sandpile/chipfiring.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sandpile {

struct WiredBranch;

/// A sinked multigraph whose sites form a tree hanging from a root site.
///
/// Edges between sites must be simple; any number of edges may run from a
/// site to the sink (collapsed leaves, plus the root-sink edge when present).
class WiredTree {
public:
    static constexpr std::size_t npos = RootedTree::npos;

    /// Throws std::invalid_argument if the sites do not form a tree with
    /// simple edges, or root_site is out of range.
    explicit WiredTree(SinkedMultigraph graph, std::size_t root_site = 0);
    explicit WiredTree(const RootedTree& tree) : WiredTree(build_wired_tree(tree)) {}

    const SinkedMultigraph& graph() const noexcept { return graph_; }
    std::size_t size() const noexcept { return parent_.size(); }
    std::size_t root() const noexcept { return root_; }
    std::size_t parent(std::size_t site) const { return parent_[site]; }
    /// C(x): children among the sites (collapsed leaves are not children).
    const std::vector<std::size_t>& children(std::size_t site) const { return children_[site]; }
    std::size_t depth(std::size_t site) const { return depth_[site]; }
    /// Sites ordered by non-increasing depth.
    const std::vector<std::size_t>& bottom_up() const noexcept { return bottom_up_; }
    /// Sites of each principal branch in BFS order from the branch root.
    const std::vector<std::vector<std::size_t>>& branch_sites() const noexcept { return branch_sites_; }

    /// The wired principal branches: the edge from each branch root to the
    /// root is redirected to the sink, so branch roots keep their degree.
    std::vector<WiredBranch> principal_branches() const;

private:
    SinkedMultigraph graph_;
    std::size_t root_;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> depth_;
    std::vector<std::size_t> bottom_up_;
    std::vector<std::vector<std::size_t>> branch_sites_;
};

struct WiredBranch {
    WiredTree tree;
    /// sites[i] is the site of the full tree that branch site i comes from.
    std::vector<std::size_t> sites;
};

/// Critical sites of a stable configuration, decided bottom-up: a site is
/// critical iff its chips do not exceed its number of critical children.
std::vector<bool> critical_vertices(const WiredTree& t, const ChipConfig& u);

/// Recurrence via criticality: every critical site holds exactly as many
/// chips as it has critical children. Throws std::invalid_argument if u is
/// not stable.
bool is_recurrent_critical(const WiredTree& t, const ChipConfig& u);

/// (a; u_1, ..., u_k): chips at the root and the restriction to each branch.
struct BranchSplit {
    Integer root_chips;
    std::vector<ChipConfig> branches;
    friend bool operator==(const BranchSplit&, const BranchSplit&) = default;
};

BranchSplit branch_split(const WiredTree& t, const ChipConfig& u);
/// Inverse of branch_split. Throws std::invalid_argument on an arity or
/// branch-size mismatch.
ChipConfig branch_join(const WiredTree& t, const BranchSplit& s);

/// r-hat: recurrent form of one chip at the root.
ChipConfig root_hat(const SinkedMultigraph& g, std::size_t root_site = 0);

struct BranchIsomorphismOptions {
    std::uint64_t bound = 1'000'000;  ///< cap on stable configurations per enumeration
    std::size_t samples = 200;        ///< random pairs for the homomorphism law
    std::uint64_t seed = 1;
};

/// Outcome of checking SP(T)/<r> against (+ SP(T^i)) / <(r_1, ..., r_k)>
/// through the map that forgets the root.
struct BranchIsomorphismReport {
    Integer group_order;           ///< |SP(T)|
    Integer root_order;            ///< |<r>|
    Integer branch_sum_order;      ///< prod |SP(T^i)|
    Integer diagonal_order;        ///< |<(r_1, ..., r_k)>|
    Integer left_quotient_order;   ///< number of cosets of <r>
    Integer right_quotient_order;  ///< number of cosets of the diagonal
    bool branches_recurrent = false;
    bool well_defined = false;
    bool homomorphism = false;
    bool surjective = false;
    bool injective = false;
    bool identity_law = false;
    std::size_t sampled_pairs = 0;

    bool pass() const {
        return branches_recurrent && well_defined && homomorphism && surjective && injective && identity_law &&
               left_quotient_order == right_quotient_order;
    }
};

/// Throws std::length_error when an enumeration exceeds options.bound.
BranchIsomorphismReport verify_branch_isomorphism(const WiredTree& t, const BranchIsomorphismOptions& options = {});

// ---------------------------------------------------------------------------
// Wired regular trees

/// Level vector (a_1, ..., a_{n-1}); a_1 is the root level.
struct LevelVector {
    std::vector<std::uint64_t> entries;
    friend bool operator==(const LevelVector&, const LevelVector&) = default;
};

/// 0 <= a_i <= d-1, and a_i = 0 forces a_1 = ... = a_{i-1} = d-1.
bool is_recurrent_form(const LevelVector& v, unsigned d);

/// Next recurrent level vector in cyclic lexicographic order (last entry most
/// significant, with (d-1, ..., d-1) followed by (d-1, ..., d-1, 0)).
/// Throws std::invalid_argument unless v is in recurrent form.
LevelVector lex_successor(const LevelVector& v, unsigned d);

/// The wired d-regular tree of height n with its word indexing: site words
/// have length <= n-2 over {1, ..., d-1}, listed level by level in
/// lexicographic order.
class RegularWiredTree {
public:
    RegularWiredTree(unsigned d, unsigned n);

    unsigned degree() const noexcept { return d_; }
    unsigned height() const noexcept { return n_; }
    const WiredTree& tree() const noexcept { return tree_; }
    const SinkedMultigraph& graph() const noexcept { return tree_.graph(); }
    std::size_t levels() const noexcept { return n_ - 1; }

    std::size_t site_of(std::span<const unsigned> word) const;
    std::vector<unsigned> word_of(std::size_t site) const;
    std::size_t level_of(std::size_t site) const { return tree_.depth(site); }

    /// Configuration with entries[k] chips on every site of level k.
    ChipConfig from_levels(std::span<const Integer> entries) const;
    ChipConfig from_levels(const LevelVector& v) const;
    /// The level vector of u, if u is constant on levels.
    std::optional<LevelVector> level_vector(const ChipConfig& u) const;

private:
    unsigned d_, n_;
    WiredTree tree_;
    std::vector<std::size_t> level_offset_;
};

/// sigma_alpha u, where (sigma_alpha u)(x) = u(sigma_alpha^-1 x) and sigma_i
/// cycles the i-th letter of every word of length >= i. alpha has n-2 entries,
/// taken mod d-1.
ChipConfig level_automorphism(const RegularWiredTree& t, std::span<const unsigned> alpha, const ChipConfig& u);

/// p(u) = ((d-1)^2 * sum over alpha of sigma_alpha u)°. Throws
/// std::invalid_argument unless u is recurrent.
ChipConfig symmetrize(const RegularWiredTree& t, const ChipConfig& u);

/// The multiples (k r)° for k = 1, ..., ord(r) computed by chip-firing; the
/// last entry is the identity.
std::vector<ChipConfig> root_multiples(const RegularWiredTree& t);

/// Orbit of lex_successor from r-hat's level vector until it returns.
std::vector<LevelVector> lex_orbit(const RegularWiredTree& t);

}  // namespace sandpile
