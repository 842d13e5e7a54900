#pragma once

#include "sandpile/graph.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace sandpile {

struct SmithForm {
    IntegerMatrix diagonal;  ///< d = u * m * v
    IntegerMatrix left;      ///< u, unimodular
    IntegerMatrix right;     ///< v, unimodular
    IntegerMatrix left_inverse;
    IntegerMatrix right_inverse;
};

/// Smith normal form by exact row and column operations.
///
/// Each pivot is the smallest nonzero entry (by absolute value) of the
/// remaining block, ties broken by fewest nonzeros in its row and column.
/// The diagonal is nonnegative with d_11 | d_22 | ... . The inverses of the
/// transforms are accumulated alongside them, so unimodularity can be checked
/// by u * u^-1 = I without a determinant.
SmithForm smith_normal_form(const IntegerMatrix& m);

/// Throws std::logic_error unless `f` is a valid Smith form of `m`: diagonal
/// shape, nonnegative divisibility chain, u*m*v = d, and u, v invertible over
/// the integers via the stored inverses.
void verify_smith_form(const IntegerMatrix& m, const SmithForm& f);

/// Isomorphism class of a finite abelian group as its invariant factors.
class GroupDecomposition {
public:
    GroupDecomposition() = default;
    /// Factors equal to 1 are dropped. Throws std::invalid_argument on a
    /// factor < 1 or a broken divisibility chain.
    explicit GroupDecomposition(std::vector<Integer> invariant_factors);

    const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }
    const Integer& order() const noexcept { return order_; }
    /// Number of cyclic factors in the invariant-factor decomposition.
    std::size_t rank() const noexcept { return factors_.size(); }

    friend bool operator==(const GroupDecomposition& a, const GroupDecomposition& b) {
        return a.factors_ == b.factors_;
    }

private:
    std::vector<Integer> factors_;
    Integer order_ = 1;
};

/// Direct sum of cyclic groups, each entry Z_modulus ^ multiplicity.
struct CyclicSummand {
    Integer modulus;
    std::uint64_t multiplicity = 1;
    friend bool operator==(const CyclicSummand&, const CyclicSummand&) = default;
};
using CyclicSummandList = std::vector<CyclicSummand>;

/// Prime factorisation by trial division, primes ascending.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);

/// Canonical invariant factors of the group a list of cyclic summands
/// describes, via the multiset of prime-power components.
GroupDecomposition canonical_form(const CyclicSummandList& summands);

/// True iff the group described by `a` is isomorphic to `b`.
bool decomposition_equals(const CyclicSummandList& a, const GroupDecomposition& b);

/// Sandpile group of the graph from the Smith form of its reduced Laplacian.
/// The Smith form is verified, and the group order is checked against the
/// spanning-tree count; a mismatch throws std::logic_error.
GroupDecomposition sandpile_group(const SinkedMultigraph& g);

/// Minimal number of generators of the p-part: invariant factors divisible
/// by p. Throws std::invalid_argument if p is not prime.
std::size_t sylow_rank(const GroupDecomposition& dec, std::uint64_t p);

}  // namespace sandpile
