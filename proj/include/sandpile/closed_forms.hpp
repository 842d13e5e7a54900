#pragma once

#include "sandpile/group.hpp"

#include <cstdint>
#include <span>

// Closed-form counts and decompositions for wired regular trees and balls.
// Throughout, a = d - 1 and q_k = 1 + a + ... + a^(k-1).

namespace sandpile {

Integer geometric_q(unsigned d, unsigned k);

/// |<r-hat>| in SP of the wired regular tree: ((d-1)^n - 1) / (d-2).
Integer root_subgroup_order(unsigned d, unsigned n);

/// t_n = t_{n-1}^(d-2) (d t_{n-1} - (d-1) t_{n-2}^(d-1)), valid for n >= 4.
Integer spanning_tree_recurrence(unsigned d, unsigned n, const Integer& t_prev, const Integer& t_prev2);

/// t_n = t_{n-1}^(d-1) + (d-1)^(n-1) prod_{k=1}^{n-1} t_k^(d-2), given
/// t_values = (t_1, ..., t_{n-1}). The product starts at t_1 = 1 (the empty
/// tree count), which is what makes the form agree with the recurrence.
Integer spanning_tree_sum_form(unsigned d, unsigned n, std::span<const Integer> t_values);

/// t_n = q_n prod_{k=1}^{n-2} q_{k+1}^(a^(n-2-k) (a-1)).
Integer spanning_tree_product(unsigned d, unsigned n);

struct ClosedFormDecomposition {
    unsigned d = 0;
    unsigned n = 0;
    CyclicSummandList summands;

    Integer order() const;
};

/// Cyclic decomposition of SP of the wired regular tree:
/// (q_k)^(a^(n-1-k) (a-1)) for k = 2..n-1, plus one q_n.
ClosedFormDecomposition theorem_decomposition(unsigned d, unsigned n);

/// SP(ball)/<r-hat>: (q_{n+1})^a plus (q_k)^((a-1) a^(n-k) (a+1)) for k = n..2.
CyclicSummandList ball_quotient_decomposition(unsigned d, unsigned n);

/// d (d-1)^n, the order of the root subgroup of the wired ball.
Integer ball_root_subgroup_order(unsigned d, unsigned n);

/// Least k >= 1 with p | q_k. Computed by scanning q_k mod p and by the
/// case formula (p if a = 1 mod p, else ord_p(a)); a disagreement throws
/// std::logic_error. Throws std::invalid_argument if p is not prime or
/// divides d(d-1).
std::uint64_t compute_tp(unsigned d, std::uint64_t p);

/// Sylow p-rank of SP(ball): d(d-2) * sum_{0 <= m < n, m = n mod t_p} (d-1)^m,
/// plus d-1 when n = -1 mod t_p. Same preconditions as compute_tp.
Integer sylow_rank_ball_formula(unsigned d, unsigned n, std::uint64_t p);

}  // namespace sandpile
