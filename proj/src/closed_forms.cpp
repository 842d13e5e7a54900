#include "sandpile/closed_forms.hpp"

#include <stdexcept>

namespace sandpile {

namespace {

void require_regular(unsigned d, unsigned n) {
    if (d < 3) throw std::invalid_argument("degree d must be at least 3");
    if (n < 2) throw std::invalid_argument("height n must be at least 2");
}

void require_admissible_prime(unsigned d, std::uint64_t p) {
    if (d < 3) throw std::invalid_argument("degree d must be at least 3");
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (d % p == 0 || (d - 1) % p == 0) throw std::invalid_argument("p must not divide d(d-1)");
}

std::uint64_t mulmod(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % m);
}

}  // namespace

Integer geometric_q(unsigned d, unsigned k) {
    Integer q = 0, power = 1;
    for (unsigned i = 0; i < k; ++i, power *= d - 1) q += power;
    return q;
}

Integer root_subgroup_order(unsigned d, unsigned n) {
    require_regular(d, n);
    Integer num = ipow(Integer(d - 1), n) - 1;
    Integer q;
    mpz_divexact_ui(q.get_mpz_t(), num.get_mpz_t(), d - 2);
    return q;
}

Integer spanning_tree_recurrence(unsigned d, unsigned n, const Integer& t_prev, const Integer& t_prev2) {
    if (d < 3) throw std::invalid_argument("degree d must be at least 3");
    if (n < 4) throw std::invalid_argument("the spanning-tree recurrence holds for n >= 4");
    return ipow(t_prev, d - 2) * (Integer(d) * t_prev - Integer(d - 1) * ipow(t_prev2, d - 1));
}

Integer spanning_tree_sum_form(unsigned d, unsigned n, std::span<const Integer> t_values) {
    if (d < 3) throw std::invalid_argument("degree d must be at least 3");
    if (n < 2 || t_values.size() != n - 1) throw std::invalid_argument("need t_1, ..., t_{n-1}");
    Integer product = 1;
    for (const auto& t : t_values) product *= ipow(t, d - 2);
    return ipow(t_values.back(), d - 1) + ipow(Integer(d - 1), n - 1) * product;
}

Integer spanning_tree_product(unsigned d, unsigned n) {
    require_regular(d, n);
    const Integer a = d - 1;
    Integer t = geometric_q(d, n);
    for (unsigned k = 1; k + 2 <= n; ++k) {
        const Integer exponent = ipow(a, n - 2 - k) * (a - 1);
        t *= ipow(geometric_q(d, k + 1), exponent.get_ui());
    }
    return t;
}

Integer ClosedFormDecomposition::order() const {
    Integer o = 1;
    for (const auto& s : summands) o *= ipow(s.modulus, s.multiplicity);
    return o;
}

ClosedFormDecomposition theorem_decomposition(unsigned d, unsigned n) {
    require_regular(d, n);
    const Integer a = d - 1;
    ClosedFormDecomposition out{d, n, {}};
    for (unsigned k = 2; k + 1 <= n; ++k) {
        const Integer copies = ipow(a, n - 1 - k) * (a - 1);
        out.summands.push_back({geometric_q(d, k), copies.get_ui()});
    }
    out.summands.push_back({geometric_q(d, n), 1});
    return out;
}

CyclicSummandList ball_quotient_decomposition(unsigned d, unsigned n) {
    if (d < 3) throw std::invalid_argument("degree d must be at least 3");
    if (n < 1) throw std::invalid_argument("ball needs n >= 1");
    const Integer a = d - 1;
    CyclicSummandList out{{geometric_q(d, n + 1), a.get_ui()}};
    for (unsigned k = n; k >= 2; --k) {
        const Integer copies = (a - 1) * ipow(a, n - k) * (a + 1);
        out.push_back({geometric_q(d, k), copies.get_ui()});
    }
    return out;
}

Integer ball_root_subgroup_order(unsigned d, unsigned n) { return Integer(d) * ipow(Integer(d - 1), n); }

std::uint64_t compute_tp(unsigned d, std::uint64_t p) {
    require_admissible_prime(d, p);
    const std::uint64_t a = (d - 1) % p;

    // Scan: q_k mod p, with q_{k+1} = a q_k + 1.
    std::uint64_t scanned = 0, q = 0;
    for (std::uint64_t k = 1; k <= p; ++k) {
        q = (mulmod(q, a, p) + 1) % p;
        if (q == 0) {
            scanned = k;
            break;
        }
    }

    std::uint64_t formula = 0;
    if (a == 1) {
        formula = p;
    } else {
        std::uint64_t power = a;
        for (std::uint64_t k = 1; k <= p; ++k, power = mulmod(power, a, p))
            if (power == 1) {
                formula = k;
                break;
            }
    }
    if (scanned == 0 || scanned != formula) throw std::logic_error("compute_tp: scan and case formula disagree");
    return scanned;
}

Integer sylow_rank_ball_formula(unsigned d, unsigned n, std::uint64_t p) {
    if (n < 1) throw std::invalid_argument("ball needs n >= 1");
    const std::uint64_t tp = compute_tp(d, p);
    Integer sum = 0;
    for (std::uint64_t m = 0; m < n; ++m)
        if (m % tp == n % tp) sum += ipow(Integer(d - 1), m);
    Integer rank = Integer(d) * Integer(d - 2) * sum;
    if ((n + 1) % tp == 0) rank += d - 1;
    return rank;
}

}  // namespace sandpile
